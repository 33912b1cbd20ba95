#include "ircur/mio.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ircur/errors.hpp"

namespace ircur {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'I', 'R', 'C', 'M'};
constexpr std::size_t kHeaderBytes = 12;

template <class T>
void put_le(std::string& out, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(const std::string& in, std::size_t offset) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, in.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("write failed for " + path.string());
}

// Skips whitespace and '#' comments in a PGM header.
void skip_pgm_space(const std::string& b, std::size_t& pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(b[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
}

std::size_t read_pgm_number(const std::string& b, std::size_t& pos) {
  skip_pgm_space(b, pos);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(b.data() + pos, b.data() + b.size(), value);
  if (ec != std::errc() || ptr == b.data() + pos) throw FormatError("PGM: expected a number", pos);
  pos = static_cast<std::size_t>(ptr - b.data());
  return value;
}

}  // namespace

MatrixFormat parse_matrix_format(const std::string& name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "bin") return MatrixFormat::Bin;
  throw ParameterError("unknown matrix format '" + name + "' (expected csv or bin)");
}

MatrixFormat format_for_path(const fs::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::Csv : MatrixFormat::Bin;
}

std::string encode_bin(const DenseMatrix& m) {
  if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX)
    throw ShapeError("BIN format holds at most 2^32-1 rows and columns");
  std::string out;
  out.reserve(kHeaderBytes + m.size() * sizeof(double));
  out.append(kMagic, 4);
  put_le(out, static_cast<std::uint32_t>(m.rows()));
  put_le(out, static_cast<std::uint32_t>(m.cols()));
  for (double v : m.data()) put_le(out, v);
  return out;
}

DenseMatrix decode_bin(const std::string& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("BIN: bad magic", 0);
  if (bytes.size() < kHeaderBytes) throw FormatError("BIN: truncated header", bytes.size());
  const auto rows = get_le<std::uint32_t>(bytes, 4);
  const auto cols = get_le<std::uint32_t>(bytes, 8);
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  const std::size_t need = kHeaderBytes + count * sizeof(double);
  if (bytes.size() < need) throw FormatError("BIN: truncated payload", bytes.size());
  if (bytes.size() > need) throw FormatError("BIN: trailing bytes", need);
  DenseMatrix m(rows, cols);
  auto data = m.data();
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t off = kHeaderBytes + k * sizeof(double);
    const double v = get_le<double>(bytes, off);
    if (!std::isfinite(v)) throw FormatError("BIN: non-finite value", off);
    data[k] = v;
  }
  return m;
}

std::string encode_csv(const DenseMatrix& m) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out.push_back(',');
      const auto res = std::to_chars(buf, buf + sizeof(buf), m(i, j), std::chars_format::general, 17);
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

DenseMatrix decode_csv(const std::string& text) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::size_t end = eol;
    if (end > pos && text[end - 1] == '\r') --end;
    if (end == pos) {
      pos = eol + 1;
      continue;
    }
    std::size_t fields = 0;
    std::size_t p = pos;
    while (true) {
      while (p < end && text[p] == ' ') ++p;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data() + p, text.data() + end, v);
      if (ec != std::errc() || ptr == text.data() + p) throw FormatError("CSV: expected a number", p);
      if (!std::isfinite(v)) throw FormatError("CSV: non-finite value", p);
      values.push_back(v);
      ++fields;
      p = static_cast<std::size_t>(ptr - text.data());
      while (p < end && text[p] == ' ') ++p;
      if (p == end) break;
      if (text[p] != ',') throw FormatError("CSV: expected ','", p);
      ++p;
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw FormatError("CSV: row " + std::to_string(rows) + " has " + std::to_string(fields) +
                            " fields, expected " + std::to_string(cols),
                        pos);
    }
    ++rows;
    pos = eol + 1;
  }
  if (rows == 0) throw FormatError("CSV: no data", 0);

  // values are row-major here.
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = values[i * cols + j];
  return m;
}

void write_matrix(const fs::path& path, const DenseMatrix& m, MatrixFormat format) {
  spill(path, format == MatrixFormat::Bin ? encode_bin(m) : encode_csv(m));
}

DenseMatrix read_matrix(const fs::path& path, MatrixFormat format) {
  const std::string bytes = slurp(path);
  return format == MatrixFormat::Bin ? decode_bin(bytes) : decode_csv(bytes);
}

DenseMatrix frames_to_matrix(const FrameSequence& seq) {
  if (seq.frames.empty()) throw InputError("frames_to_matrix: empty sequence");
  const std::size_t w = seq.width;
  const std::size_t h = seq.height;
  DenseMatrix m(w * h, seq.frames.size());
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const Frame& f = seq.frames[t];
    if (f.width != w || f.height != h || f.pixels.size() != w * h)
      throw InputError("frames_to_matrix: frame " + std::to_string(t) + " is " +
                       std::to_string(f.width) + "x" + std::to_string(f.height) + ", expected " +
                       std::to_string(w) + "x" + std::to_string(h));
    auto col = m.col(t);
    for (std::size_t x = 0; x < w; ++x)
      for (std::size_t y = 0; y < h; ++y) col[y + x * h] = f.at(x, y);
  }
  return m;
}

FrameSequence matrix_to_frames(const DenseMatrix& m, std::size_t width, std::size_t height) {
  if (m.rows() != width * height)
    throw ShapeError("matrix_to_frames: " + std::to_string(m.rows()) + " rows cannot hold " +
                     std::to_string(width) + "x" + std::to_string(height) + " frames");
  FrameSequence seq{width, height, {}};
  seq.frames.reserve(m.cols());
  for (std::size_t t = 0; t < m.cols(); ++t) {
    Frame f{width, height, std::vector<std::uint8_t>(width * height)};
    const auto col = m.col(t);
    for (std::size_t x = 0; x < width; ++x)
      for (std::size_t y = 0; y < height; ++y) {
        const double v = std::clamp(std::round(col[y + x * height]), 0.0, 255.0);
        f.at(x, y) = static_cast<std::uint8_t>(v);
      }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

std::string encode_pgm(const Frame& frame) {
  std::string out = "P5\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(frame.pixels.data()), frame.pixels.size());
  return out;
}

Frame decode_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw FormatError("PGM: expected P5 magic", 0);
  std::size_t pos = 2;
  const std::size_t width = read_pgm_number(bytes, pos);
  const std::size_t height = read_pgm_number(bytes, pos);
  const std::size_t maxval = read_pgm_number(bytes, pos);
  if (maxval != 255) throw FormatError("PGM: only maxval 255 is supported", pos);
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw FormatError("PGM: missing separator before raster", pos);
  ++pos;
  const std::size_t need = width * height;
  if (bytes.size() - pos < need) throw FormatError("PGM: truncated raster", bytes.size());
  Frame f{width, height, std::vector<std::uint8_t>(need)};
  std::memcpy(f.pixels.data(), bytes.data() + pos, need);
  return f;
}

void write_pgm(const fs::path& path, const Frame& frame) { spill(path, encode_pgm(frame)); }

Frame read_pgm(const fs::path& path) { return decode_pgm(slurp(path)); }

FrameSequence read_frame_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no .pgm frames in " + dir.string());

  FrameSequence seq;
  for (const auto& file : files) {
    Frame f = read_pgm(file);
    if (seq.frames.empty()) {
      seq.width = f.width;
      seq.height = f.height;
    } else if (f.width != seq.width || f.height != seq.height) {
      throw InputError("frame " + file.filename().string() + " is " + std::to_string(f.width) +
                       "x" + std::to_string(f.height) + ", expected " + std::to_string(seq.width) +
                       "x" + std::to_string(seq.height));
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

void write_frame_dir(const fs::path& dir, const FrameSequence& seq, const std::string& prefix) {
  fs::create_directories(dir);
  char name[64];
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    std::snprintf(name, sizeof(name), "_%05zu.pgm", t);
    write_pgm(dir / (prefix + name), seq.frames[t]);
  }
}

}  // namespace ircur
