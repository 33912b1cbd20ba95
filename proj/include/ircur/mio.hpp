#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ircur/matrix.hpp"

namespace ircur {

enum class MatrixFormat { Csv, Bin };

/// "csv" or "bin" (case-sensitive). Throws ParameterError otherwise.
MatrixFormat parse_matrix_format(const std::string& name);

/// Picks the format from the file extension (.csv → Csv, anything else → Bin).
MatrixFormat format_for_path(const std::filesystem::path& path);

// BIN layout: "IRCM", u32 rows, u32 cols, then rows·cols f64 in column-major
// order, all little-endian. CSV: one matrix row per line, comma separated,
// 17 significant digits.

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format);
DenseMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format);

/// In-memory codecs behind the file functions.
std::string encode_bin(const DenseMatrix& m);
DenseMatrix decode_bin(const std::string& bytes);
std::string encode_csv(const DenseMatrix& m);
DenseMatrix decode_csv(const std::string& text);

/// One 8-bit grayscale image, row-major: pixel (x, y) at y * width + x.
struct Frame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
  std::uint8_t& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
};

struct FrameSequence {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Frame> frames;
};

/// Stacks vectorised frames as columns: pixel (x, y) of frame t lands in row
/// y + x·height of column t. Throws InputError on an empty sequence or
/// frames of differing size.
DenseMatrix frames_to_matrix(const FrameSequence& seq);

/// Inverse layout of frames_to_matrix; values are rounded to nearest and
/// clamped to [0, 255]. Throws ShapeError unless rows == width·height.
FrameSequence matrix_to_frames(const DenseMatrix& m, std::size_t width, std::size_t height);

/// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const Frame& frame);
Frame read_pgm(const std::filesystem::path& path);
std::string encode_pgm(const Frame& frame);
Frame decode_pgm(const std::string& bytes);

/// Reads every *.pgm in `dir` in lexicographic filename order.
FrameSequence read_frame_dir(const std::filesystem::path& dir);

/// Writes frames as <prefix>_00000.pgm, <prefix>_00001.pgm, ... into `dir`.
void write_frame_dir(const std::filesystem::path& dir, const FrameSequence& seq,
                     const std::string& prefix);

}  // namespace ircur
