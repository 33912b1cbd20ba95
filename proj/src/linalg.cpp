#include "ircur/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "ircur/errors.hpp"
#include "ircur/kernels.hpp"

namespace ircur {

namespace {

using EigenConstMap = Eigen::Map<const Eigen::MatrixXd>;

EigenConstMap as_eigen(const DenseMatrix& m) {
  return EigenConstMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                       static_cast<Eigen::Index>(m.cols()));
}

DenseMatrix from_eigen(const Eigen::Ref<const Eigen::MatrixXd>& e) {
  DenseMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index j = 0; j < e.cols(); ++j)
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}

DenseMatrix leading_columns(const DenseMatrix& m, std::size_t k) {
  DenseMatrix out(m.rows(), k);
  for (std::size_t j = 0; j < k; ++j) std::copy_n(m.col(j).begin(), m.rows(), out.col(j).begin());
  return out;
}

}  // namespace

double frob_norm(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.data()) acc += v * v;
  return std::sqrt(acc);
}

double inf_norm(const DenseMatrix& m) {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

DenseMatrix submatrix(const DenseMatrix& m, const IndexSet& rows, const IndexSet& cols) {
  if (cols[cols.size() - 1] >= m.cols()) throw BoundsError("submatrix: column index out of range");
  if (rows[rows.size() - 1] >= m.rows()) throw BoundsError("submatrix: row index out of range");
  DenseMatrix out(rows.size(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto src = m.col(cols[k]);
    auto dst = out.col(k);
    for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  return out;
}

DenseMatrix submatrix(const DenseMatrix& m, const IndexSet& rows, AllIndices) {
  return kernels::gather_rows(m, rows);
}

DenseMatrix submatrix(const DenseMatrix& m, AllIndices, const IndexSet& cols) {
  return kernels::gather_cols(m, cols);
}

DenseMatrix submatrix(const DenseMatrix& m, AllIndices, AllIndices) { return m; }

DenseMatrix SvdFactors::reconstruct() const {
  DenseMatrix scaled = left;
  for (std::size_t j = 0; j < sigma.size(); ++j)
    for (double& v : scaled.col(j)) v *= sigma[j];
  return kernels::matmul_nt(scaled, right);
}

SvdFactors truncated_svd(const DenseMatrix& m, std::size_t r) {
  if (r == 0) throw ParameterError("truncated_svd: rank must be at least 1");
  const std::size_t k = std::min({r, m.rows(), m.cols()});
  if (k == 0) return {DenseMatrix(m.rows(), 0), {}, DenseMatrix(m.cols(), 0)};

  Eigen::BDCSVD<Eigen::MatrixXd> svd(as_eigen(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  SvdFactors out;
  out.left = from_eigen(svd.matrixU().leftCols(static_cast<Eigen::Index>(k)));
  out.right = from_eigen(svd.matrixV().leftCols(static_cast<Eigen::Index>(k)));
  out.sigma.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.sigma[i] = s(static_cast<Eigen::Index>(i));
  return out;
}

PinvFactor PinvFactor::from_svd(SvdFactors svd, double rel_cutoff) {
  PinvFactor p;
  p.rows_ = svd.left.rows();
  p.cols_ = svd.right.rows();
  const double smax = svd.sigma.empty() ? 0.0 : svd.sigma.front();
  std::size_t keep = 0;
  while (keep < svd.sigma.size() && smax > 0.0 && svd.sigma[keep] > rel_cutoff * smax) ++keep;
  if (keep == svd.sigma.size()) {
    p.left_ = std::move(svd.left);
    p.right_ = std::move(svd.right);
  } else {
    p.left_ = leading_columns(svd.left, keep);
    p.right_ = leading_columns(svd.right, keep);
  }
  svd.sigma.resize(keep);
  p.sigma_ = std::move(svd.sigma);
  return p;
}

DenseMatrix PinvFactor::apply_left(const DenseMatrix& x) const {
  if (x.rows() != rows_)
    throw ShapeError("PinvFactor::apply_left: expected " + std::to_string(rows_) + " rows, got " +
                     std::to_string(x.rows()));
  DenseMatrix t = kernels::matmul_tn(left_, x);
  for (std::size_t j = 0; j < t.cols(); ++j) {
    auto c = t.col(j);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] /= sigma_[i];
  }
  return kernels::matmul(right_, t);
}

DenseMatrix PinvFactor::apply_right(const DenseMatrix& x) const {
  if (x.cols() != cols_)
    throw ShapeError("PinvFactor::apply_right: expected " + std::to_string(cols_) +
                     " columns, got " + std::to_string(x.cols()));
  DenseMatrix t = kernels::matmul(x, right_);
  for (std::size_t j = 0; j < t.cols(); ++j)
    for (double& v : t.col(j)) v /= sigma_[j];
  return kernels::matmul_nt(t, left_);
}

DenseMatrix PinvFactor::materialize() const { return apply_left(DenseMatrix::identity(rows_)); }

DenseMatrix PinvFactor::core() const {
  DenseMatrix scaled = left_;
  for (std::size_t j = 0; j < sigma_.size(); ++j)
    for (double& v : scaled.col(j)) v *= sigma_[j];
  DenseMatrix out = kernels::matmul_nt(scaled, right_);
  if (out.rows() != rows_ || out.cols() != cols_) return DenseMatrix(rows_, cols_);
  return out;
}

PinvFactor pinv_factor(const DenseMatrix& m, double rel_cutoff) {
  if (!(rel_cutoff > 0.0 && rel_cutoff < 1.0))
    throw ParameterError("pinv_factor: cutoff must lie in (0, 1)");
  const std::size_t k = std::min(m.rows(), m.cols());
  if (k == 0) return PinvFactor::from_svd({DenseMatrix(m.rows(), 0), {}, DenseMatrix(m.cols(), 0)});
  return PinvFactor::from_svd(truncated_svd(m, k), rel_cutoff);
}

QrFactors qr_thin(const DenseMatrix& m) {
  if (m.rows() < m.cols())
    throw ShapeError("qr_thin: needs rows >= cols, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  const auto k = static_cast<Eigen::Index>(m.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(as_eigen(m));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), k);
  Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return {from_eigen(q), from_eigen(r)};
}

}  // namespace ircur
