#include "ircur/convert.hpp"

#include <algorithm>
#include <string>

#include "ircur/errors.hpp"
#include "ircur/kernels.hpp"
#include "ircur/solver.hpp"

namespace ircur {

namespace {

constexpr double kCompactCutoff = 1e-14;

DenseMatrix leading(const DenseMatrix& m, std::size_t k) {
  DenseMatrix out(m.rows(), k);
  for (std::size_t j = 0; j < k; ++j) std::copy_n(m.col(j).begin(), m.rows(), out.col(j).begin());
  return out;
}

}  // namespace

SvdFactors cur_to_svd(const DenseMatrix& c, const PinvFactor& core_pinv, const DenseMatrix& r) {
  if (c.cols() != core_pinv.cols())
    throw ShapeError("cur_to_svd: C has " + std::to_string(c.cols()) + " columns, core has " +
                     std::to_string(core_pinv.cols()));
  if (r.rows() != core_pinv.rows())
    throw ShapeError("cur_to_svd: R has " + std::to_string(r.rows()) + " rows, core has " +
                     std::to_string(core_pinv.rows()));

  const QrFactors qc = qr_thin(c);
  const QrFactors qr = qr_thin(r.transpose());

  // R_C · U† · R_Rᵀ with U† = V Σ⁻¹ Wᵀ kept factored: (R_C V) Σ⁻¹ (R_R W)ᵀ.
  DenseMatrix small(c.cols(), r.rows());
  if (core_pinv.rank() > 0) {
    DenseMatrix lhs = kernels::matmul(qc.r, core_pinv.right());
    for (std::size_t j = 0; j < lhs.cols(); ++j)
      for (double& v : lhs.col(j)) v /= core_pinv.sigma()[j];
    const DenseMatrix rhs = kernels::matmul(qr.r, core_pinv.left());
    small = kernels::matmul_nt(lhs, rhs);
  }

  SvdFactors inner = truncated_svd(small, std::min(small.rows(), small.cols()));
  std::size_t keep = inner.rank();
  const double smax = inner.sigma.empty() ? 0.0 : inner.sigma.front();
  if (smax > 0.0) {
    keep = 0;
    while (keep < inner.rank() && inner.sigma[keep] >= kCompactCutoff * smax) ++keep;
  } else {
    std::fill(inner.sigma.begin(), inner.sigma.end(), 0.0);
  }

  SvdFactors out;
  out.left = kernels::matmul(qc.q, leading(inner.left, keep));
  out.right = kernels::matmul(qr.q, leading(inner.right, keep));
  inner.sigma.resize(keep);
  out.sigma = std::move(inner.sigma);
  return out;
}

SvdFactors cur_to_svd(const CurFactors& cur) { return cur_to_svd(cur.c, cur.core_pinv, cur.r); }

}  // namespace ircur
