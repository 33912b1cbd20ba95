#pragma once

#include "ircur/linalg.hpp"
#include "ircur/matrix.hpp"

namespace ircur {

struct CurFactors;

/// Compact SVD of C · U† · R using two thin QRs and one small SVD; the
/// n-sized work is linear in n.
///
/// Singular values below 1e-14 · σ_max are dropped together with their
/// vectors. When the product is exactly zero the full small rank is kept
/// with zero singular values and orthonormal (arbitrary) vectors.
/// Throws ShapeError on inconsistent inner dimensions, or if C or Rᵀ has
/// fewer rows than columns.
SvdFactors cur_to_svd(const DenseMatrix& c, const PinvFactor& core_pinv, const DenseMatrix& r);

SvdFactors cur_to_svd(const CurFactors& cur);

}  // namespace ircur
