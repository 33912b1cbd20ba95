#pragma once

// Data-parallel inner kernels of the solver.
//
// Each kernel comes in two builds sharing one per-column body: `serial`
// is the reference kept for testing, `parallel` distributes output columns
// over OpenMP threads. Every output entry is produced by a single thread
// with a fixed accumulation order, so both builds are bitwise identical.
// The unqualified entry points pick one based on problem size and whether
// the caller is already inside a parallel region.

#include <cstddef>

#include "ircur/index_set.hpp"
#include "ircur/matrix.hpp"

namespace ircur::kernels {

namespace serial {
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gather_rows(const DenseMatrix& m, const IndexSet& rows);
DenseMatrix gather_cols(const DenseMatrix& m, const IndexSet& cols);
void threshold_residual(const DenseMatrix& data, DenseMatrix& estimate, double zeta);
}  // namespace serial

namespace parallel {
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix gather_rows(const DenseMatrix& m, const IndexSet& rows);
DenseMatrix gather_cols(const DenseMatrix& m, const IndexSet& cols);
void threshold_residual(const DenseMatrix& data, DenseMatrix& estimate, double zeta);
}  // namespace parallel

/// a · b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ · b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a · bᵀ
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
/// Rows of `m` listed in `rows`, in order. Strided in column-major storage.
DenseMatrix gather_rows(const DenseMatrix& m, const IndexSet& rows);
/// Columns of `m` listed in `cols`; contiguous copies.
DenseMatrix gather_cols(const DenseMatrix& m, const IndexSet& cols);
/// estimate := T_zeta(data - estimate), entries kept iff |x| > zeta.
void threshold_residual(const DenseMatrix& data, DenseMatrix& estimate, double zeta);

/// Threads the dispatching kernels may use (1 inside an active parallel region).
int available_threads();

}  // namespace ircur::kernels
