#pragma once

#include <vector>

#include "tracenorm/types.hpp"

// Data-parallel inner loops over a fixed sparsity pattern. Every kernel has
// an OpenMP implementation and a `_serial` reference twin with identical
// semantics; the unit tests compare the two and the benchmark target measures
// them against each other. Small inputs stay on the serial path to avoid
// paying thread startup for desk-scale problems.

namespace tracenorm::kernels {

// Coordinate view of a sparsity pattern, sorted by (row, col), together with
// a CSR row pointer and a CSC-order permutation for transpose products.
// Non-owning; the owner keeps the index arrays alive.
struct SparseLayout {
  Index rows = 0;
  Index cols = 0;
  Index nnz = 0;
  const Index* row = nullptr;       // size nnz
  const Index* col = nullptr;       // size nnz
  const Index* row_ptr = nullptr;   // size rows + 1
  const Index* csc_perm = nullptr;  // size nnz; entry ids sorted by (col, row)
  const Index* col_ptr = nullptr;   // size cols + 1
};

// Entry count below which the OpenMP kernels fall back to the serial path.
inline constexpr Index parallel_threshold = 1 << 15;

// out[k] = dot(L.row(i_k), R.row(j_k)); evaluates a low-rank product L R^T
// only at the stored coordinates.
void gather_product(const SparseLayout& a, const RowMatrix& L, const RowMatrix& R, double* out);
void gather_product_serial(const SparseLayout& a, const RowMatrix& L, const RowMatrix& R,
                           double* out);

// out[k] = scale * (dot(L.row(i_k), R.row(j_k)) - ref[k])
void gather_residual(const SparseLayout& a, const RowMatrix& L, const RowMatrix& R,
                     const double* ref, double scale, double* out);
void gather_residual_serial(const SparseLayout& a, const RowMatrix& L, const RowMatrix& R,
                            const double* ref, double scale, double* out);

// out = A * D with A given by (layout, vals); D is cols x c, out is rows x c.
void sparse_dense(const SparseLayout& a, const double* vals, const RowMatrix& D, RowMatrix& out);
void sparse_dense_serial(const SparseLayout& a, const double* vals, const RowMatrix& D,
                         RowMatrix& out);

// out = A^T * D; D is rows x c, out is cols x c.
void sparse_dense_transpose(const SparseLayout& a, const double* vals, const RowMatrix& D,
                            RowMatrix& out);
void sparse_dense_transpose_serial(const SparseLayout& a, const double* vals, const RowMatrix& D,
                                   RowMatrix& out);

double dot(const double* a, const double* b, Index n);
double dot_serial(const double* a, const double* b, Index n);

double sum_squares(const double* a, Index n);
double sum_squares_serial(const double* a, Index n);

// True when the build has OpenMP enabled.
bool parallel_available();

}  // namespace tracenorm::kernels
