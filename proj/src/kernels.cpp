#include "tracenorm/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tracenorm::kernels {

namespace {

inline double row_dot(const RowMatrix& L, Index i, const RowMatrix& R, Index j, Index p) {
  const double* a = L.data() + i * p;
  const double* b = R.data() + j * p;
  double s = 0.0;
  for (Index t = 0; t < p; ++t) s += a[t] * b[t];
  return s;
}

}  // namespace

bool parallel_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

void gather_product_serial(const SparseLayout& a, const RowMatrix& L, const RowMatrix& R,
                           double* out) {
  const Index p = L.cols();
  for (Index k = 0; k < a.nnz; ++k) out[k] = row_dot(L, a.row[k], R, a.col[k], p);
}

void gather_product(const SparseLayout& a, const RowMatrix& L, const RowMatrix& R, double* out) {
  const Index p = L.cols();
#pragma omp parallel for schedule(static) if (a.nnz >= parallel_threshold)
  for (Index k = 0; k < a.nnz; ++k) out[k] = row_dot(L, a.row[k], R, a.col[k], p);
}

void gather_residual_serial(const SparseLayout& a, const RowMatrix& L, const RowMatrix& R,
                            const double* ref, double scale, double* out) {
  const Index p = L.cols();
  for (Index k = 0; k < a.nnz; ++k)
    out[k] = scale * (row_dot(L, a.row[k], R, a.col[k], p) - ref[k]);
}

void gather_residual(const SparseLayout& a, const RowMatrix& L, const RowMatrix& R,
                     const double* ref, double scale, double* out) {
  const Index p = L.cols();
#pragma omp parallel for schedule(static) if (a.nnz >= parallel_threshold)
  for (Index k = 0; k < a.nnz; ++k)
    out[k] = scale * (row_dot(L, a.row[k], R, a.col[k], p) - ref[k]);
}

void sparse_dense_serial(const SparseLayout& a, const double* vals, const RowMatrix& D,
                         RowMatrix& out) {
  const Index c = D.cols();
  out.setZero(a.rows, c);
  for (Index i = 0; i < a.rows; ++i) {
    double* acc = out.data() + i * c;
    for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const double v = vals[k];
      const double* d = D.data() + a.col[k] * c;
      for (Index t = 0; t < c; ++t) acc[t] += v * d[t];
    }
  }
}

void sparse_dense(const SparseLayout& a, const double* vals, const RowMatrix& D, RowMatrix& out) {
  const Index c = D.cols();
  out.setZero(a.rows, c);
#pragma omp parallel for schedule(dynamic, 64) if (a.nnz >= parallel_threshold)
  for (Index i = 0; i < a.rows; ++i) {
    double* acc = out.data() + i * c;
    for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const double v = vals[k];
      const double* d = D.data() + a.col[k] * c;
      for (Index t = 0; t < c; ++t) acc[t] += v * d[t];
    }
  }
}

void sparse_dense_transpose_serial(const SparseLayout& a, const double* vals, const RowMatrix& D,
                                   RowMatrix& out) {
  const Index c = D.cols();
  out.setZero(a.cols, c);
  for (Index j = 0; j < a.cols; ++j) {
    double* acc = out.data() + j * c;
    for (Index q = a.col_ptr[j]; q < a.col_ptr[j + 1]; ++q) {
      const Index k = a.csc_perm[q];
      const double v = vals[k];
      const double* d = D.data() + a.row[k] * c;
      for (Index t = 0; t < c; ++t) acc[t] += v * d[t];
    }
  }
}

void sparse_dense_transpose(const SparseLayout& a, const double* vals, const RowMatrix& D,
                            RowMatrix& out) {
  const Index c = D.cols();
  out.setZero(a.cols, c);
#pragma omp parallel for schedule(dynamic, 64) if (a.nnz >= parallel_threshold)
  for (Index j = 0; j < a.cols; ++j) {
    double* acc = out.data() + j * c;
    for (Index q = a.col_ptr[j]; q < a.col_ptr[j + 1]; ++q) {
      const Index k = a.csc_perm[q];
      const double v = vals[k];
      const double* d = D.data() + a.row[k] * c;
      for (Index t = 0; t < c; ++t) acc[t] += v * d[t];
    }
  }
}

double dot_serial(const double* a, const double* b, Index n) {
  double s = 0.0;
  for (Index k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double dot(const double* a, const double* b, Index n) {
  double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s) if (n >= parallel_threshold)
  for (Index k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double sum_squares_serial(const double* a, Index n) {
  double s = 0.0;
  for (Index k = 0; k < n; ++k) s += a[k] * a[k];
  return s;
}

double sum_squares(const double* a, Index n) {
  double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s) if (n >= parallel_threshold)
  for (Index k = 0; k < n; ++k) s += a[k] * a[k];
  return s;
}

}  // namespace tracenorm::kernels
