#pragma once

#include <cstdint>
#include <vector>

// Data-parallel inner loops, each in two variants: a plain serial reference
// and an OpenMP row-partitioned version. The pair always shares one inner-loop
// structure so both produce bit-identical output regardless of thread count;
// tests assert that and bench/ compares their throughput.

namespace sockspot::kernels {

// square sparse matrix, CSR
struct Csr {
    int n = 0;
    std::vector<int64_t> offsets; // n+1
    std::vector<int> idx;
    std::vector<double> val;

    int64_t nnz() const { return static_cast<int64_t>(idx.size()); }
};

// C = A(m×k) * B(k×n), row-major, C must not alias A or B
void gemm_serial(const double* A, const double* B, double* C, int m, int k, int n);
void gemm_omp(const double* A, const double* B, double* C, int m, int k, int n);

// C = T(rows×n) * M(n×n sparse); used for the similarity power series
void dense_times_csr_serial(const double* T, const Csr& M, double* C, int rows);
void dense_times_csr_omp(const double* T, const Csr& M, double* C, int rows);

// y = A x
void csr_matvec_serial(const Csr& A, const double* x, double* y);
void csr_matvec_omp(const Csr& A, const double* x, double* y);

// Y(n×c) = A(n×n sparse) * X(n×c); c is tiny (label columns)
void csr_apply_serial(const Csr& A, const double* X, double* Y, int c);
void csr_apply_omp(const Csr& A, const double* X, double* Y, int c);

// A[i][j] = exp(-|x_i - x_j|^2 / (2 sigma^2)), diagonal zeroed
void rbf_from_rows_serial(const double* X, int P, int d, double sigma, double* A);
void rbf_from_rows_omp(const double* X, int P, int d, double sigma, double* A);

// k nearest neighbours (squared L2, self excluded) by brute force;
// out_idx is P×k, rows sorted by ascending distance, ties by index
void knn_serial(const float* X, int P, int r, int k, int* out_idx);
void knn_omp(const float* X, int P, int r, int k, int* out_idx);

} // namespace sockspot::kernels
