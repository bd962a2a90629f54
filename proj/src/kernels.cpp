#include "sockspot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace sockspot::kernels {

namespace {

inline void gemm_row(const double* A, const double* B, double* C, int i, int k, int n) {
    double* ci = C + static_cast<size_t>(i) * n;
    std::memset(ci, 0, sizeof(double) * n);
    const double* ai = A + static_cast<size_t>(i) * k;
    for (int kk = 0; kk < k; ++kk) {
        const double a = ai[kk];
        if (a == 0.0)
            continue;
        const double* bk = B + static_cast<size_t>(kk) * n;
        for (int j = 0; j < n; ++j)
            ci[j] += a * bk[j];
    }
}

inline void dense_times_csr_row(const double* T, const Csr& M, double* C, int i) {
    const int n = M.n;
    double* ci = C + static_cast<size_t>(i) * n;
    std::memset(ci, 0, sizeof(double) * n);
    const double* ti = T + static_cast<size_t>(i) * n;
    for (int kk = 0; kk < n; ++kk) {
        const double t = ti[kk];
        if (t == 0.0)
            continue;
        for (int64_t e = M.offsets[kk]; e < M.offsets[kk + 1]; ++e)
            ci[M.idx[e]] += t * M.val[e];
    }
}

inline double csr_dot_row(const Csr& A, const double* x, int i) {
    double acc = 0.0;
    for (int64_t e = A.offsets[i]; e < A.offsets[i + 1]; ++e)
        acc += A.val[e] * x[A.idx[e]];
    return acc;
}

inline void csr_apply_row(const Csr& A, const double* X, double* Y, int c, int i) {
    double* yi = Y + static_cast<size_t>(i) * c;
    std::fill(yi, yi + c, 0.0);
    for (int64_t e = A.offsets[i]; e < A.offsets[i + 1]; ++e) {
        const double w = A.val[e];
        const double* xj = X + static_cast<size_t>(A.idx[e]) * c;
        for (int j = 0; j < c; ++j)
            yi[j] += w * xj[j];
    }
}

inline void rbf_row(const double* X, int P, int d, double inv2s2, double* A, int i) {
    const double* xi = X + static_cast<size_t>(i) * d;
    double* ai = A + static_cast<size_t>(i) * P;
    for (int j = 0; j < P; ++j) {
        if (j == i) {
            ai[j] = 0.0;
            continue;
        }
        const double* xj = X + static_cast<size_t>(j) * d;
        double s = 0.0;
        for (int t = 0; t < d; ++t) {
            const double diff = xi[t] - xj[t];
            s += diff * diff;
        }
        ai[j] = std::exp(-s * inv2s2);
    }
}

inline void knn_row(const float* X, int P, int r, int k, int* out_idx, int i) {
    constexpr float kInf = std::numeric_limits<float>::infinity();
    float bestd[64];
    int besti[64];
    for (int t = 0; t < k; ++t) {
        bestd[t] = kInf;
        besti[t] = -1;
    }
    const float* xi = X + static_cast<size_t>(i) * r;
    for (int j = 0; j < P; ++j) {
        if (j == i)
            continue;
        const float* xj = X + static_cast<size_t>(j) * r;
        float s = 0.0f;
        for (int t = 0; t < r; ++t) {
            const float diff = xi[t] - xj[t];
            s += diff * diff;
        }
        if (s >= bestd[k - 1])
            continue;
        int pos = k - 1;
        while (pos > 0 && s < bestd[pos - 1]) {
            bestd[pos] = bestd[pos - 1];
            besti[pos] = besti[pos - 1];
            --pos;
        }
        bestd[pos] = s;
        besti[pos] = j;
    }
    int* oi = out_idx + static_cast<size_t>(i) * k;
    for (int t = 0; t < k; ++t)
        oi[t] = besti[t];
}

} // namespace

void gemm_serial(const double* A, const double* B, double* C, int m, int k, int n) {
    for (int i = 0; i < m; ++i)
        gemm_row(A, B, C, i, k, n);
}

void gemm_omp(const double* A, const double* B, double* C, int m, int k, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i)
        gemm_row(A, B, C, i, k, n);
}

void dense_times_csr_serial(const double* T, const Csr& M, double* C, int rows) {
    for (int i = 0; i < rows; ++i)
        dense_times_csr_row(T, M, C, i);
}

void dense_times_csr_omp(const double* T, const Csr& M, double* C, int rows) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i)
        dense_times_csr_row(T, M, C, i);
}

void csr_matvec_serial(const Csr& A, const double* x, double* y) {
    for (int i = 0; i < A.n; ++i)
        y[i] = csr_dot_row(A, x, i);
}

void csr_matvec_omp(const Csr& A, const double* x, double* y) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < A.n; ++i)
        y[i] = csr_dot_row(A, x, i);
}

void csr_apply_serial(const Csr& A, const double* X, double* Y, int c) {
    for (int i = 0; i < A.n; ++i)
        csr_apply_row(A, X, Y, c, i);
}

void csr_apply_omp(const Csr& A, const double* X, double* Y, int c) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < A.n; ++i)
        csr_apply_row(A, X, Y, c, i);
}

void rbf_from_rows_serial(const double* X, int P, int d, double sigma, double* A) {
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int i = 0; i < P; ++i)
        rbf_row(X, P, d, inv2s2, A, i);
}

void rbf_from_rows_omp(const double* X, int P, int d, double sigma, double* A) {
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < P; ++i)
        rbf_row(X, P, d, inv2s2, A, i);
}

void knn_serial(const float* X, int P, int r, int k, int* out_idx) {
    for (int i = 0; i < P; ++i)
        knn_row(X, P, r, k, out_idx, i);
}

void knn_omp(const float* X, int P, int r, int k, int* out_idx) {
#pragma omp parallel for schedule(dynamic, 64)
    for (int i = 0; i < P; ++i)
        knn_row(X, P, r, k, out_idx, i);
}

} // namespace sockspot::kernels
