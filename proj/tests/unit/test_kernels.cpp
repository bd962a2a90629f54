#include <doctest.h>

#include <cmath>

#include "sockspot/kernels.hpp"
#include "sockspot/matrix.hpp"
#include "sockspot/rng.hpp"
#include "support/fixtures.hpp"

using namespace sockspot;
using namespace sockspot::testing;

TEST_SUITE_BEGIN("kernels");

TEST_CASE("gemm matches a naive triple loop and its omp twin bitwise") {
    Rng rng(11);
    const int m = 17, k = 23, n = 9;
    std::vector<double> a(m * k), b(k * n);
    for (auto& v : a)
        v = rng.normal();
    for (auto& v : b)
        v = rng.normal();

    std::vector<double> naive(m * n, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            for (int t = 0; t < k; ++t)
                naive[i * n + j] += a[i * k + t] * b[t * n + j];

    std::vector<double> serial(m * n), parallel(m * n);
    kernels::gemm_serial(a.data(), b.data(), serial.data(), m, k, n);
    kernels::gemm_omp(a.data(), b.data(), parallel.data(), m, k, n);

    for (int i = 0; i < m * n; ++i) {
        CHECK(serial[i] == doctest::Approx(naive[i]).epsilon(1e-12));
        CHECK(serial[i] == parallel[i]); // same inner order, bit identical
    }
}

TEST_CASE("dense_times_csr equals gemm against the dense form") {
    Rng rng(5);
    Matrix adj = random_symmetric_adjacency(31, 0.2, rng);
    kernels::Csr m = csr_from_dense(adj);
    std::vector<double> t(31 * 31);
    for (auto& v : t)
        v = rng.uniform(-1, 1);

    std::vector<double> via_gemm(31 * 31), via_csr(31 * 31), via_csr_omp(31 * 31);
    kernels::gemm_serial(t.data(), adj.data(), via_gemm.data(), 31, 31, 31);
    kernels::dense_times_csr_serial(t.data(), m, via_csr.data(), 31);
    kernels::dense_times_csr_omp(t.data(), m, via_csr_omp.data(), 31);
    for (int i = 0; i < 31 * 31; ++i) {
        CHECK(via_csr[i] == doctest::Approx(via_gemm[i]).epsilon(1e-12));
        CHECK(via_csr[i] == via_csr_omp[i]);
    }
}

TEST_CASE("csr_matvec and csr_apply agree with dense products") {
    Rng rng(7);
    Matrix adj = random_symmetric_adjacency(40, 0.15, rng);
    kernels::Csr m = csr_from_dense(adj);
    std::vector<double> x(40), y_serial(40), y_omp(40);
    for (auto& v : x)
        v = rng.normal();
    kernels::csr_matvec_serial(m, x.data(), y_serial.data());
    kernels::csr_matvec_omp(m, x.data(), y_omp.data());
    for (int i = 0; i < 40; ++i) {
        double want = 0;
        for (int j = 0; j < 40; ++j)
            want += adj.at(i, j) * x[j];
        CHECK(y_serial[i] == doctest::Approx(want).epsilon(1e-12));
        CHECK(y_serial[i] == y_omp[i]);
    }

    std::vector<double> f(40 * 2), out_serial(40 * 2), out_omp(40 * 2);
    for (auto& v : f)
        v = rng.uniform01();
    kernels::csr_apply_serial(m, f.data(), out_serial.data(), 2);
    kernels::csr_apply_omp(m, f.data(), out_omp.data(), 2);
    for (int i = 0; i < 80; ++i)
        CHECK(out_serial[i] == out_omp[i]);
}

TEST_CASE("rbf rows: unit diagonal zeroed, known value, omp identical") {
    // two points at squared distance 2 sigma^2 have affinity e^-1
    Matrix x(3, 2);
    x.at(0, 0) = 0.0;
    x.at(1, 0) = 2.0; // sq dist 4 = 2*sigma^2 for sigma = sqrt(2)
    x.at(2, 1) = 10.0;
    const double sigma = std::sqrt(2.0);
    std::vector<double> a(9), b(9);
    kernels::rbf_from_rows_serial(x.data(), 3, 2, sigma, a.data());
    kernels::rbf_from_rows_omp(x.data(), 3, 2, sigma, b.data());
    CHECK(a[0 * 3 + 0] == 0.0);
    CHECK(a[0 * 3 + 1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(a[1 * 3 + 0] == a[0 * 3 + 1]);
    for (int i = 0; i < 9; ++i)
        CHECK(a[i] == b[i]);
}

TEST_CASE("knn picks the true nearest neighbours") {
    Rng rng(23);
    const int P = 200, r = 4, k = 5;
    std::vector<float> pts(P * r);
    for (auto& v : pts)
        v = static_cast<float>(rng.normal());

    std::vector<int> got(P * k), got_omp(P * k);
    kernels::knn_serial(pts.data(), P, r, k, got.data());
    kernels::knn_omp(pts.data(), P, r, k, got_omp.data());
    CHECK(got == got_omp);

    for (int i = 0; i < P; ++i) {
        // brute force reference with stable tie handling
        std::vector<std::pair<float, int>> d;
        for (int j = 0; j < P; ++j) {
            if (j == i)
                continue;
            float s = 0;
            for (int t = 0; t < r; ++t) {
                float diff = pts[i * r + t] - pts[j * r + t];
                s += diff * diff;
            }
            d.push_back({s, j});
        }
        std::sort(d.begin(), d.end());
        for (int t = 0; t < k; ++t)
            CHECK(got[i * k + t] == d[t].second);
    }
}

TEST_SUITE_END();
