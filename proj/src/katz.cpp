#include "sockspot/katz.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "sockspot/errors.hpp"
#include "sockspot/rng.hpp"

namespace sockspot {

double spectral_norm(const kernels::Csr& m, double tol) {
    const int n = m.n;
    if (n == 0)
        return 0.0;
    std::vector<double> x(n), y(n), z(n);
    Rng rng(0x5eedf00dULL); // fixed start vector, reproducible
    double nx = 0.0;
    for (int i = 0; i < n; ++i) {
        x[i] = rng.normal();
        nx += x[i] * x[i];
    }
    nx = std::sqrt(nx);
    for (int i = 0; i < n; ++i)
        x[i] /= nx;

    double est = 0.0;
    const int max_iter = 20000;
    for (int it = 0; it < max_iter; ++it) {
        // one step of power iteration on M^2; handles the +-lambda pairs of
        // bipartite spectra without oscillation
        kernels::csr_matvec_omp(m, x.data(), y.data());
        kernels::csr_matvec_omp(m, y.data(), z.data());
        double nz = 0.0;
        for (int i = 0; i < n; ++i)
            nz += z[i] * z[i];
        nz = std::sqrt(nz);
        if (nz == 0.0)
            return 0.0;
        const double next = std::sqrt(nz);
        for (int i = 0; i < n; ++i)
            x[i] = z[i] / nz;
        if (it > 0 && std::abs(next - est) <= tol * std::max(next, 1e-300)) {
            est = next;
            break;
        }
        est = next;
    }
    return est;
}

namespace {

double resolve_beta(const kernels::Csr& m, const KatzConfig& cfg) {
    double norm = spectral_norm(m);
    if (cfg.auto_beta && norm == 0.0)
        throw ConfigError("katz: graph has no edges, auto beta is undefined");
    double beta = cfg.auto_beta ? 0.9 / norm : cfg.beta;
    if (beta < 0.0)
        throw ConfigError("katz: beta must be nonnegative");
    if (norm > 0.0 && beta >= 1.0 / norm)
        throw ConfigError("katz: beta " + std::to_string(beta) + " is >= 1/||M||_2 = " +
                          std::to_string(1.0 / norm) + ", series would diverge");
    return beta;
}

void symmetrize(Matrix& s) {
    for (int i = 0; i < s.rows; ++i)
        for (int j = i + 1; j < s.cols; ++j) {
            const double v = 0.5 * (s.at(i, j) + s.at(j, i));
            s.at(i, j) = v;
            s.at(j, i) = v;
        }
}

} // namespace

Matrix katz_dense_solve(const kernels::Csr& m, double beta) {
    const int n = m.n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int64_t e = m.offsets[i]; e < m.offsets[i + 1]; ++e)
            a(i, m.idx[e]) -= beta * m.val[e];
    Eigen::MatrixXd x = a.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
    Matrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s.at(i, j) = x(i, j) - (i == j ? 1.0 : 0.0);
    symmetrize(s);
    return s;
}

SimilarityMatrix katz_adjacency(const kernels::Csr& m, int num_accounts, const KatzConfig& cfg) {
    const int n = m.n;
    SimilarityMatrix out;
    out.n = n;
    out.num_accounts = num_accounts;
    out.tol = cfg.tol;
    out.beta = resolve_beta(m, cfg);

    if (out.beta == 0.0) {
        out.s = Matrix(n, n, 0.0);
        out.converged = true;
        return out;
    }

    KatzMethod method = cfg.method;
    if (method == KatzMethod::Auto)
        method = n <= 2000 ? KatzMethod::Solve : KatzMethod::Series;

    if (method == KatzMethod::Solve) {
        out.s = katz_dense_solve(m, out.beta);
        out.converged = true;
        out.terms = 0;
        return out;
    }

    // S = sum_k beta^k M^k, term by term; T_{k+1} = beta * T_k * M
    Matrix s(n, n, 0.0);
    Matrix term(n, n, 0.0);
    Matrix next(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int64_t e = m.offsets[i]; e < m.offsets[i + 1]; ++e)
            term.at(i, m.idx[e]) = out.beta * m.val[e];

    out.converged = false;
    int k = 0;
    while (k < cfg.max_terms) {
        ++k;
        double term_max = 0.0;
        for (size_t i = 0; i < s.v.size(); ++i) {
            s.v[i] += term.v[i];
            term_max = std::max(term_max, std::abs(term.v[i]));
        }
        if (term_max < cfg.tol) {
            out.converged = true;
            break;
        }
        if (k == cfg.max_terms)
            break;
        kernels::dense_times_csr_omp(term.data(), m, next.data(), n);
        for (size_t i = 0; i < next.v.size(); ++i)
            next.v[i] *= out.beta;
        std::swap(term, next);
    }
    out.terms = k;
    symmetrize(s);
    out.s = std::move(s);
    return out;
}

SimilarityMatrix katz_matrix(const BipartiteGraph& g, const KatzConfig& cfg) {
    return katz_adjacency(g.adjacency(), g.num_accounts(), cfg);
}

namespace {

std::vector<double> account_upper_triangle(const SimilarityMatrix& s) {
    const int na = s.num_accounts;
    std::vector<double> vals;
    vals.reserve(static_cast<size_t>(na) * (na - 1) / 2);
    for (int i = 0; i < na; ++i)
        for (int j = i + 1; j < na; ++j)
            vals.push_back(s.s.at(i, j));
    return vals;
}

} // namespace

double percentile_threshold(const SimilarityMatrix& s, double alpha) {
    if (alpha < 0.0 || alpha > 100.0)
        throw ConfigError("percentile alpha must be in [0,100]");
    if (s.num_accounts < 2)
        throw ConfigError("percentile_threshold: need at least two accounts");
    std::vector<double> vals = account_upper_triangle(s);
    std::sort(vals.begin(), vals.end());
    const size_t m = vals.size();
    if (m == 1)
        return vals[0];
    const double h = alpha / 100.0 * static_cast<double>(m - 1);
    const size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= m)
        return vals[m - 1];
    const double frac = h - static_cast<double>(lo);
    return vals[lo] + frac * (vals[lo + 1] - vals[lo]);
}

UnsupervisedPredictions predict_unsupervised(const SimilarityMatrix& s, double alpha) {
    UnsupervisedPredictions out;
    out.threshold = percentile_threshold(s, alpha);
    const int na = s.num_accounts;
    const size_t m = static_cast<size_t>(na) * (na - 1) / 2;
    out.pairs.reserve(m);
    out.score.reserve(m);
    out.label.reserve(m);
    for (int i = 0; i < na; ++i)
        for (int j = i + 1; j < na; ++j) {
            const double v = s.s.at(i, j);
            out.pairs.push_back({i, j});
            out.score.push_back(v);
            out.label.push_back(v > out.threshold ? 1 : 0);
        }
    return out;
}

double account_pair_max(const SimilarityMatrix& s) {
    const int na = s.num_accounts;
    double best = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = i + 1; j < na; ++j)
            best = std::max(best, s.s.at(i, j));
    return best;
}

double katz_pair_feature(const SimilarityMatrix& s, double smax, int u, int v, double epsilon) {
    if (u == v)
        throw ConfigError("katz_pair_feature: self pair");
    if (u < 0 || v < 0 || u >= s.num_accounts || v >= s.num_accounts)
        throw DataError("katz_pair_feature: account index out of range");
    return smax - s.s.at(u, v) + epsilon;
}

} // namespace sockspot
