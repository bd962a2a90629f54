#include "sockspot/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sockspot/errors.hpp"
#include "sockspot/kernels.hpp"
#include "sockspot/rng.hpp"

namespace sockspot {

std::vector<std::vector<int>> ClusterAssignment::members() const {
    std::vector<std::vector<int>> m(c);
    for (size_t i = 0; i < of.size(); ++i)
        m[of[i]].push_back(static_cast<int>(i));
    return m;
}

namespace {

double sqdist(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int t = 0; t < d; ++t) {
        const double diff = a[t] - b[t];
        s += diff * diff;
    }
    return s;
}

double points_median_sigma(const Matrix& x) {
    const int n = x.rows;
    std::vector<double> dists;
    if (n <= 2000) {
        dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                dists.push_back(std::sqrt(sqdist(x.row(i), x.row(j), x.cols)));
    } else {
        Rng rng(splitmix64(0xC1A55EEDULL ^ static_cast<uint64_t>(n)));
        for (int s = 0; s < 200000; ++s) {
            int i = static_cast<int>(rng.below(n));
            int j = static_cast<int>(rng.below(n));
            if (i != j)
                dists.push_back(std::sqrt(sqdist(x.row(i), x.row(j), x.cols)));
        }
    }
    if (dists.empty())
        return 1.0;
    auto mid = dists.begin() + dists.size() / 2;
    std::nth_element(dists.begin(), mid, dists.end());
    return *mid > 0.0 ? *mid : 1.0;
}

struct KmeansResult {
    std::vector<int> assign;
    double inertia = std::numeric_limits<double>::infinity();
};

KmeansResult kmeans_once(const Matrix& x, int c, Rng& rng, int max_iters) {
    const int n = x.rows;
    const int d = x.cols;
    Matrix centers(c, d);
    std::vector<double> min_d(n, std::numeric_limits<double>::infinity());

    // k-means++ seeding
    int first = static_cast<int>(rng.below(n));
    std::copy(x.row(first), x.row(first) + d, centers.row(0));
    for (int k = 1; k < c; ++k) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            min_d[i] = std::min(min_d[i], sqdist(x.row(i), centers.row(k - 1), d));
            total += min_d[i];
        }
        int chosen = n - 1;
        if (total > 0.0) {
            double target = rng.uniform01() * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += min_d[i];
                if (acc >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<int>(rng.below(n));
        }
        std::copy(x.row(chosen), x.row(chosen) + d, centers.row(k));
    }

    KmeansResult res;
    res.assign.assign(n, 0);
    std::vector<int> count(c, 0);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (int k = 0; k < c; ++k) {
                const double dd = sqdist(x.row(i), centers.row(k), d);
                if (dd < bd) {
                    bd = dd;
                    best = k;
                }
            }
            if (best != res.assign[i]) {
                res.assign[i] = best;
                changed = true;
            }
        }
        std::fill(centers.v.begin(), centers.v.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (int i = 0; i < n; ++i) {
            double* ck = centers.row(res.assign[i]);
            for (int t = 0; t < d; ++t)
                ck[t] += x.at(i, t);
            ++count[res.assign[i]];
        }
        for (int k = 0; k < c; ++k) {
            if (count[k] == 0) {
                // reseed an empty cluster at the point farthest from its centre
                int far = 0;
                double fd = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double dd = sqdist(x.row(i), centers.row(res.assign[i]), d);
                    if (dd > fd) {
                        fd = dd;
                        far = i;
                    }
                }
                std::copy(x.row(far), x.row(far) + d, centers.row(k));
                changed = true;
                continue;
            }
            double* ck = centers.row(k);
            for (int t = 0; t < d; ++t)
                ck[t] /= count[k];
        }
        if (!changed)
            break;
    }

    res.inertia = 0.0;
    for (int i = 0; i < n; ++i)
        res.inertia += sqdist(x.row(i), centers.row(res.assign[i]), d);
    return res;
}

} // namespace

ClusterAssignment spectral_cluster(const Matrix& points, const std::vector<std::string>& ids,
                                   const SpectralConfig& cfg) {
    const int n = points.rows;
    if (cfg.c < 1)
        throw ConfigError("spectral_cluster: c must be >= 1");
    if (cfg.c > n)
        throw ConfigError("spectral_cluster: c exceeds the number of accounts");

    ClusterAssignment out;
    out.c = cfg.c;
    out.ids = ids;
    out.of.assign(n, 0);
    if (cfg.c == 1)
        return out;

    const double sigma = points_median_sigma(points);
    Matrix a(n, n);
    kernels::rbf_from_rows_omp(points.data(), n, points.cols, sigma, a.data());

    std::vector<double> dinv(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += a.at(i, j);
        dinv[i] = s > 0.0 ? 1.0 / std::sqrt(s) : 0.0;
    }
    Eigen::MatrixXd snorm(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            snorm(i, j) = a.at(i, j) * dinv[i] * dinv[j];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(snorm);
    if (eig.info() != Eigen::Success)
        throw ConvergenceError("spectral_cluster: eigendecomposition failed");
    Eigen::MatrixXd top = eig.eigenvectors().rightCols(cfg.c);

    Matrix rows(n, cfg.c);
    for (int i = 0; i < n; ++i) {
        double norm = 0.0;
        for (int k = 0; k < cfg.c; ++k)
            norm += top(i, k) * top(i, k);
        norm = std::sqrt(norm);
        for (int k = 0; k < cfg.c; ++k)
            rows.at(i, k) = norm > 0.0 ? top(i, k) / norm : 0.0;
    }

    KmeansResult best;
    for (int r = 0; r < cfg.kmeans_restarts; ++r) {
        Rng rng(derive_seed(cfg.seed, "kmeans", static_cast<uint64_t>(r)));
        KmeansResult res = kmeans_once(rows, cfg.c, rng, cfg.kmeans_max_iters);
        if (res.inertia < best.inertia)
            best = std::move(res);
    }

    // relabel clusters by first appearance so output is canonical
    std::vector<int> remap(cfg.c, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (remap[best.assign[i]] < 0)
            remap[best.assign[i]] = next++;
        out.of[i] = remap[best.assign[i]];
    }
    // k-means can leave fewer than c non-empty clusters only via pathological
    // inputs; keep indices dense either way
    out.c = std::max(next, 1);
    return out;
}

std::vector<std::pair<int, int>> candidate_pairs(const ClusterAssignment& assignment) {
    std::vector<std::pair<int, int>> pairs;
    auto groups = assignment.members();
    for (const auto& g : groups)
        for (size_t i = 0; i < g.size(); ++i)
            for (size_t j = i + 1; j < g.size(); ++j)
                pairs.push_back({g[i], g[j]});
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

} // namespace sockspot
