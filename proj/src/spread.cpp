#include "sockspot/spread.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <Eigen/Dense>

#include "sockspot/errors.hpp"
#include "sockspot/kernels.hpp"
#include "sockspot/rng.hpp"

namespace sockspot {

KatzFeatureSource::KatzFeatureSource(const SimilarityMatrix& s,
                                     const std::vector<std::pair<int, int>>& pairs,
                                     double epsilon)
    : s_(&s), pairs_(&pairs), smax_(account_pair_max(s)), eps_(epsilon) {}

void KatzFeatureSource::gather(size_t pair_index, double* out) const {
    const auto& [u, v] = (*pairs_)[pair_index];
    out[0] = katz_pair_feature(*s_, smax_, u, v, eps_);
}

EmbeddingFeatureSource::EmbeddingFeatureSource(const EmbeddingMatrix& emb,
                                               const std::vector<std::pair<int, int>>& pairs,
                                               PairOp op)
    : emb_(&emb), pairs_(&pairs), op_(op) {}

void EmbeddingFeatureSource::gather(size_t pair_index, double* out) const {
    const auto& [u, v] = (*pairs_)[pair_index];
    apply_pair_op(op_, emb_->row(u), emb_->row(v), emb_->d, out);
}

PairDataset assemble_pairs(std::vector<std::string> ids, std::vector<std::pair<int, int>> pairs,
                           std::shared_ptr<PairFeatureSource> features,
                           const std::map<std::pair<int, int>, int8_t>& label_map) {
    PairDataset data;
    data.ids = std::move(ids);
    const int n = static_cast<int>(data.ids.size());
    if (pairs.empty()) {
        pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                pairs.push_back({u, v});
    }
    for (auto& [u, v] : pairs) {
        if (u == v)
            throw DataError("assemble_pairs: self pair (" + data.ids[u] + ")");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw DataError("assemble_pairs: pair index out of range");
        if (u > v)
            std::swap(u, v);
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    data.pairs = std::move(pairs);
    data.labels.assign(data.pairs.size(), -1);
    for (size_t i = 0; i < data.pairs.size(); ++i) {
        auto it = label_map.find(data.pairs[i]);
        if (it != label_map.end())
            data.labels[i] = it->second;
    }
    data.features = std::move(features);
    return data;
}

Matrix rbf_affinity(const Matrix& x, double sigma) {
    if (sigma <= 0.0)
        throw ConfigError("rbf_affinity: sigma must be positive");
    Matrix a(x.rows, x.rows);
    kernels::rbf_from_rows_omp(x.data(), x.rows, x.cols, sigma, a.data());
    return a;
}

double median_heuristic_sigma(const PairFeatureSource& features, size_t count) {
    const int d = features.dim();
    std::vector<double> dists;
    if (count < 2)
        return 1.0;
    if (count <= 2000) {
        Matrix x(static_cast<int>(count), d);
        for (size_t i = 0; i < count; ++i)
            features.gather(i, x.row(static_cast<int>(i)));
        dists.reserve(count * (count - 1) / 2);
        for (size_t i = 0; i < count; ++i)
            for (size_t j = i + 1; j < count; ++j) {
                double s = 0.0;
                for (int t = 0; t < d; ++t) {
                    const double diff = x.at(static_cast<int>(i), t) - x.at(static_cast<int>(j), t);
                    s += diff * diff;
                }
                dists.push_back(std::sqrt(s));
            }
    } else {
        const size_t samples = 200000;
        Rng rng(splitmix64(0x51D6A5eedULL ^ count));
        std::vector<double> xi(d), xj(d);
        dists.reserve(samples);
        for (size_t s = 0; s < samples; ++s) {
            size_t i = rng.below(count);
            size_t j = rng.below(count);
            if (i == j)
                continue;
            features.gather(i, xi.data());
            features.gather(j, xj.data());
            double acc = 0.0;
            for (int t = 0; t < d; ++t) {
                const double diff = xi[t] - xj[t];
                acc += diff * diff;
            }
            dists.push_back(std::sqrt(acc));
        }
    }
    if (dists.empty())
        return 1.0;
    auto mid = dists.begin() + dists.size() / 2;
    std::nth_element(dists.begin(), mid, dists.end());
    return *mid;
}

namespace {

struct NormalizedAffinity {
    // exactly one of dense/sparse is filled
    Matrix dense;
    kernels::Csr sparse;
    bool is_sparse = false;
};

// D^{-1/2} A D^{-1/2}; zero-degree rows stay zero
void normalize_dense(Matrix& a) {
    const int n = a.rows;
    std::vector<double> dinv(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += a.at(i, j);
        dinv[i] = s > 0.0 ? 1.0 / std::sqrt(s) : 0.0;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a.at(i, j) *= dinv[i] * dinv[j];
}

void normalize_sparse(kernels::Csr& a) {
    std::vector<double> dinv(a.n, 0.0);
    for (int i = 0; i < a.n; ++i) {
        double s = 0.0;
        for (int64_t e = a.offsets[i]; e < a.offsets[i + 1]; ++e)
            s += a.val[e];
        dinv[i] = s > 0.0 ? 1.0 / std::sqrt(s) : 0.0;
    }
    for (int i = 0; i < a.n; ++i)
        for (int64_t e = a.offsets[i]; e < a.offsets[i + 1]; ++e)
            a.val[e] *= dinv[i] * dinv[a.idx[e]];
}

// Neighbour search runs in a PCA-reduced float space (it only picks edges);
// the kept edges get exact full-dimension affinity values.
kernels::Csr knn_affinity(const PairFeatureSource& features, size_t P, double sigma, int k) {
    const int d = features.dim();
    const int r = std::min(16, d);

    std::vector<float> proj(P * static_cast<size_t>(r));
    if (d == r) {
        std::vector<double> buf(d);
        for (size_t i = 0; i < P; ++i) {
            features.gather(i, buf.data());
            for (int t = 0; t < d; ++t)
                proj[i * r + t] = static_cast<float>(buf[t]);
        }
    } else {
        const size_t n_sample = std::min<size_t>(P, 4096);
        Rng rng(splitmix64(0x9CA5EEDULL ^ P));
        std::vector<size_t> sample(n_sample);
        for (size_t i = 0; i < n_sample; ++i)
            sample[i] = rng.below(P);
        Eigen::MatrixXd xs(n_sample, d);
        std::vector<double> buf(d);
        for (size_t i = 0; i < n_sample; ++i) {
            features.gather(sample[i], buf.data());
            for (int t = 0; t < d; ++t)
                xs(static_cast<Eigen::Index>(i), t) = buf[t];
        }
        Eigen::RowVectorXd mean = xs.colwise().mean();
        xs.rowwise() -= mean;
        Eigen::MatrixXd cov = xs.transpose() * xs / static_cast<double>(n_sample);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        Eigen::MatrixXd basis = eig.eigenvectors().rightCols(r); // top-r directions

#pragma omp parallel
        {
            std::vector<double> local(d);
#pragma omp for schedule(static)
            for (int64_t i = 0; i < static_cast<int64_t>(P); ++i) {
                features.gather(static_cast<size_t>(i), local.data());
                for (int t = 0; t < r; ++t) {
                    double acc = 0.0;
                    for (int e = 0; e < d; ++e)
                        acc += (local[e] - mean(e)) * basis(e, t);
                    proj[static_cast<size_t>(i) * r + t] = static_cast<float>(acc);
                }
            }
        }
    }

    std::vector<int> nbr(P * static_cast<size_t>(k));
    kernels::knn_omp(proj.data(), static_cast<int>(P), r, k, nbr.data());

    // symmetrize the neighbour graph
    std::vector<std::pair<int, int>> edges;
    edges.reserve(P * static_cast<size_t>(k));
    for (size_t i = 0; i < P; ++i)
        for (int t = 0; t < k; ++t) {
            int j = nbr[i * static_cast<size_t>(k) + t];
            if (j < 0)
                continue;
            edges.push_back({std::min<int>(static_cast<int>(i), j),
                             std::max<int>(static_cast<int>(i), j)});
        }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    kernels::Csr a;
    a.n = static_cast<int>(P);
    std::vector<int> deg(P, 0);
    for (const auto& [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    a.offsets.assign(P + 1, 0);
    for (size_t i = 0; i < P; ++i)
        a.offsets[i + 1] = a.offsets[i] + deg[i];
    a.idx.resize(edges.size() * 2);
    a.val.resize(edges.size() * 2);
    std::vector<int64_t> fill(a.offsets.begin(), a.offsets.end() - 1);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> xu(d), xv(d);
    for (const auto& [u, v] : edges) {
        features.gather(static_cast<size_t>(u), xu.data());
        features.gather(static_cast<size_t>(v), xv.data());
        double s = 0.0;
        for (int t = 0; t < d; ++t) {
            const double diff = xu[t] - xv[t];
            s += diff * diff;
        }
        const double w = std::exp(-s * inv2s2);
        a.idx[fill[u]] = v;
        a.val[fill[u]++] = w;
        a.idx[fill[v]] = u;
        a.val[fill[v]++] = w;
    }
    // rows need ascending column order for downstream binary searches
    for (size_t i = 0; i < P; ++i) {
        std::vector<std::pair<int, double>> row;
        for (int64_t e = a.offsets[i]; e < a.offsets[i + 1]; ++e)
            row.push_back({a.idx[e], a.val[e]});
        std::sort(row.begin(), row.end());
        for (int64_t e = a.offsets[i]; e < a.offsets[i + 1]; ++e) {
            a.idx[e] = row[e - a.offsets[i]].first;
            a.val[e] = row[e - a.offsets[i]].second;
        }
    }
    return a;
}

} // namespace

SpreadResult label_spread(const PairDataset& data, const SpreadConfig& cfg) {
    if (cfg.clamp <= 0.0 || cfg.clamp >= 1.0)
        throw ConfigError("label_spread: clamp must be in (0,1)");
    if (!data.features)
        throw ConfigError("label_spread: dataset has no feature source");
    const size_t P = data.pairs.size();
    if (P == 0)
        throw DataError("label_spread: empty pair set");

    int64_t n_pos = 0, n_neg = 0;
    for (int8_t l : data.labels) {
        if (l == 1)
            ++n_pos;
        else if (l == 0)
            ++n_neg;
    }
    if (n_pos + n_neg == 0)
        throw DataError("label_spread: no labeled pairs, nothing to spread");
    if (n_pos == 0 || n_neg == 0)
        throw DataError("label_spread: labels cover a single class, spreading is degenerate");

    SpreadResult res;
    res.sigma = cfg.sigma > 0.0 ? cfg.sigma : median_heuristic_sigma(*data.features, P);
    if (res.sigma <= 0.0) {
        std::cerr << "[spread] warning: zero feature spread, using sigma=1\n";
        res.sigma = 1.0;
    }

    NormalizedAffinity aff;
    if (static_cast<int64_t>(P) > cfg.pair_budget) {
        std::cerr << "[spread] " << P << " pairs exceed the dense budget of " << cfg.pair_budget
                  << ", switching to " << cfg.knn << "-NN sparsified affinity\n";
        aff.is_sparse = true;
        aff.sparse = knn_affinity(*data.features, P, res.sigma, std::min<int>(cfg.knn, 64));
        normalize_sparse(aff.sparse);
        res.used_knn = true;
    } else {
        const int d = data.features->dim();
        Matrix x(static_cast<int>(P), d);
        for (size_t i = 0; i < P; ++i)
            data.features->gather(i, x.row(static_cast<int>(i)));
        aff.dense = rbf_affinity(x, res.sigma);
        normalize_dense(aff.dense);
    }

    // F <- clamp * Snorm * F + (1-clamp) * Y, two label columns
    std::vector<double> y(P * 2, 0.0);
    for (size_t i = 0; i < P; ++i) {
        if (data.labels[i] == 0)
            y[i * 2] = 1.0;
        else if (data.labels[i] == 1)
            y[i * 2 + 1] = 1.0;
    }
    std::vector<double> f = y, fn(P * 2, 0.0);

    res.converged = false;
    int it = 0;
    while (it < cfg.max_iter) {
        ++it;
        if (aff.is_sparse)
            kernels::csr_apply_omp(aff.sparse, f.data(), fn.data(), 2);
        else
            kernels::gemm_omp(aff.dense.data(), f.data(), fn.data(), static_cast<int>(P),
                              static_cast<int>(P), 2);
        double delta = 0.0;
        for (size_t i = 0; i < fn.size(); ++i) {
            fn[i] = cfg.clamp * fn[i] + (1.0 - cfg.clamp) * y[i];
            delta = std::max(delta, std::abs(fn[i] - f[i]));
        }
        std::swap(f, fn);
        if (delta < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    res.iterations = it;
    if (!res.converged)
        std::cerr << "[spread] warning: not converged after " << cfg.max_iter << " iterations\n";

    res.prob.resize(P);
    res.hard.resize(P);
    for (size_t i = 0; i < P; ++i) {
        const double f0 = f[i * 2], f1 = f[i * 2 + 1];
        res.prob[i] = (f0 + f1) > 0.0 ? f1 / (f0 + f1) : 0.5;
        if (data.labels[i] >= 0)
            res.hard[i] = data.labels[i]; // initial labels never flip
        else
            res.hard[i] = f1 > f0 ? 1 : 0;
    }
    return res;
}

} // namespace sockspot
