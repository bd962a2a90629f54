#include "sockspot/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "sockspot/cluster.hpp"
#include "sockspot/errors.hpp"
#include "sockspot/graph.hpp"
#include "sockspot/io.hpp"
#include "sockspot/katz.hpp"
#include "sockspot/node2vec.hpp"
#include "sockspot/rng.hpp"
#include "sockspot/skipgram.hpp"
#include "sockspot/spread.hpp"
#include "sockspot/truth.hpp"

namespace sockspot {

namespace {

namespace fs = std::filesystem;

class StageTimer {
public:
    StageTimer(PipelineResult& res, std::string name)
        : res_(res), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    void finish(bool cached = false) {
        if (done_)
            return;
        done_ = true;
        const double sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        res_.stages.push_back({name_, sec, cached});
        std::cerr << "[pipeline] " << name_ << (cached ? " (cached) " : " ") << sec << "s\n";
    }
    ~StageTimer() { finish(); }

private:
    PipelineResult& res_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
    bool done_ = false;
};

uint64_t hash_graph(const BipartiteGraph& g) {
    std::ostringstream os;
    for (int a = 0; a < g.num_accounts(); ++a)
        for (int64_t e = g.row_begin(a); e < g.row_end(a); ++e)
            os << g.accounts[a] << ',' << g.node_id(g.adj[e]) << ',' << g.weights[e] << '\n';
    os << "weighted=" << g.weighted_view;
    return fnv1a64(os.str());
}

std::string hex16(uint64_t v) {
    char buf[20];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

OwnershipMap truth_from_records(const std::vector<ActivityRecord>& records) {
    OwnershipMap m;
    for (const auto& r : records)
        if (!r.user_id.empty())
            m.owner_of[r.account_id] = r.user_id;
    return m;
}

int8_t truth_label(const OwnershipMap& truth, const std::string& a, const std::string& b) {
    const std::string* oa = truth.find(a);
    const std::string* ob = truth.find(b);
    if (!oa || !ob)
        return -1;
    return *oa == *ob ? 1 : 0;
}

struct PairOutcome {
    double prob = 0.0;
    int8_t label = 0;
    int cluster = -1;
};

} // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    if (cfg.input.empty())
        throw ConfigError("pipeline: no input file configured");
    ActivityFormat fmt = cfg.format == "csv"     ? ActivityFormat::Csv
                         : cfg.format == "jsonl" ? ActivityFormat::Jsonl
                                                 : ActivityFormat::Auto;
    ParseStats stats;
    std::vector<ActivityRecord> records = load_activities(cfg.input, fmt, &stats);
    if (stats.rejected_lines > 0)
        std::cerr << "[pipeline] ingest rejected " << stats.rejected_lines << " malformed lines\n";
    return run_pipeline_records(cfg, std::move(records));
}

PipelineResult run_pipeline_records(const PipelineConfig& cfg,
                                    std::vector<ActivityRecord> records) {
    validate_config(cfg);
    fs::create_directories(cfg.out_dir);
    const std::string cache_dir = cfg.cache_dir.empty() ? cfg.out_dir + "/cache" : cfg.cache_dir;
    if (cfg.cache)
        fs::create_directories(cache_dir);

    PipelineResult res;

    // --- clean: project, drop low-degree accounts, rebuild ---------------
    BipartiteGraph g;
    {
        StageTimer t(res, "ingest+clean");
        BipartiteGraph g0 = build_bipartite(records);
        if (cfg.filter) {
            ProjectedGraph proj = project_accounts(g0);
            std::vector<std::string> kept = filter_low_degree(proj, g0.num_nodes());
            std::unordered_set<std::string> kept_set(kept.begin(), kept.end());
            std::ostringstream removed;
            removed << "account_id\n";
            for (const auto& a : g0.accounts)
                if (!kept_set.count(a)) {
                    removed << a << '\n';
                    ++res.removed_accounts;
                }
            write_text(cfg.out_dir + "/removed_accounts.csv", removed.str());
            if (res.removed_accounts > 0)
                std::cerr << "[pipeline] degree filter removed " << res.removed_accounts
                          << " accounts (kept " << kept.size() << ")\n";
            records = restrict_records(records, kept);
            g = build_bipartite(records);
        } else {
            g = std::move(g0);
        }
        g.weighted_view = cfg.weighted;
        if (g.num_accounts() < 2)
            throw DataError("pipeline: fewer than two accounts after cleaning");
        write_graph(cfg.out_dir + "/graph.csv", g);
    }
    res.n_accounts = g.num_accounts();
    res.n_pages = g.num_pages();

    // --- evaluation truth -------------------------------------------------
    OwnershipMap truth =
        cfg.truth_file.empty() ? truth_from_records(records) : load_ownership(cfg.truth_file);

    const uint64_t graph_key = hash_graph(g);

    // --- similarity matrix (katz methods and alternative truth) ----------
    SimilarityMatrix sim;
    const bool need_sim = cfg.method != "semi-embed" || cfg.use_alternative;
    if (need_sim) {
        StageTimer t(res, "katz");
        std::ostringstream key;
        key << graph_key << '|' << cfg.katz_beta << '|' << format_double(cfg.katz_tol) << '|'
            << cfg.katz_max_terms << '|' << cfg.katz_method;
        const std::string path = cache_dir + "/katz_" + hex16(fnv1a64(key.str())) + ".bin";
        if (cfg.cache && fs::exists(path)) {
            sim = load_katz(path);
            sim.num_accounts = g.num_accounts();
            t.finish(true);
        } else {
            sim = katz_matrix(g, make_katz_config(cfg));
            if (!sim.converged) {
                res.all_converged = false;
                std::cerr << "[pipeline] warning: katz series not converged after " << sim.terms
                          << " terms\n";
            }
            if (cfg.cache)
                write_katz(path, sim);
        }
        write_katz(cfg.out_dir + "/katz.bin", sim);
    }

    // --- embeddings --------------------------------------------------------
    EmbeddingMatrix emb;
    const bool need_emb = cfg.method == "semi-embed";
    if (need_emb) {
        StageTimer t(res, "embed");
        WalkConfig wc = make_walk_config(cfg);
        SkipgramConfig sc = make_skipgram_config(cfg);
        std::ostringstream key;
        key << graph_key << '|' << format_double(cfg.p) << '|' << format_double(cfg.q) << '|'
            << cfg.num_walks << '|' << cfg.walk_length << '|' << cfg.d << '|' << cfg.window << '|'
            << cfg.negatives << '|' << cfg.epochs << '|' << format_double(cfg.lr) << '|'
            << wc.seed << '|' << sc.seed << '|' << cfg.threads;
        const std::string path = cache_dir + "/emb_" + hex16(fnv1a64(key.str())) + ".txt";
        if (cfg.cache && fs::exists(path)) {
            emb = load_embeddings(path);
            t.finish(true);
        } else {
            auto walks = generate_walks(g.adjacency(), wc);
            SkipgramStats sg_stats;
            emb = train_skipgram(walks, g.num_nodes(), sc, &sg_stats);
            emb.ids.resize(g.num_nodes());
            for (int i = 0; i < g.num_nodes(); ++i)
                emb.ids[i] = g.node_id(i);
            if (!sg_stats.silent_nodes.empty())
                std::cerr << "[pipeline] warning: " << sg_stats.silent_nodes.size()
                          << " nodes never appeared in walks, zero vectors assigned\n";
            if (cfg.cache)
                write_embeddings(path, emb);
        }
        write_embeddings(cfg.out_dir + "/embeddings.txt", emb);
    }

    // --- predictions -------------------------------------------------------
    std::map<std::pair<int, int>, PairOutcome> outcome;
    const int na = g.num_accounts();

    if (cfg.method == "unsup-katz") {
        StageTimer t(res, "threshold");
        UnsupervisedPredictions up = predict_unsupervised(sim, cfg.alpha);
        const double smax = account_pair_max(sim);
        res.candidate_pair_count = static_cast<int64_t>(up.pairs.size());
        for (size_t i = 0; i < up.pairs.size(); ++i)
            outcome[up.pairs[i]] = {smax > 0.0 ? up.score[i] / smax : 0.0, up.label[i], -1};
    } else {
        // cluster on embedding rows (or similarity profiles for semi-katz)
        ClusterAssignment assignment;
        {
            StageTimer t(res, "cluster");
            Matrix points;
            if (cfg.method == "semi-embed") {
                points = Matrix(na, emb.d);
                for (int i = 0; i < na; ++i)
                    std::copy(emb.row(i), emb.row(i) + emb.d, points.row(i));
            } else {
                points = Matrix(na, sim.n);
                for (int i = 0; i < na; ++i)
                    std::copy(sim.s.row(i), sim.s.row(i) + sim.n, points.row(i));
            }
            SpectralConfig sc;
            sc.c = cfg.clusters;
            sc.seed = derive_seed(cfg.seed, "cluster");
            assignment = spectral_cluster(points, g.accounts, sc);
            write_clusters(cfg.out_dir + "/clusters.csv", assignment);
        }

        StageTimer t(res, "spread");
        auto groups = assignment.members();
        std::vector<std::pair<int, int>> all_labeled_pairs;
        std::vector<int8_t> all_labels;
        for (int k = 0; k < static_cast<int>(groups.size()); ++k) {
            const auto& members = groups[k];
            if (members.size() < 2)
                continue;
            std::vector<std::pair<int, int>> pairs;
            pairs.reserve(members.size() * (members.size() - 1) / 2);
            for (size_t i = 0; i < members.size(); ++i)
                for (size_t j = i + 1; j < members.size(); ++j)
                    pairs.push_back({members[i], members[j]});
            res.candidate_pair_count += static_cast<int64_t>(pairs.size());

            // labels: sampled queries or alternative ground truth
            std::vector<int8_t> labels;
            if (cfg.use_alternative) {
                AltTruthResult alt = alternative_ground_truth(sim, cfg.alt_high, cfg.alt_low, pairs);
                labels = std::move(alt.labels);
                res.alt_labeled += alt.n_pos + alt.n_neg;
                for (size_t i = 0; i < pairs.size(); ++i) {
                    if (labels[i] < 0)
                        continue;
                    int8_t real = truth_label(truth, g.accounts[pairs[i].first],
                                              g.accounts[pairs[i].second]);
                    if (real >= 0 && real != labels[i])
                        ++res.alt_conflicts;
                }
            } else {
                std::vector<std::string> member_ids;
                member_ids.reserve(members.size());
                for (int m : members)
                    member_ids.push_back(g.accounts[m]);
                std::vector<std::string> queried = sample_queried_nodes(
                    member_ids, cfg.truth_fraction,
                    derive_seed(cfg.seed, "truth", static_cast<uint64_t>(k)));
                res.truth_queries += static_cast<int64_t>(queried.size());
                std::unordered_set<std::string> queried_set(queried.begin(), queried.end());
                labels = label_pairs(pairs, g.accounts, queried_set, truth);
            }

            int64_t n_pos = 0, n_neg = 0;
            for (int8_t l : labels) {
                if (l == 1)
                    ++n_pos;
                else if (l == 0)
                    ++n_neg;
            }
            res.train_labeled += n_pos + n_neg;
            for (size_t i = 0; i < pairs.size(); ++i) {
                if (labels[i] >= 0) {
                    all_labeled_pairs.push_back(pairs[i]);
                    all_labels.push_back(labels[i]);
                }
            }

            if (n_pos == 0 || n_neg == 0) {
                // nothing to spread from; fall back to the conservative prior
                ++res.degenerate_clusters;
                std::cerr << "[pipeline] cluster " << k << ": labels cover "
                          << (n_pos + n_neg == 0 ? "no" : "a single") << " class, predicting 0 for "
                          << pairs.size() << " pairs\n";
                for (size_t i = 0; i < pairs.size(); ++i) {
                    int8_t hard = labels[i] >= 0 ? labels[i] : 0;
                    outcome[pairs[i]] = {labels[i] == 1 ? 1.0 : 0.0, hard, k};
                }
                continue;
            }

            PairDataset data;
            data.ids = g.accounts;
            data.pairs = std::move(pairs);
            data.labels = std::move(labels);
            if (cfg.method == "semi-embed")
                data.features = std::make_shared<EmbeddingFeatureSource>(emb, data.pairs, pair_op(cfg));
            else
                data.features =
                    std::make_shared<KatzFeatureSource>(sim, data.pairs, cfg.feature_eps);

            SpreadResult sr = label_spread(data, make_spread_config(cfg));
            if (!sr.converged)
                res.all_converged = false;
            for (size_t i = 0; i < data.pairs.size(); ++i)
                outcome[data.pairs[i]] = {sr.prob[i], sr.hard[i], k};
        }
        write_pair_labels(cfg.out_dir + "/labels.csv", all_labeled_pairs, g.accounts, all_labels);
    }

    // --- merge + evaluate ---------------------------------------------------
    {
        StageTimer t(res, "evaluate");
        std::vector<PredictionRow> rows;
        rows.reserve(outcome.size());
        for (const auto& [pair, oc] : outcome)
            rows.push_back(
                {g.accounts[pair.first], g.accounts[pair.second], oc.prob, oc.label, oc.cluster});
        res.predictions_path = cfg.out_dir + "/predictions.csv";
        write_predictions(res.predictions_path, rows);

        if (!truth.owner_of.empty()) {
            std::vector<double> scores;
            std::vector<int8_t> preds, truths;
            for (int u = 0; u < na; ++u)
                for (int v = u + 1; v < na; ++v) {
                    int8_t tl = truth_label(truth, g.accounts[u], g.accounts[v]);
                    auto it = outcome.find({u, v});
                    // pairs outside every cluster are forced negatives
                    scores.push_back(it == outcome.end() ? 0.0 : it->second.prob);
                    preds.push_back(it == outcome.end() ? 0 : it->second.label);
                    truths.push_back(tl);
                }
            res.report = evaluate(scores, preds, truths);
            res.have_report = true;
            res.report_path = cfg.out_dir + "/report.json";
            write_text(res.report_path, report_to_json(res.report) + "\n");
            write_text(cfg.out_dir + "/report.csv",
                       report_csv_header() + "\n" + report_csv_row(res.report) + "\n");
        } else {
            std::cerr << "[pipeline] no ground truth available, skipping evaluation\n";
        }
    }

    // --- run summary ---------------------------------------------------------
    nlohmann::json summary;
    summary["method"] = cfg.method;
    summary["accounts"] = res.n_accounts;
    summary["pages"] = res.n_pages;
    summary["removed_accounts"] = res.removed_accounts;
    summary["candidate_pairs"] = res.candidate_pair_count;
    summary["truth_queries"] = res.truth_queries;
    summary["train_labeled_pairs"] = res.train_labeled;
    summary["alt_labeled_pairs"] = res.alt_labeled;
    summary["alt_truth_conflicts"] = res.alt_conflicts;
    summary["degenerate_clusters"] = res.degenerate_clusters;
    summary["converged"] = res.all_converged;
    summary["seed"] = cfg.seed;
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : res.stages)
        stages.push_back({{"name", s.name}, {"seconds", s.seconds}, {"cached", s.cached}});
    summary["stages"] = stages;
    write_text(cfg.out_dir + "/run_summary.json", summary.dump(2) + "\n");

    return res;
}

} // namespace sockspot
