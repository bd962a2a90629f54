#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sockspot/cluster.hpp"
#include "sockspot/config.hpp"
#include "sockspot/errors.hpp"
#include "sockspot/graph.hpp"
#include "sockspot/io.hpp"
#include "sockspot/katz.hpp"
#include "sockspot/metrics.hpp"
#include "sockspot/node2vec.hpp"
#include "sockspot/pipeline.hpp"
#include "sockspot/skipgram.hpp"
#include "sockspot/spread.hpp"
#include "sockspot/sweep.hpp"
#include "sockspot/synth.hpp"
#include "sockspot/truth.hpp"

namespace {

using namespace sockspot;
namespace fs = std::filesystem;

ActivityFormat parse_format(const std::string& f) {
    if (f == "csv")
        return ActivityFormat::Csv;
    if (f == "jsonl")
        return ActivityFormat::Jsonl;
    return ActivityFormat::Auto;
}

BipartiteGraph load_graph_or_input(const std::string& graph_path, const std::string& input_path,
                                   const std::string& format, bool weighted) {
    if (!graph_path.empty() && !input_path.empty())
        throw ConfigError("give either --graph or --input, not both");
    if (!graph_path.empty())
        return load_graph(graph_path, weighted);
    if (input_path.empty())
        throw ConfigError("need --graph or --input");
    auto records = load_activities(input_path, parse_format(format));
    BipartiteGraph g = build_bipartite(records);
    g.weighted_view = weighted;
    return g;
}

void add_pipeline_flags(CLI::App* cmd, PipelineConfig& cfg) {
    cmd->add_option("--input", cfg.input, "activity log (CSV or JSONL)");
    cmd->add_option("--format", cfg.format, "csv|jsonl|auto");
    cmd->add_option("--method", cfg.method, "unsup-katz|semi-katz|semi-embed");
    cmd->add_flag("--weighted,!--unweighted", cfg.weighted, "use activity counts as edge weights");
    cmd->add_flag("--filter,!--no-filter", cfg.filter, "apply the low-degree account filter");
    cmd->add_option("--beta", cfg.katz_beta, "katz damping: auto or a float");
    cmd->add_option("--tol", cfg.katz_tol, "katz series tolerance");
    cmd->add_option("--max-terms", cfg.katz_max_terms, "katz series term cap");
    cmd->add_option("--katz-method", cfg.katz_method, "auto|series|solve");
    cmd->add_option("--alpha", cfg.alpha, "threshold percentile for the unsupervised method");
    cmd->add_option("--eps", cfg.feature_eps, "katz pair feature epsilon");
    cmd->add_option("--p", cfg.p, "walk return parameter");
    cmd->add_option("--q", cfg.q, "walk in-out parameter");
    cmd->add_option("--num-walks", cfg.num_walks, "walks per node");
    cmd->add_option("--walk-length", cfg.walk_length, "nodes per walk");
    cmd->add_option("--d", cfg.d, "embedding width");
    cmd->add_option("--window", cfg.window, "skip-gram window");
    cmd->add_option("--negatives", cfg.negatives, "negative samples per pair");
    cmd->add_option("--epochs", cfg.epochs, "training epochs");
    cmd->add_option("--lr", cfg.lr, "initial learning rate");
    cmd->add_option("--threads", cfg.threads, "skip-gram workers (>1 is nondeterministic)");
    cmd->add_option("--op", cfg.op, "pair operator: average|l1|l2|cosine");
    cmd->add_option("--sigma", cfg.sigma, "RBF scale: auto or a float");
    cmd->add_option("--clamp", cfg.clamp, "label retention coefficient in (0,1)");
    cmd->add_option("--spread-tol", cfg.spread_tol, "spreading convergence tolerance");
    cmd->add_option("--max-iter", cfg.max_iter, "spreading iteration cap");
    cmd->add_option("--pair-budget", cfg.pair_budget, "dense affinity budget in pairs");
    cmd->add_option("--knn", cfg.knn, "neighbours for sparsified affinity");
    cmd->add_option("--clusters,-c", cfg.clusters, "spectral cluster count");
    cmd->add_option("--fraction", cfg.truth_fraction, "fraction of accounts queried per cluster");
    cmd->add_flag("--alternative,!--no-alternative", cfg.use_alternative,
                  "use similarity-derived labels instead of queried truth");
    cmd->add_option("--alt-high", cfg.alt_high, "alternative truth high percentile");
    cmd->add_option("--alt-low", cfg.alt_low, "alternative truth low percentile");
    cmd->add_option("--truth", cfg.truth_file, "ownership CSV (account_id,user_id)");
    cmd->add_option("--sweep-s", cfg.sweep_s, "splits per user for re-splitting sweeps");
    cmd->add_option("--sweep-min-activities", cfg.sweep_min_activities,
                    "eligibility floor for re-splitting sweeps");
    cmd->add_option("--seed", cfg.seed, "master seed; all stage seeds derive from it");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_flag("--cache,!--no-cache", cfg.cache, "reuse stage artifacts across runs");
    cmd->add_option("--cache-dir", cfg.cache_dir, "cache location (default <out>/cache)");
}

// --config must take effect before the flag overrides, so it is pulled out
// of argv ahead of the regular parse
void preload_config(int argc, char** argv, PipelineConfig& cfg) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config")
            load_config_file(cfg, argv[i + 1]);
}

int print_report(const PipelineResult& res) {
    if (res.have_report)
        std::cout << report_to_json(res.report) << "\n";
    std::cout << "predictions: " << res.predictions_path << "\n";
    if (!res.all_converged) {
        std::cerr << "warning: at least one stage failed to converge\n";
        return 4;
    }
    return 0;
}

EvalReport evaluate_files(const std::string& predictions_path, const std::string& truth_path,
                          const std::string& graph_path, const std::string& roc_out) {
    BipartiteGraph g = load_graph(graph_path, false);
    OwnershipMap truth = load_ownership(truth_path);
    auto rows = load_predictions(predictions_path);
    std::map<std::pair<std::string, std::string>, std::pair<double, int8_t>> pred;
    for (const auto& r : rows)
        pred[{std::min(r.u, r.v), std::max(r.u, r.v)}] = {r.prob, static_cast<int8_t>(r.label)};

    std::vector<double> scores;
    std::vector<int8_t> preds, truths;
    const int na = g.num_accounts();
    for (int u = 0; u < na; ++u)
        for (int v = u + 1; v < na; ++v) {
            const std::string* ou = truth.find(g.accounts[u]);
            const std::string* ov = truth.find(g.accounts[v]);
            truths.push_back(!ou || !ov ? int8_t{-1} : int8_t{*ou == *ov ? 1 : 0});
            auto it = pred.find({g.accounts[u], g.accounts[v]});
            scores.push_back(it == pred.end() ? 0.0 : it->second.first);
            preds.push_back(it == pred.end() ? int8_t{0} : it->second.second);
        }
    if (!roc_out.empty()) {
        std::vector<double> s;
        std::vector<int8_t> t;
        for (size_t i = 0; i < truths.size(); ++i)
            if (truths[i] >= 0) {
                s.push_back(scores[i]);
                t.push_back(truths[i]);
            }
        std::ostringstream os;
        os << "threshold,fpr,tpr\n";
        for (const auto& p : roc_points(s, t))
            os << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
               << format_double(p.tpr) << '\n';
        write_text(roc_out, os.str());
    }
    return evaluate(scores, preds, truths);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiple-account detection on account-page interaction graphs"};
    app.require_subcommand(1);
    std::function<int()> action;

    PipelineConfig cfg;
    try {
        preload_config(argc, argv, cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    // ingest ----------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "parse activities, build + clean the graph");
    {
        static std::string input, format = "auto", out = "out";
        static bool filter = true, weighted = false;
        ingest->add_option("--input", input, "activity log")->required();
        ingest->add_option("--format", format, "csv|jsonl|auto");
        ingest->add_option("--out", out, "output directory")->required();
        ingest->add_flag("--filter,!--no-filter", filter, "");
        ingest->add_flag("--weighted,!--unweighted", weighted, "");
        ingest->callback([&]() {
            action = []() {
                fs::create_directories(out);
                ParseStats stats;
                auto records = load_activities(input, parse_format(format), &stats);
                BipartiteGraph g0 = build_bipartite(records);
                int64_t removed = 0;
                BipartiteGraph g;
                if (filter) {
                    ProjectedGraph proj = project_accounts(g0);
                    auto kept = filter_low_degree(proj, g0.num_nodes());
                    std::unordered_set<std::string> kept_set(kept.begin(), kept.end());
                    std::ostringstream os;
                    os << "account_id\n";
                    for (const auto& a : g0.accounts)
                        if (!kept_set.count(a)) {
                            os << a << '\n';
                            ++removed;
                        }
                    write_text(out + "/removed_accounts.csv", os.str());
                    g = build_bipartite(restrict_records(records, kept));
                } else {
                    g = std::move(g0);
                }
                g.weighted_view = weighted;
                write_graph(out + "/graph.csv", g);
                nlohmann::json j;
                j["activities"] = records.size();
                j["rejected_lines"] = stats.rejected_lines;
                j["accounts"] = g.num_accounts();
                j["pages"] = g.num_pages();
                j["edges"] = g.num_edges();
                j["removed_accounts"] = removed;
                write_text(out + "/ingest_report.json", j.dump(2) + "\n");
                std::cout << j.dump(2) << "\n";
                return 0;
            };
        });
    }

    // katz --------------------------------------------------------------------
    auto* katz = app.add_subcommand("katz", "similarity matrix and threshold");
    {
        static std::string graph, input, format = "auto", beta = "auto", method = "auto",
                           out = "out";
        static double tol = 1e-8, alpha = 95.0;
        static int max_terms = 1000;
        static bool weighted = false;
        katz->add_option("--graph", graph, "graph dump from ingest");
        katz->add_option("--input", input, "activity log (built without cleaning)");
        katz->add_option("--format", format, "");
        katz->add_option("--beta", beta, "auto or a float below 1/||M||_2");
        katz->add_option("--tol", tol, "series truncation tolerance");
        katz->add_option("--max-terms", max_terms, "");
        katz->add_option("--method", method, "auto|series|solve");
        katz->add_option("--alpha", alpha, "report the threshold at this percentile");
        katz->add_flag("--weighted,!--unweighted", weighted, "");
        katz->add_option("--out", out, "output directory")->required();
        katz->callback([&]() {
            action = []() {
                fs::create_directories(out);
                BipartiteGraph g = load_graph_or_input(graph, input, format, weighted);
                KatzConfig kc;
                kc.auto_beta = beta == "auto";
                if (!kc.auto_beta)
                    kc.beta = std::stod(beta);
                kc.tol = tol;
                kc.max_terms = max_terms;
                kc.method = method == "series" ? KatzMethod::Series
                            : method == "solve" ? KatzMethod::Solve
                                                : KatzMethod::Auto;
                SimilarityMatrix s = katz_matrix(g, kc);
                write_katz(out + "/katz.bin", s);
                nlohmann::json j;
                j["n"] = s.n;
                j["accounts"] = s.num_accounts;
                j["beta"] = s.beta;
                j["converged"] = s.converged;
                j["terms"] = s.terms;
                j["alpha"] = alpha;
                j["threshold"] = percentile_threshold(s, alpha);
                write_text(out + "/katz_summary.json", j.dump(2) + "\n");
                std::cout << j.dump(2) << "\n";
                return s.converged ? 0 : 4;
            };
        });
    }

    // embed ---------------------------------------------------------------------
    auto* embed = app.add_subcommand("embed", "node2vec embeddings");
    {
        static std::string graph, input, format = "auto", out = "out";
        static bool weighted = false;
        static WalkConfig wc;
        static SkipgramConfig sc;
        static uint64_t seed = 1;
        embed->add_option("--graph", graph, "graph dump from ingest");
        embed->add_option("--input", input, "activity log");
        embed->add_option("--format", format, "");
        embed->add_flag("--weighted,!--unweighted", weighted, "");
        embed->add_option("--p", wc.p, "return parameter");
        embed->add_option("--q", wc.q, "in-out parameter");
        embed->add_option("--num-walks", wc.num_walks, "");
        embed->add_option("--walk-length", wc.walk_length, "");
        embed->add_option("--d", sc.d, "");
        embed->add_option("--window", sc.window, "");
        embed->add_option("--negatives", sc.negatives, "");
        embed->add_option("--epochs", sc.epochs, "");
        embed->add_option("--lr", sc.lr, "");
        embed->add_option("--threads", sc.threads, "");
        embed->add_option("--seed", seed, "");
        embed->add_option("--out", out, "output directory")->required();
        embed->callback([&]() {
            action = []() {
                fs::create_directories(out);
                BipartiteGraph g = load_graph_or_input(graph, input, format, weighted);
                wc.seed = derive_seed(seed, "walks");
                sc.seed = derive_seed(seed, "skipgram");
                auto walks = generate_walks(g.adjacency(), wc);
                SkipgramStats stats;
                EmbeddingMatrix e = train_skipgram(walks, g.num_nodes(), sc, &stats);
                e.ids.resize(g.num_nodes());
                for (int i = 0; i < g.num_nodes(); ++i)
                    e.ids[i] = g.node_id(i);
                write_embeddings(out + "/embeddings.txt", e);
                std::cout << "{\"nodes\": " << e.num_nodes() << ", \"d\": " << e.d
                          << ", \"epoch_loss\": [";
                for (size_t i = 0; i < stats.epoch_loss.size(); ++i)
                    std::cout << (i ? "," : "") << stats.epoch_loss[i];
                std::cout << "]}\n";
                return 0;
            };
        });
    }

    // cluster -------------------------------------------------------------------
    auto* cluster = app.add_subcommand("cluster", "spectral clustering of account embeddings");
    {
        static std::string embeddings, graph, out = "out";
        static int c = 3;
        static uint64_t seed = 1;
        cluster->add_option("--embeddings", embeddings, "embedding file")->required();
        cluster->add_option("--graph", graph, "graph dump (defines the account set)")->required();
        cluster->add_option("-c,--clusters", c, "");
        cluster->add_option("--seed", seed, "");
        cluster->add_option("--out", out, "output directory")->required();
        cluster->callback([&]() {
            action = []() {
                fs::create_directories(out);
                BipartiteGraph g = load_graph(graph, false);
                EmbeddingMatrix e = load_embeddings(embeddings);
                std::map<std::string, int> row_of;
                for (int i = 0; i < e.num_nodes(); ++i)
                    row_of[e.ids[i]] = i;
                Matrix points(g.num_accounts(), e.d);
                for (int i = 0; i < g.num_accounts(); ++i) {
                    auto it = row_of.find(g.accounts[i]);
                    if (it == row_of.end())
                        throw DataError("cluster: account '" + g.accounts[i] +
                                        "' missing from embeddings");
                    std::copy(e.row(it->second), e.row(it->second) + e.d, points.row(i));
                }
                SpectralConfig scfg;
                scfg.c = c;
                scfg.seed = derive_seed(seed, "cluster");
                ClusterAssignment a = spectral_cluster(points, g.accounts, scfg);
                write_clusters(out + "/clusters.csv", a);
                std::cout << "{\"clusters\": " << a.c
                          << ", \"pairs\": " << candidate_pairs(a).size() << "}\n";
                return 0;
            };
        });
    }

    // simulate-split ---------------------------------------------------------
    auto* split = app.add_subcommand("simulate-split", "split accounts to make benchmarks");
    {
        static std::string input, format = "auto", out = "out";
        static SplitConfig sc;
        split->add_option("--input", input, "activity log")->required();
        split->add_option("--format", format, "");
        split->add_option("--s", sc.s, "split accounts per user");
        split->add_option("--min-activities", sc.min_activities,
                          "accounts below this pass through unsplit");
        split->add_option("--seed", sc.seed, "");
        split->add_option("--out", out, "output directory")->required();
        split->callback([&]() {
            action = []() {
                fs::create_directories(out);
                auto records = load_activities(input, parse_format(format));
                SplitResult r = split_accounts(records, sc);
                write_activities_csv(out + "/split_activities.csv", r.records);
                write_ownership(out + "/ownership.csv", r.ownership);
                std::cout << "{\"accounts_split\": " << r.accounts_split
                          << ", \"passed_through\": " << r.accounts_passed_through
                          << ", \"accounts\": " << r.ownership.owner_of.size() << "}\n";
                return 0;
            };
        });
    }

    // detect -------------------------------------------------------------------
    auto* detect = app.add_subcommand("detect", "run the full detection pipeline");
    {
        static std::string config_path;
        detect->add_option("--config", config_path, "key = value config file");
        add_pipeline_flags(detect, cfg);
        detect->callback([&]() {
            action = [&cfg]() {
                PipelineResult res = run_pipeline(cfg);
                return print_report(res);
            };
        });
    }

    // evaluate --------------------------------------------------------------
    auto* evaluate_cmd = app.add_subcommand("evaluate", "score a predictions file against truth");
    {
        static std::string predictions, truth, graph, roc_out, report_out;
        evaluate_cmd->add_option("--predictions", predictions, "")->required();
        evaluate_cmd->add_option("--truth", truth, "ownership CSV")->required();
        evaluate_cmd->add_option("--graph", graph, "graph dump (account universe)")->required();
        evaluate_cmd->add_option("--roc-out", roc_out, "write threshold,fpr,tpr points");
        evaluate_cmd->add_option("--report-out", report_out, "write the JSON report here too");
        evaluate_cmd->callback([&]() {
            action = []() {
                EvalReport rep = evaluate_files(predictions, truth, graph, roc_out);
                std::string j = report_to_json(rep);
                if (!report_out.empty())
                    write_text(report_out, j + "\n");
                std::cout << j << "\n";
                return 0;
            };
        });
    }

    // sweep --------------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "parameter sensitivity sweeps");
    {
        static std::string config_path, parameter;
        static std::vector<std::string> values;
        sweep->add_option("--config", config_path, "key = value config file");
        sweep->add_option("--parameter", parameter, "density|splits|alpha|d|pq|clusters")
            ->required();
        sweep->add_option("--values", values, "one or more parameter values")
            ->required()
            ->delimiter(',');
        add_pipeline_flags(sweep, cfg);
        sweep->callback([&]() {
            action = [&cfg]() {
                auto rows = run_sweep(cfg, parameter, values);
                bool converged = true;
                for (const auto& r : rows)
                    converged = converged && r.result.all_converged;
                std::cout << "sweep rows: " << rows.size() << ", table: " << cfg.out_dir
                          << "/sweep.csv\n";
                return converged ? 0 : 4;
            };
        });
    }

    // synth ---------------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic activity log");
    {
        static SynthConfig sc;
        static std::string out = "activities.csv";
        synth->add_option("--users", sc.users, "");
        synth->add_option("--heavy-users", sc.heavy_users, "");
        synth->add_option("--heavy-activities", sc.heavy_activities, "");
        synth->add_option("--light-activities", sc.light_activities, "");
        synth->add_option("--pages", sc.pages, "");
        synth->add_option("--pool-min", sc.pool_min, "");
        synth->add_option("--pool-max", sc.pool_max, "");
        synth->add_option("--zipf", sc.zipf, "");
        synth->add_option("--seed", sc.seed, "");
        synth->add_option("--out", out, "output CSV path");
        synth->callback([&]() {
            action = []() {
                auto records = synth_activities(sc);
                if (out.find('/') != std::string::npos)
                    fs::create_directories(fs::path(out).parent_path());
                write_activities_csv(out, records);
                std::cout << "{\"records\": " << records.size() << "}\n";
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
        return action ? action() : 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
