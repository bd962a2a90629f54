#include "sockspot/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sockspot/errors.hpp"

namespace sockspot {

namespace {

constexpr char kKatzMagic[8] = {'S', 'S', 'K', 'A', 'T', 'Z', '0', '1'};

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in)
        throw ConfigError("cannot open file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out)
        throw ConfigError("cannot write file: " + path);
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_graph(const std::string& path, const BipartiteGraph& g) {
    auto out = open_out(path);
    for (int a = 0; a < g.num_accounts(); ++a)
        for (int64_t e = g.row_begin(a); e < g.row_end(a); ++e)
            out << g.accounts[a] << ',' << g.node_id(g.adj[e]) << ',' << g.weights[e] << '\n';
}

BipartiteGraph load_graph(const std::string& path, bool weighted_view) {
    auto in = open_in(path);
    std::vector<ActivityRecord> records;
    std::string line;
    int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto f = split(line, ',');
        if (f.size() != 3 || f[0].empty() || f[1].empty())
            throw DataError("graph dump " + path + ": bad line " + std::to_string(lineno));
        int64_t w = 0;
        auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), w);
        if (ec != std::errc() || p != f[2].data() + f[2].size() || w < 1)
            throw DataError("graph dump " + path + ": bad weight on line " + std::to_string(lineno));
        records.push_back({f[0], f[1], w, ""});
    }
    BipartiteGraph g = build_bipartite(records);
    g.weighted_view = weighted_view;
    return g;
}

void write_katz(const std::string& path, const SimilarityMatrix& s) {
    auto out = open_out(path, true);
    out.write(kKatzMagic, sizeof(kKatzMagic));
    int64_t n = s.n;
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&s.beta), sizeof(s.beta));
    out.write(reinterpret_cast<const char*>(&s.tol), sizeof(s.tol));
    out.write(reinterpret_cast<const char*>(s.s.data()),
              static_cast<std::streamsize>(sizeof(double) * s.s.v.size()));
    if (!out)
        throw ConfigError("short write: " + path);
}

SimilarityMatrix load_katz(const std::string& path) {
    auto in = open_in(path, true);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kKatzMagic, sizeof(magic)) != 0)
        throw DataError("not a similarity matrix file: " + path);
    SimilarityMatrix s;
    int64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&s.beta), sizeof(s.beta));
    in.read(reinterpret_cast<char*>(&s.tol), sizeof(s.tol));
    if (!in || n < 0 || n > 1000000)
        throw DataError("corrupt similarity matrix header: " + path);
    s.n = static_cast<int>(n);
    s.s = Matrix(s.n, s.n);
    in.read(reinterpret_cast<char*>(s.s.data()),
            static_cast<std::streamsize>(sizeof(double) * s.s.v.size()));
    if (!in)
        throw DataError("truncated similarity matrix: " + path);
    s.num_accounts = s.n; // caller narrows this from the graph
    return s;
}

void write_embeddings(const std::string& path, const EmbeddingMatrix& e) {
    if (static_cast<int>(e.ids.size()) != e.w.rows)
        throw ConfigError("write_embeddings: ids not aligned with rows");
    auto out = open_out(path);
    out << e.w.rows << ' ' << e.d << '\n';
    char buf[40];
    for (int i = 0; i < e.w.rows; ++i) {
        out << e.ids[i];
        for (int j = 0; j < e.d; ++j) {
            snprintf(buf, sizeof(buf), "%.9g", e.w.at(i, j));
            out << ' ' << buf;
        }
        out << '\n';
    }
}

EmbeddingMatrix load_embeddings(const std::string& path) {
    auto in = open_in(path);
    int n = 0, d = 0;
    if (!(in >> n >> d) || n < 0 || d < 1)
        throw DataError("bad embedding header: " + path);
    EmbeddingMatrix e;
    e.d = d;
    e.ids.resize(n);
    e.w = Matrix(n, d);
    for (int i = 0; i < n; ++i) {
        if (!(in >> e.ids[i]))
            throw DataError("truncated embedding file: " + path);
        for (int j = 0; j < d; ++j)
            if (!(in >> e.w.at(i, j)))
                throw DataError("truncated embedding file: " + path);
    }
    return e;
}

void write_clusters(const std::string& path, const ClusterAssignment& a) {
    auto out = open_out(path);
    out << "account_id,cluster\n";
    for (size_t i = 0; i < a.ids.size(); ++i)
        out << a.ids[i] << ',' << a.of[i] << '\n';
}

ClusterAssignment load_clusters(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || split(line, ',')[0] != "account_id")
        throw DataError("bad cluster file header: " + path);
    ClusterAssignment a;
    int maxc = -1;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto f = split(line, ',');
        if (f.size() != 2)
            throw DataError("bad cluster line in " + path);
        a.ids.push_back(f[0]);
        a.of.push_back(std::stoi(f[1]));
        maxc = std::max(maxc, a.of.back());
    }
    a.c = maxc + 1;
    return a;
}

void write_ownership(const std::string& path, const OwnershipMap& m) {
    auto out = open_out(path);
    out << "account_id,user_id\n";
    for (const auto& [account, owner] : m.owner_of)
        out << account << ',' << owner << '\n';
}

OwnershipMap load_ownership(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw DataError("empty ownership file: " + path);
    auto header = split(line, ',');
    int col_account = -1, col_user = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "account_id")
            col_account = static_cast<int>(i);
        else if (header[i] == "user_id")
            col_user = static_cast<int>(i);
    }
    if (col_account < 0 || col_user < 0)
        throw ConfigError("ownership file needs account_id,user_id header: " + path);
    OwnershipMap m;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto f = split(line, ',');
        if (f.size() != header.size() || f[col_account].empty() || f[col_user].empty())
            throw DataError("bad ownership line in " + path);
        auto [it, fresh] = m.owner_of.try_emplace(f[col_account], f[col_user]);
        if (!fresh && it->second != f[col_user])
            throw DataError("conflicting owners for account '" + f[col_account] + "' in " + path);
    }
    return m;
}

void write_predictions(const std::string& path, const std::vector<PredictionRow>& rows) {
    auto out = open_out(path);
    out << "u,v,prob,label,source_cluster\n";
    for (const auto& r : rows)
        out << r.u << ',' << r.v << ',' << format_double(r.prob) << ',' << r.label << ','
            << r.source_cluster << '\n';
}

std::vector<PredictionRow> load_predictions(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "u,v,prob,label,source_cluster")
        throw DataError("bad predictions header: " + path);
    std::vector<PredictionRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto f = split(line, ',');
        if (f.size() != 5)
            throw DataError("bad prediction line in " + path);
        PredictionRow r;
        r.u = f[0];
        r.v = f[1];
        r.prob = std::stod(f[2]);
        r.label = std::stoi(f[3]);
        r.source_cluster = std::stoi(f[4]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_pair_labels(const std::string& path, const std::vector<std::pair<int, int>>& pairs,
                       const std::vector<std::string>& ids, const std::vector<int8_t>& labels) {
    auto out = open_out(path);
    out << "u,v,label\n";
    for (size_t i = 0; i < pairs.size(); ++i)
        out << ids[pairs[i].first] << ',' << ids[pairs[i].second] << ','
            << static_cast<int>(labels[i]) << '\n';
}

std::map<std::pair<std::string, std::string>, int8_t> load_pair_labels(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "u,v,label")
        throw DataError("bad labels header: " + path);
    std::map<std::pair<std::string, std::string>, int8_t> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto f = split(line, ',');
        if (f.size() != 3)
            throw DataError("bad label line in " + path);
        std::pair<std::string, std::string> key{std::min(f[0], f[1]), std::max(f[0], f[1])};
        int8_t label = static_cast<int8_t>(std::stoi(f[2]));
        auto [it, fresh] = out.try_emplace(key, label);
        if (!fresh && it->second != label)
            throw DataError("conflicting labels for pair " + key.first + "," + key.second);
    }
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

} // namespace sockspot
