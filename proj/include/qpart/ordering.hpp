// ordering.hpp - nested dissection, separators, symbolic factorization
//
// Nested dissection bisects each (sub)graph with either the quantum pipeline
// (coarsen + iterative QAOA + lift + FM) or the classical screen+FM strategy,
// turns the edge cut into a vertex separator by greedy cut-edge cover, and
// numbers blocks left, right, separator-last recursively. Small blocks fall
// back to a reverse breadth-first order from a pseudo-peripheral vertex.
// Merit figures come from an elimination-tree symbolic factorization of the
// permuted pattern.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpart/coarsen.hpp"
#include "qpart/errors.hpp"
#include "qpart/fm.hpp"
#include "qpart/graph.hpp"
#include "qpart/iterative.hpp"
#include "qpart/rng.hpp"

namespace qpart {

struct Permutation {
    std::vector<int> perm;    // old index -> new index
    std::vector<int> inverse; // new index -> old index
};

inline Permutation make_permutation(std::vector<int> perm) {
    Permutation p;
    p.inverse.assign(perm.size(), -1);
    for (std::size_t old = 0; old < perm.size(); ++old) {
        const int nw = perm[old];
        if (nw < 0 || nw >= static_cast<int>(perm.size()) || p.inverse[static_cast<std::size_t>(nw)] != -1)
            throw ValidationError("permutation is not a bijection");
        p.inverse[static_cast<std::size_t>(nw)] = static_cast<int>(old);
    }
    p.perm = std::move(perm);
    return p;
}

inline Permutation identity_permutation(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    return make_permutation(std::move(p));
}

inline void write_permutation(const Permutation& p, std::ostream& out) {
    for (int v : p.perm) out << v << '\n';
}

inline Permutation read_permutation(std::istream& in) {
    std::vector<int> perm;
    std::string line;
    while (std::getline(in, line)) {
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        perm.push_back(static_cast<int>(std::stol(line)));
    }
    return make_permutation(std::move(perm));
}

// ---------------------------------------------------------------------------
// Symmetric sparsity pattern: off-diagonal adjacency, diagonal structurally full.

struct SparsityPattern {
    int n = 0;
    std::vector<std::size_t> ptr; // n + 1
    std::vector<int> idx;         // sorted off-diagonal neighbors per row
};

inline SparsityPattern pattern_from_offdiag(int n, std::vector<std::pair<int, int>> pairs) {
    SparsityPattern p;
    p.n = n;
    p.ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::pair<int, int>> sym;
    sym.reserve(pairs.size() * 2);
    for (auto [i, j] : pairs) {
        if (i == j) continue;
        if (i < 0 || j < 0 || i >= n || j >= n) throw ValidationError("pattern index out of range");
        sym.emplace_back(i, j);
        sym.emplace_back(j, i);
    }
    std::sort(sym.begin(), sym.end());
    sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
    for (const auto& [i, j] : sym) ++p.ptr[static_cast<std::size_t>(i) + 1];
    for (std::size_t i = 1; i < p.ptr.size(); ++i) p.ptr[i] += p.ptr[i - 1];
    p.idx.resize(sym.size());
    std::vector<std::size_t> cur(p.ptr.begin(), p.ptr.end() - 1);
    for (const auto& [i, j] : sym) p.idx[cur[static_cast<std::size_t>(i)]++] = j;
    return p;
}

inline SparsityPattern graph_to_pattern(const WeightedGraph& g) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(g.n_edges());
    for (const auto& e : g.edges()) pairs.emplace_back(e.u, e.v);
    return pattern_from_offdiag(g.n_vertices(), std::move(pairs));
}

// Matrix Market coordinate ingestion (pattern/real/integer; symmetric, or
// general when the entry set is in fact symmetric).
inline SparsityPattern pattern_from_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty Matrix Market stream");
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    for (auto* s : {&object, &format, &field, &symmetry})
        std::transform(s->begin(), s->end(), s->begin(), [](unsigned char c) { return std::tolower(c); });
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
        throw ValidationError("expected a MatrixMarket coordinate header");
    if (field != "pattern" && field != "real" && field != "integer")
        throw ValidationError("unsupported MatrixMarket field: " + field);
    if (symmetry != "symmetric" && symmetry != "general")
        throw ValidationError("unsupported MatrixMarket symmetry: " + symmetry);
    long rows = -1, cols = -1, nnz = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> nnz)) throw ValidationError("malformed MatrixMarket size line");
        break;
    }
    if (rows < 0) throw ValidationError("missing MatrixMarket size line");
    if (rows != cols) throw ValidationError("pattern must be square");
    std::set<std::pair<int, int>> entries;
    long seen = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        long i = 0, j = 0;
        double value = 0.0;
        if (!(ls >> i >> j)) throw ValidationError("malformed MatrixMarket entry");
        if (field != "pattern") ls >> value; // value ignored for the pattern
        if (i < 1 || j < 1 || i > rows || j > cols) throw ValidationError("MatrixMarket index out of range");
        ++seen;
        if (i != j) entries.insert({static_cast<int>(i - 1), static_cast<int>(j - 1)});
    }
    if (seen != nnz) throw ValidationError("MatrixMarket entry count mismatch");
    if (symmetry == "general") {
        for (const auto& [i, j] : entries)
            if (!entries.count({j, i})) throw ValidationError("asymmetric pattern in a general MatrixMarket file");
    }
    std::vector<std::pair<int, int>> pairs(entries.begin(), entries.end());
    return pattern_from_offdiag(static_cast<int>(rows), std::move(pairs));
}

// ---------------------------------------------------------------------------

struct FactorStats {
    std::int64_t nnz_factor = 0; // below-diagonal nonzeros of L
    std::int64_t fill_in = 0;    // nnz_factor minus below-diagonal input nonzeros
    double op_count = 0.0;       // sum_j c_j*(c_j+3)/2
};

// Column-merge symbolic factorization: struct(L_j) is the below-diagonal
// pattern of column j of the permuted matrix united with the structures of
// its elimination-tree children (minus their pivots). See Davis, "Direct
// Methods for Sparse Linear Systems".
inline FactorStats symbolic_factor(const SparsityPattern& pat, const Permutation& p) {
    const int n = pat.n;
    if (static_cast<int>(p.perm.size()) != n) throw ValidationError("permutation size does not match pattern");
    // permuted adjacency
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int old_i = 0; old_i < n; ++old_i) {
        const int i = p.perm[static_cast<std::size_t>(old_i)];
        for (std::size_t k = pat.ptr[static_cast<std::size_t>(old_i)]; k < pat.ptr[static_cast<std::size_t>(old_i) + 1];
             ++k) {
            const int j = p.perm[static_cast<std::size_t>(pat.idx[k])];
            if (j > i) adj[static_cast<std::size_t>(i)].push_back(j);
        }
    }

    std::vector<std::vector<int>> col_struct(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    std::vector<int> mark(static_cast<std::size_t>(n), -1);
    FactorStats stats;
    std::int64_t input_below = 0;
    for (int j = 0; j < n; ++j) {
        auto& s = col_struct[static_cast<std::size_t>(j)];
        mark[static_cast<std::size_t>(j)] = j;
        for (int i : adj[static_cast<std::size_t>(j)]) {
            ++input_below;
            if (mark[static_cast<std::size_t>(i)] != j) {
                mark[static_cast<std::size_t>(i)] = j;
                s.push_back(i);
            }
        }
        for (int c : children[static_cast<std::size_t>(j)]) {
            for (int i : col_struct[static_cast<std::size_t>(c)]) {
                if (i == j) continue;
                if (mark[static_cast<std::size_t>(i)] != j) {
                    mark[static_cast<std::size_t>(i)] = j;
                    s.push_back(i);
                }
            }
        }
        if (!s.empty()) {
            const int parent = *std::min_element(s.begin(), s.end());
            children[static_cast<std::size_t>(parent)].push_back(j);
        }
        const auto c_j = static_cast<std::int64_t>(s.size());
        stats.nnz_factor += c_j;
        stats.op_count += 0.5 * static_cast<double>(c_j) * static_cast<double>(c_j + 3);
    }
    stats.fill_in = stats.nnz_factor - input_below;
    return stats;
}

// ---------------------------------------------------------------------------
// Vertex separator via greedy cut-edge cover: repeatedly take the vertex
// covering the most uncovered cut edges (ties: smaller weight, then index).

inline std::vector<int> extract_separator(const WeightedGraph& g, const Assignment& a) {
    std::vector<std::pair<int, int>> cut_edges;
    for (const auto& e : g.edges())
        if (a.bits[static_cast<std::size_t>(e.u)] != a.bits[static_cast<std::size_t>(e.v)])
            cut_edges.emplace_back(e.u, e.v);
    std::vector<std::uint8_t> covered(cut_edges.size(), 0);
    std::vector<int> count(static_cast<std::size_t>(g.n_vertices()), 0);
    for (const auto& [u, v] : cut_edges) {
        ++count[static_cast<std::size_t>(u)];
        ++count[static_cast<std::size_t>(v)];
    }
    std::vector<int> separator;
    std::size_t remaining = cut_edges.size();
    while (remaining > 0) {
        int best = -1;
        for (int v = 0; v < g.n_vertices(); ++v) {
            if (count[static_cast<std::size_t>(v)] == 0) continue;
            if (best < 0 || count[static_cast<std::size_t>(v)] > count[static_cast<std::size_t>(best)] ||
                (count[static_cast<std::size_t>(v)] == count[static_cast<std::size_t>(best)] &&
                 (g.vertex_weight(v) < g.vertex_weight(best) ||
                  (g.vertex_weight(v) == g.vertex_weight(best) && v < best))))
                best = v;
        }
        separator.push_back(best);
        for (std::size_t e = 0; e < cut_edges.size(); ++e) {
            if (covered[e]) continue;
            const auto& [u, v] = cut_edges[e];
            if (u == best || v == best) {
                covered[e] = 1;
                --count[static_cast<std::size_t>(u)];
                --count[static_cast<std::size_t>(v)];
                --remaining;
            }
        }
        count[static_cast<std::size_t>(best)] = 0;
    }
    std::sort(separator.begin(), separator.end());
    return separator;
}

// ---------------------------------------------------------------------------

struct DissectionConfig {
    int levels = 4;
    std::vector<int> quantum_levels = {1}; // empty = classical everywhere
    int min_block = 32;
    int k = 16; // coarse target size / qubit budget
    int d = 0;  // spectral dimension; 0 = min(6, k-1, n-1)
    int n_screen = 8;
    int n_trials = 100;
    double nu = 0.05;
    double lambda = 1.0;
    IterationConfig qaoa; // delta must be set when quantum levels are enabled
    std::uint64_t seed = 0;
};

namespace detail {

// Reverse BFS from a pseudo-peripheral vertex; components are traversed from
// their lowest-index vertex upward.
inline std::vector<int> fallback_order(const WeightedGraph& g) {
    const int n = g.n_vertices();
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<int> queue;
    auto bfs = [&](int root, std::vector<int>* out) {
        int last = root;
        int depth = 0;
        queue.clear();
        queue.push_back(root);
        dist[static_cast<std::size_t>(root)] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int u = queue[head];
            if (out) out->push_back(u);
            for (const auto& nb : g.neighbors(u)) {
                if (dist[static_cast<std::size_t>(nb.v)] != -1) continue;
                dist[static_cast<std::size_t>(nb.v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(nb.v);
                if (dist[static_cast<std::size_t>(nb.v)] > depth ||
                    (dist[static_cast<std::size_t>(nb.v)] == depth && nb.v < last)) {
                    depth = dist[static_cast<std::size_t>(nb.v)];
                    last = nb.v;
                }
            }
        }
        for (int u : queue) dist[static_cast<std::size_t>(u)] = -1;
        return std::make_pair(last, depth);
    };
    std::vector<std::uint8_t> done(static_cast<std::size_t>(n), 0);
    for (int s = 0; s < n; ++s) {
        if (done[static_cast<std::size_t>(s)]) continue;
        // pseudo-peripheral search: chase eccentricity from the first vertex
        auto [far, depth] = bfs(s, nullptr);
        for (int hop = 0; hop < 4; ++hop) {
            auto [far2, depth2] = bfs(far, nullptr);
            if (depth2 <= depth) break;
            depth = depth2;
            far = far2;
        }
        std::vector<int> comp_order;
        bfs(far, &comp_order);
        for (int u : comp_order) {
            done[static_cast<std::size_t>(u)] = 1;
            dist[static_cast<std::size_t>(u)] = 0; // keep visited across components
            order.push_back(u);
        }
    }
    std::reverse(order.begin(), order.end());
    return order;
}

inline std::optional<Assignment> classical_partition(const WeightedGraph& g, const DissectionConfig& cfg,
                                                     std::uint64_t seed) {
    const FmConfig fm_cfg{cfg.nu, 10, false};
    const double omega = g.total_vertex_weight();
    if (g.n_vertices() > cfg.k) {
        const int d = cfg.d > 0 ? cfg.d : default_embedding_dim(cfg.k, g.n_vertices());
        const ScreenResult sr =
            screen_coarsenings(g, cfg.k, d, cfg.n_screen, cfg.n_trials, cfg.nu, seed);
        if (sr.best_coarse_bits.empty()) return std::nullopt;
        CoarseMap cm = sr.map;
        return fm_refine(g, lift(sr.best_coarse_bits, cm), fm_cfg);
    }
    // small block: refined random balanced starts, best feasible first
    Rng root(seed);
    std::optional<Assignment> best;
    bool best_feas = false;
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
        Rng trial_rng = root.stream("fm.shuffle", static_cast<std::uint64_t>(trial));
        Assignment a = fm_refine(g, random_balanced_bits(g.n_vertices(), trial_rng), fm_cfg);
        const bool feas = within_balance(a, omega, cfg.nu);
        bool better = false;
        if (!best)
            better = true;
        else if (feas != best_feas)
            better = feas;
        else
            better = a.cut < best->cut;
        if (better) {
            best = std::move(a);
            best_feas = feas;
        }
    }
    return best;
}

inline std::optional<Assignment> quantum_partition(const WeightedGraph& g, const DissectionConfig& cfg,
                                                   std::uint64_t seed) {
    const FmConfig fm_cfg{cfg.nu, 10, false};
    IterationConfig qcfg = cfg.qaoa;
    qcfg.seed = seed;
    auto solve = [&](const WeightedGraph& target) -> std::optional<std::vector<std::uint8_t>> {
        const GppObjective obj = make_objective(normalize_weights(target), cfg.lambda, cfg.nu);
        const IterativeResult res = run_iterative_qaoa(obj, qcfg);
        if (res.pool.entries.empty()) return std::nullopt;
        const PoolEntry* pick = best_feasible(res.pool, obj);
        const std::string& bits = pick ? pick->bits : res.pool.best().bits;
        return bitstring_to_bits(bits);
    };
    if (g.n_vertices() > cfg.k) {
        const int d = cfg.d > 0 ? cfg.d : default_embedding_dim(cfg.k, g.n_vertices());
        const ScreenResult sr = screen_coarsenings(g, cfg.k, d, cfg.n_screen, cfg.n_trials, cfg.nu, seed);
        const auto coarse_bits = solve(sr.map.coarse);
        if (!coarse_bits) return std::nullopt;
        return fm_refine(g, lift(*coarse_bits, sr.map), fm_cfg);
    }
    const auto bits = solve(g);
    if (!bits) return std::nullopt;
    return fm_refine(g, *bits, fm_cfg);
}

inline void dissect(const WeightedGraph& g, const std::vector<int>& to_global, int level,
                    const DissectionConfig& cfg, const Rng& root, int& node_counter,
                    std::vector<int>& order_out) {
    const int node_id = node_counter++;
    const int n = g.n_vertices();
    auto fallback = [&] {
        for (int v : fallback_order(g)) order_out.push_back(to_global[static_cast<std::size_t>(v)]);
    };
    if (n <= cfg.min_block || level > cfg.levels) {
        fallback();
        return;
    }
    const bool quantum =
        std::find(cfg.quantum_levels.begin(), cfg.quantum_levels.end(), level) != cfg.quantum_levels.end();
    const std::uint64_t seed = root.stream("nd.node", static_cast<std::uint64_t>(node_id)).seed();
    std::optional<Assignment> part;
    if (quantum) {
        part = quantum_partition(g, cfg, seed);
        if (!part || !within_balance(*part, g.total_vertex_weight(), cfg.nu))
            part = classical_partition(g, cfg, seed); // quantum failed or stayed imbalanced
    } else {
        part = classical_partition(g, cfg, seed);
    }
    bool degenerate = !part.has_value();
    if (part) {
        const bool all_same =
            std::all_of(part->bits.begin(), part->bits.end(), [&](std::uint8_t b) { return b == part->bits[0]; });
        degenerate = all_same;
    }
    if (degenerate) {
        fallback();
        return;
    }
    const std::vector<int> separator = extract_separator(g, *part);
    std::vector<std::uint8_t> in_sep(static_cast<std::size_t>(n), 0);
    for (int v : separator) in_sep[static_cast<std::size_t>(v)] = 1;
    std::vector<int> left, right;
    for (int v = 0; v < n; ++v) {
        if (in_sep[static_cast<std::size_t>(v)]) continue;
        (part->bits[static_cast<std::size_t>(v)] ? right : left).push_back(v);
    }
    for (const auto* side : {&left, &right}) {
        if (side->empty()) continue;
        const Subgraph sub = induced_subgraph(g, *side);
        std::vector<int> sub_to_global(sub.new_to_old.size());
        for (std::size_t i = 0; i < sub.new_to_old.size(); ++i)
            sub_to_global[i] = to_global[static_cast<std::size_t>(sub.new_to_old[i])];
        dissect(sub.graph, sub_to_global, level + 1, cfg, root, node_counter, order_out);
    }
    for (int v : separator) order_out.push_back(to_global[static_cast<std::size_t>(v)]);
}

} // namespace detail

inline Permutation nested_dissection(const WeightedGraph& g, const DissectionConfig& cfg) {
    if (cfg.levels < 1) throw ValidationError("dissection levels must be >= 1");
    if (cfg.min_block < 1) throw ValidationError("min_block must be >= 1");
    for (int lvl : cfg.quantum_levels)
        if (lvl < 1) throw ValidationError("quantum levels are 1-based");
    std::vector<int> to_global(static_cast<std::size_t>(g.n_vertices()));
    for (int v = 0; v < g.n_vertices(); ++v) to_global[static_cast<std::size_t>(v)] = v;
    std::vector<int> order;
    order.reserve(to_global.size());
    int node_counter = 0;
    const Rng root(cfg.seed);
    detail::dissect(g, to_global, 1, cfg, root, node_counter, order);
    std::vector<int> perm(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) perm[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
    return make_permutation(std::move(perm));
}

// ---------------------------------------------------------------------------

struct MeritEntry {
    std::string name;
    FactorStats stats;
    double ratio_fill = 1.0;
    double ratio_ops = 1.0;
};

struct MeritReport {
    std::string baseline;
    std::vector<MeritEntry> entries;
};

inline MeritReport merit_report(const SparsityPattern& pattern,
                                const std::vector<std::pair<std::string, Permutation>>& orderings,
                                const std::string& baseline) {
    std::set<std::string> names;
    for (const auto& [name, p] : orderings)
        if (!names.insert(name).second) throw ValidationError("duplicate ordering name: " + name);
    if (!names.count(baseline)) throw ValidationError("baseline ordering not present: " + baseline);
    MeritReport report;
    report.baseline = baseline;
    FactorStats base;
    for (const auto& [name, p] : orderings)
        if (name == baseline) base = symbolic_factor(pattern, p);
    auto ratio = [](double a, double b) {
        if (b == 0.0) return a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return a / b;
    };
    for (const auto& [name, p] : orderings) {
        MeritEntry e;
        e.name = name;
        e.stats = name == baseline ? base : symbolic_factor(pattern, p);
        e.ratio_fill = ratio(static_cast<double>(e.stats.fill_in), static_cast<double>(base.fill_in));
        e.ratio_ops = ratio(e.stats.op_count, base.op_count);
        report.entries.push_back(std::move(e));
    }
    return report;
}

inline MeritReport merit_report(const WeightedGraph& g,
                                const std::vector<std::pair<std::string, Permutation>>& orderings,
                                const std::string& baseline) {
    return merit_report(graph_to_pattern(g), orderings, baseline);
}

inline void to_json(nlohmann::ordered_json& j, const MeritEntry& e) {
    j = nlohmann::ordered_json{{"ordering_name", e.name},
                               {"nnz_factor", e.stats.nnz_factor},
                               {"fill_in", e.stats.fill_in},
                               {"op_count", e.stats.op_count}};
    j["ratio_fill"] = std::isfinite(e.ratio_fill) ? nlohmann::ordered_json(e.ratio_fill) : nlohmann::ordered_json(nullptr);
    j["ratio_ops"] = std::isfinite(e.ratio_ops) ? nlohmann::ordered_json(e.ratio_ops) : nlohmann::ordered_json(nullptr);
}

inline void to_json(nlohmann::ordered_json& j, const MeritReport& r) {
    j = nlohmann::ordered_json{{"baseline", r.baseline}, {"orderings", nlohmann::ordered_json::array()}};
    for (const auto& e : r.entries) {
        nlohmann::ordered_json je;
        to_json(je, e);
        je["baseline"] = r.baseline;
        j["orderings"].push_back(je);
    }
}

inline MeritReport merit_report_from_json(const nlohmann::ordered_json& j) {
    MeritReport r;
    r.baseline = j.at("baseline").get<std::string>();
    for (const auto& je : j.at("orderings")) {
        MeritEntry e;
        e.name = je.at("ordering_name").get<std::string>();
        e.stats.nnz_factor = je.at("nnz_factor").get<std::int64_t>();
        e.stats.fill_in = je.at("fill_in").get<std::int64_t>();
        e.stats.op_count = je.at("op_count").get<double>();
        e.ratio_fill = je.at("ratio_fill").is_null() ? std::numeric_limits<double>::infinity()
                                                     : je.at("ratio_fill").get<double>();
        e.ratio_ops = je.at("ratio_ops").is_null() ? std::numeric_limits<double>::infinity()
                                                   : je.at("ratio_ops").get<double>();
        r.entries.push_back(std::move(e));
    }
    return r;
}

} // namespace qpart
