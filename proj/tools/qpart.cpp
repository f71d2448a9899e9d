// qpart - command-line driver for the partition/order/sweep/oracle pipelines
//
// Exit codes: 0 success, 1 input/validation error, 2 resource-cap error,
// 3 internal invariant violation. Failures print a one-line JSON object to
// stderr. All stochastic commands require --seed; primary outputs are
// byte-identical across runs for a fixed seed.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qpart/qpart.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qpart::ValidationError("cannot open output file: " + path);
    out << content;
}

void write_report(const std::string& path, const json& j) {
    if (path.empty()) return;
    write_file(path, j.dump(2) + "\n");
}

qpart::DeltaPresets load_presets(const std::string& path) {
    if (path.empty()) return qpart::builtin_delta_presets();
    std::ifstream in(path);
    if (!in) throw qpart::ValidationError("cannot open preset file: " + path);
    json j;
    in >> j;
    qpart::DeltaPresets presets;
    for (const auto& [model, table] : j.items())
        for (const auto& [size, delta] : table.items())
            presets[model][std::stoi(size)] = delta.get<double>();
    return presets;
}

struct CommonOpts {
    std::string graph_path;
    double nu = 0.05;
    double lambda = 1.0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string report_path;
};

// Resolves --delta / --preset <model> against the qubit count actually used.
double resolve_delta(const std::optional<double>& delta, const std::string& preset,
                     const std::string& preset_file, int n_qubits) {
    if (delta) return *delta;
    if (preset.empty())
        throw qpart::ValidationError("either --delta or --preset is required");
    return qpart::preset_delta(load_presets(preset_file), preset, n_qubits);
}

json assignment_json(const qpart::Assignment& a, double omega, double nu) {
    return json{{"cut", a.cut},
                {"part_weights", {a.part_weight[0], a.part_weight[1]}},
                {"imbalance", a.imbalance},
                {"feasible", qpart::within_balance(a, omega, nu)}};
}

json iteration_json(const qpart::IterationRecord& r) {
    return json{{"iteration", r.iteration},
                {"beta_t", r.beta_t},
                {"best_energy", r.best_energy},
                {"pool_size", r.pool_size},
                {"mean_sampled_energy", r.mean_sampled_energy}};
}

// ---------------------------------------------------------------------------

int cmd_partition(const CommonOpts& common, int k, int d, const std::optional<double>& delta,
                  const std::string& preset, const std::string& preset_file, qpart::IterationConfig qcfg,
                  int n_screen, int n_trials, const std::string& log_path, const std::string& coarse_map_path,
                  const std::string& coarse_graph_path) {
    const qpart::WeightedGraph g = qpart::load_metis_graph(common.graph_path);
    if (k < 2) throw qpart::ValidationError("--k must be >= 2");
    if (k > qcfg.qubit_cap)
        throw qpart::ResourceError("k = " + std::to_string(k) + " exceeds the statevector cap of " +
                                   std::to_string(qcfg.qubit_cap) + " qubits");
    const int k_eff = std::min(k, g.n_vertices());
    qcfg.delta = resolve_delta(delta, preset, preset_file, k_eff);
    qcfg.seed = common.seed;

    json report;
    report["version"] = qpart::kVersion;
    report["command"] = "partition";
    report["config"] = json{{"graph", common.graph_path}, {"k", k},
                            {"d", d},                     {"nu", common.nu},
                            {"lambda", common.lambda},    {"delta", qcfg.delta},
                            {"p", qcfg.p},                {"shots", qcfg.shots},
                            {"n_iter", qcfg.n_iter},      {"top_k", qcfg.top_k},
                            {"eta", qcfg.eta},            {"c_factor", qcfg.c_factor},
                            {"fm_on_samples", qcfg.fm_on_samples}, {"n_screen", n_screen},
                            {"n_trials", n_trials},       {"qubit_cap", qcfg.qubit_cap},
                            {"seed", common.seed},        {"ranking", "pool"}};
    report["graph"] = json{{"n", g.n_vertices()}, {"edges", g.n_edges()}, {"total_vertex_weight", g.total_vertex_weight()}};

    const qpart::Rng root(common.seed);
    qpart::CoarseMap cm;
    bool coarsened = false;
    if (g.n_vertices() > k_eff) {
        const int d_eff = d > 0 ? d : qpart::default_embedding_dim(k_eff, g.n_vertices());
        const qpart::ScreenResult sr = qpart::screen_coarsenings(
            g, k_eff, d_eff, n_screen, n_trials, common.nu, root.stream("partition.screen").seed());
        cm = sr.map;
        coarsened = true;
        report["coarse"] = json{{"k", cm.coarse.n_vertices()},
                                {"proxy_cost", sr.proxy_cost},
                                {"feasible", sr.feasible},
                                {"round", sr.round}};
    } else {
        std::vector<int> identity(static_cast<std::size_t>(g.n_vertices()));
        for (int v = 0; v < g.n_vertices(); ++v) identity[static_cast<std::size_t>(v)] = v;
        cm = qpart::contract(g, identity);
        report["coarse"] = nullptr;
    }

    if (!coarse_map_path.empty()) {
        std::ostringstream out;
        qpart::write_coarse_map(cm, out);
        write_file(coarse_map_path, out.str());
    }
    if (!coarse_graph_path.empty()) write_file(coarse_graph_path, qpart::metis_string(cm.coarse));

    const qpart::GppObjective obj =
        qpart::make_objective(qpart::normalize_weights(cm.coarse), common.lambda, common.nu);
    const qpart::IterativeResult res = qpart::run_iterative_qaoa(obj, qcfg);

    json iterations = json::array();
    for (const auto& r : res.log) iterations.push_back(iteration_json(r));
    report["iterations"] = iterations;
    if (!log_path.empty()) {
        std::string lines;
        for (const auto& r : res.log) lines += iteration_json(r).dump() + "\n";
        write_file(log_path, lines);
    }

    const qpart::PoolEntry* pick = qpart::best_feasible(res.pool, obj);
    const qpart::PoolEntry& chosen = pick ? *pick : res.pool.best();
    report["pool"] = json{{"size", res.pool.entries.size()},
                          {"best_energy", res.pool.best().energy},
                          {"best_bits", res.pool.best().bits},
                          {"selected_bits", chosen.bits},
                          {"selected_feasible", pick != nullptr}};

    const std::vector<std::uint8_t> fine = qpart::lift(qpart::bitstring_to_bits(chosen.bits), cm);
    const qpart::Assignment refined = qpart::fm_refine(g, fine, qpart::FmConfig{common.nu, 10, false});
    report["result"] = assignment_json(refined, g.total_vertex_weight(), common.nu);
    report["result"]["coarsened"] = coarsened;

    if (!common.out_path.empty()) {
        std::ostringstream out;
        qpart::write_partition(refined.bits, out);
        write_file(common.out_path, out.str());
    }
    write_report(common.report_path, report);
    std::cout << report["result"].dump() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_order(const CommonOpts& common, int k, int d, const std::optional<double>& delta,
              const std::string& preset, const std::string& preset_file, qpart::IterationConfig qcfg,
              int levels, std::vector<int> quantum_levels, int min_block, int n_screen, int n_trials) {
    const qpart::WeightedGraph g = qpart::load_metis_graph(common.graph_path);
    if (levels < 1) throw qpart::ValidationError("--levels must be >= 1");
    if (k < 2) throw qpart::ValidationError("--k must be >= 2");
    if (k > qcfg.qubit_cap)
        throw qpart::ResourceError("k = " + std::to_string(k) + " exceeds the statevector cap of " +
                                   std::to_string(qcfg.qubit_cap) + " qubits");
    const int k_eff = std::min(k, g.n_vertices());
    qcfg.delta = resolve_delta(delta, preset, preset_file, k_eff);

    qpart::DissectionConfig dc;
    dc.levels = levels;
    dc.min_block = min_block;
    dc.k = k;
    dc.d = d;
    dc.n_screen = n_screen;
    dc.n_trials = n_trials;
    dc.nu = common.nu;
    dc.lambda = common.lambda;
    dc.qaoa = qcfg;
    dc.seed = common.seed;

    dc.quantum_levels = quantum_levels;
    const qpart::Permutation quantum_perm = qpart::nested_dissection(g, dc);
    dc.quantum_levels.clear();
    const qpart::Permutation classical_perm = qpart::nested_dissection(g, dc);
    const qpart::Permutation identity = qpart::identity_permutation(g.n_vertices());

    const qpart::MeritReport merit = qpart::merit_report(
        g, {{"identity", identity}, {"nd_classical", classical_perm}, {"nd_quantum", quantum_perm}}, "identity");

    json report;
    report["version"] = qpart::kVersion;
    report["command"] = "order";
    report["config"] = json{{"graph", common.graph_path}, {"levels", levels},
                            {"quantum_levels", quantum_levels}, {"min_block", min_block},
                            {"k", k},                     {"d", d},
                            {"nu", common.nu},            {"lambda", common.lambda},
                            {"delta", qcfg.delta},        {"p", qcfg.p},
                            {"shots", qcfg.shots},        {"n_iter", qcfg.n_iter},
                            {"top_k", qcfg.top_k},        {"eta", qcfg.eta},
                            {"c_factor", qcfg.c_factor},  {"n_screen", n_screen},
                            {"n_trials", n_trials},       {"qubit_cap", qcfg.qubit_cap},
                            {"seed", common.seed}};
    json jm;
    qpart::to_json(jm, merit);
    report["merit"] = jm;
    // direct quantum-vs-classical comparison alongside the baseline ratios
    const auto& entries = merit.entries;
    double qfill = 0.0, cfill = 0.0, qops = 0.0, cops = 0.0;
    for (const auto& e : entries) {
        if (e.name == "nd_quantum") { qfill = static_cast<double>(e.stats.fill_in); qops = e.stats.op_count; }
        if (e.name == "nd_classical") { cfill = static_cast<double>(e.stats.fill_in); cops = e.stats.op_count; }
    }
    report["comparison"] = json{{"fill_quantum_over_classical", cfill > 0.0 ? json(qfill / cfill) : json(nullptr)},
                                {"ops_quantum_over_classical", cops > 0.0 ? json(qops / cops) : json(nullptr)}};

    if (!common.out_path.empty()) {
        std::ostringstream out;
        qpart::write_permutation(quantum_levels.empty() ? classical_perm : quantum_perm, out);
        write_file(common.out_path, out.str());
    }
    write_report(common.report_path, report);
    std::cout << report["merit"].dump() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const CommonOpts& common, int k, int d, const std::string& deltas_spec,
              const std::string& depths_spec, int shots, int n_screen, int n_trials, int qubit_cap) {
    const qpart::WeightedGraph g = qpart::load_metis_graph(common.graph_path);

    std::vector<double> deltas;
    if (deltas_spec.empty()) {
        deltas = qpart::default_delta_grid();
    } else {
        // "start:stop:step"
        double start = 0.0, stop = 0.0, step = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(deltas_spec);
        if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw qpart::ValidationError("--deltas expects start:stop:step");
        for (int i = 0;; ++i) {
            const double x = qpart::snap_grid_value(start + i * step);
            if (x > stop + 1e-12) break;
            deltas.push_back(x);
        }
    }
    std::vector<int> depths;
    if (depths_spec.empty()) {
        depths = qpart::default_depth_grid();
    } else {
        std::istringstream ss(depths_spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) depths.push_back(std::stoi(tok));
    }

    qpart::WeightedGraph target = g;
    bool coarsened = false;
    if (k > 0 && g.n_vertices() > k) {
        const int d_eff = d > 0 ? d : qpart::default_embedding_dim(k, g.n_vertices());
        const qpart::Rng root(common.seed);
        target = qpart::screen_coarsenings(g, k, d_eff, n_screen, n_trials, common.nu,
                                           root.stream("sweep.screen").seed())
                     .map.coarse;
        coarsened = true;
    }
    const qpart::GppObjective obj =
        qpart::make_objective(qpart::normalize_weights(target), common.lambda, common.nu);
    const qpart::SweepResult res = qpart::sweep_delta(obj, deltas, depths, shots, common.seed, qubit_cap);

    std::ostringstream csv;
    csv << "# qpart sweep v" << qpart::kVersion << " n_qubits=" << target.n_vertices() << " shots=" << shots
        << " seed=" << common.seed << "\n";
    csv << "# deltas=";
    for (std::size_t i = 0; i < deltas.size(); ++i) csv << (i ? ";" : "") << fmt_double(deltas[i]);
    csv << " depths=";
    for (std::size_t i = 0; i < depths.size(); ++i) csv << (i ? ";" : "") << depths[i];
    csv << "\ndelta,p,expectation,normalized\n";
    for (const auto& pt : res.grid)
        csv << fmt_double(pt.delta) << ',' << pt.p << ',' << fmt_double(pt.expectation) << ','
            << fmt_double(res.normalized(pt)) << '\n';
    if (!common.out_path.empty()) write_file(common.out_path, csv.str());

    json report;
    report["version"] = qpart::kVersion;
    report["command"] = "sweep";
    report["config"] = json{{"graph", common.graph_path}, {"k", k},      {"d", d},
                            {"nu", common.nu},            {"lambda", common.lambda},
                            {"shots", shots},             {"seed", common.seed},
                            {"coarsened", coarsened},     {"n_qubits", target.n_vertices()}};
    json best_per_p = json::object();
    for (const auto& [p, pt] : res.best_per_p)
        best_per_p[std::to_string(p)] = json{{"delta", pt.delta}, {"expectation", pt.expectation}};
    const qpart::SweepPoint gb = res.global_best();
    report["best_per_p"] = best_per_p;
    report["best"] = json{{"delta", gb.delta}, {"p", gb.p}, {"expectation", gb.expectation}};
    report["max_expectation"] = res.max_expectation;
    write_report(common.report_path, report);
    std::cout << report["best"].dump() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

// Standalone coarsening benchmark: screen clusterings and report the best
// map with its proxy cut. Defaults to a heavier probe budget than the
// in-pipeline screening.
int cmd_screen(const CommonOpts& common, int k, int d, int n_screen, int n_trials,
               const std::string& coarse_map_path) {
    const qpart::WeightedGraph g = qpart::load_metis_graph(common.graph_path);
    if (k < 2) throw qpart::ValidationError("--k must be >= 2");
    const int k_eff = std::min(k, g.n_vertices());
    const int d_eff = d > 0 ? d : qpart::default_embedding_dim(k_eff, g.n_vertices());
    const qpart::ScreenResult sr =
        qpart::screen_coarsenings(g, k_eff, d_eff, n_screen, n_trials, common.nu, common.seed);

    json report;
    report["version"] = qpart::kVersion;
    report["command"] = "screen";
    report["config"] = json{{"graph", common.graph_path}, {"k", k},           {"d", d_eff},
                            {"nu", common.nu},            {"n_screen", n_screen}, {"n_trials", n_trials},
                            {"seed", common.seed}};
    report["graph"] = json{{"n", g.n_vertices()}, {"edges", g.n_edges()}, {"total_vertex_weight", g.total_vertex_weight()}};
    report["result"] = json{{"k", sr.map.coarse.n_vertices()},
                            {"coarse_edges", sr.map.coarse.n_edges()},
                            {"proxy_cost", sr.proxy_cost},
                            {"feasible", sr.feasible},
                            {"round", sr.round}};
    if (!common.out_path.empty()) write_file(common.out_path, qpart::metis_string(sr.map.coarse));
    if (!coarse_map_path.empty()) {
        std::ostringstream out;
        qpart::write_coarse_map(sr.map, out);
        write_file(coarse_map_path, out.str());
    }
    write_report(common.report_path, report);
    std::cout << report["result"].dump() << "\n";
    return 0;
}

int cmd_oracle(const CommonOpts& common, const std::string& matrix_path, const std::string& perm_path) {
    if (common.graph_path.empty() && matrix_path.empty())
        throw qpart::ValidationError("oracle needs --graph and/or --matrix");
    json report;
    report["version"] = qpart::kVersion;
    report["command"] = "oracle";
    if (!common.graph_path.empty()) {
        const qpart::WeightedGraph g = qpart::load_metis_graph(common.graph_path);
        const qpart::GppObjective obj = qpart::make_objective(g, common.lambda, common.nu);
        const qpart::BruteForceResult bf = qpart::brute_force_gpp(obj);
        json jg;
        jg["nu"] = common.nu;
        jg["lambda"] = common.lambda;
        jg["feasible_found"] = bf.feasible_found;
        if (bf.feasible_found) {
            jg["best_bits"] = qpart::to_bitstring(bf.best_mask, g.n_vertices());
            jg["best"] = assignment_json(bf.best, g.total_vertex_weight(), common.nu);
        }
        jg["unconstrained_min"] = bf.unconstrained_min;
        jg["unconstrained_bits"] = qpart::to_bitstring(bf.unconstrained_mask, g.n_vertices());
        report["gpp"] = jg;
    }
    if (!matrix_path.empty()) {
        std::ifstream in(matrix_path);
        if (!in) throw qpart::ValidationError("cannot open matrix file: " + matrix_path);
        const qpart::SparsityPattern pat = qpart::pattern_from_matrix_market(in);
        qpart::Permutation perm = qpart::identity_permutation(pat.n);
        if (!perm_path.empty()) {
            std::ifstream pin(perm_path);
            if (!pin) throw qpart::ValidationError("cannot open permutation file: " + perm_path);
            perm = qpart::read_permutation(pin);
        }
        const qpart::FactorStats naive = qpart::brute_force_eliminate(pat, perm);
        const qpart::FactorStats symbolic = qpart::symbolic_factor(pat, perm);
        report["elimination"] = json{{"n", pat.n},
                                     {"permutation", perm_path.empty() ? "identity" : perm_path},
                                     {"nnz_factor", naive.nnz_factor},
                                     {"fill_in", naive.fill_in},
                                     {"op_count", naive.op_count},
                                     {"matches_symbolic", naive.nnz_factor == symbolic.nnz_factor &&
                                                              naive.fill_in == symbolic.fill_in &&
                                                              naive.op_count == symbolic.op_count}};
    }
    write_report(common.report_path, report);
    std::cout << report.dump() << "\n";
    return 0;
}

void emit_error(int code, const std::string& type, const std::string& message) {
    json j{{"error", {{"code", code}, {"type", type}, {"message", message}}}};
    std::cerr << j.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid quantum-classical graph partitioning and fill-reducing ordering"};
    app.set_version_flag("--version", std::string("qpart ") + qpart::kVersion);
    app.set_config("--config", "", "configuration file (INI format, one [subcommand] section per command)");
    app.require_subcommand(1);

    CommonOpts common;
    int k = 16, d = 0, levels = 4, min_block = 32, n_screen = 8, n_trials = 100;
    std::optional<double> delta;
    std::string preset, preset_file, log_path, matrix_path, perm_path;
    std::string coarse_map_path, coarse_graph_path;
    std::string deltas_spec, depths_spec;
    std::string quantum_levels_spec = "1";
    qpart::IterationConfig qcfg;
    int sweep_shots = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_graph) {
        cmd->add_option("--graph", common.graph_path, "input graph (METIS format)")->required(needs_graph);
        cmd->add_option("--nu", common.nu, "balance tolerance")->check(CLI::Range(0.0, 0.499999));
        cmd->add_option("--lambda", common.lambda, "balance penalty coefficient")->check(CLI::NonNegativeNumber);
        cmd->add_option("--out", common.out_path, "primary output file");
        cmd->add_option("--report", common.report_path, "JSON report file");
    };
    auto add_qaoa = [&](CLI::App* cmd) {
        cmd->add_option("--delta", delta, "linear-ramp scalar");
        cmd->add_option("--preset", preset, "model preset for delta (SedanCar, JetEngine, Impeller, Drill)");
        cmd->add_option("--preset-file", preset_file, "override the built-in preset table (JSON)");
        cmd->add_option("--p", qcfg.p, "circuit depth")->check(CLI::PositiveNumber);
        cmd->add_option("--shots", qcfg.shots, "measurement shots per circuit")->check(CLI::PositiveNumber);
        cmd->add_option("--n-iter", qcfg.n_iter, "warm-start iterations")->check(CLI::PositiveNumber);
        cmd->add_option("--top-k", qcfg.top_k, "ranking pool size")->check(CLI::PositiveNumber);
        cmd->add_option("--eta", qcfg.eta, "bias polarity (+1 or -1)")->check(CLI::IsMember({-1, 1}));
        cmd->add_option("--c-factor", qcfg.c_factor, "Hamiltonian term cap = c * n_qubits (0 = keep all)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_flag("!--no-fm-on-samples", qcfg.fm_on_samples, "disable the FM pass on sampled bitstrings");
        cmd->add_flag("--early-stop", qcfg.early_stop, "stop when the ranking set repeats twice");
        cmd->add_option("--qubit-cap", qcfg.qubit_cap, "statevector qubit cap");
    };
    auto add_coarsen = [&](CLI::App* cmd) {
        cmd->add_option("--k", k, "coarse size / qubit budget");
        cmd->add_option("--d", d, "spectral embedding dimension (0 = auto)");
        cmd->add_option("--n-screen", n_screen, "screening rounds")->check(CLI::PositiveNumber);
        cmd->add_option("--n-trials", n_trials, "random balanced starts per round")->check(CLI::PositiveNumber);
    };

    CLI::App* partition = app.add_subcommand("partition", "coarsen, solve, lift, refine one bipartition");
    add_common(partition, true);
    add_qaoa(partition);
    add_coarsen(partition);
    partition->add_option("--seed", common.seed, "run seed")->required();
    partition->add_option("--log", log_path, "per-iteration JSON-lines log");
    partition->add_option("--coarse-map", coarse_map_path, "write the vertex->cluster map");
    partition->add_option("--coarse-graph", coarse_graph_path, "write the coarse graph (METIS format)");

    CLI::App* order = app.add_subcommand("order", "nested-dissection ordering with merit report");
    add_common(order, true);
    add_qaoa(order);
    add_coarsen(order);
    order->add_option("--levels", levels, "dissection levels");
    order->add_option("--quantum-levels", quantum_levels_spec, "comma-separated levels solved by QAOA ('' = none)");
    order->add_option("--min-block", min_block, "fallback ordering below this size")->check(CLI::PositiveNumber);
    order->add_option("--seed", common.seed, "run seed")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "delta/p landscape of the cost expectation");
    add_common(sweep, true);
    add_coarsen(sweep);
    sweep->add_option("--deltas", deltas_spec, "delta grid start:stop:step (default 0.05:2.0:0.05)");
    sweep->add_option("--depths", depths_spec, "comma-separated depths (default 1..6)");
    sweep->add_option("--shots", sweep_shots, "0 = exact expectation")->check(CLI::NonNegativeNumber);
    sweep->add_option("--qubit-cap", qcfg.qubit_cap, "statevector qubit cap");
    sweep->add_option("--seed", common.seed, "run seed")->required();

    CLI::App* screen = app.add_subcommand("screen", "standalone coarsening benchmark (screened clusterings)");
    add_common(screen, true);
    int screen_trials = 1000;
    screen->add_option("--k", k, "coarse size");
    screen->add_option("--d", d, "spectral embedding dimension (0 = auto)");
    screen->add_option("--n-screen", n_screen, "screening rounds")->check(CLI::PositiveNumber);
    screen->add_option("--n-trials", screen_trials, "random balanced starts per round")->check(CLI::PositiveNumber);
    screen->add_option("--coarse-map", coarse_map_path, "write the vertex->cluster map");
    screen->add_option("--seed", common.seed, "run seed")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "exhaustive optimum / naive elimination");
    add_common(oracle, false);
    oracle->add_option("--matrix", matrix_path, "pattern in Matrix Market format");
    oracle->add_option("--perm", perm_path, "permutation file for --matrix");
    oracle->add_option("--seed", common.seed, "accepted for interface symmetry; the oracle is deterministic");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error(1, "validation", e.what());
        return 1;
    }

    try {
        if (partition->parsed())
            return cmd_partition(common, k, d, delta, preset, preset_file, qcfg, n_screen, n_trials, log_path,
                                 coarse_map_path, coarse_graph_path);
        if (order->parsed()) {
            std::vector<int> qlevels;
            std::istringstream ss(quantum_levels_spec);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) qlevels.push_back(std::stoi(tok));
            return cmd_order(common, k, d, delta, preset, preset_file, qcfg, levels, qlevels, min_block, n_screen,
                             n_trials);
        }
        if (sweep->parsed())
            return cmd_sweep(common, sweep->count("--k") ? k : 0, d, deltas_spec, depths_spec, sweep_shots, n_screen,
                             n_trials, qcfg.qubit_cap);
        if (screen->parsed()) return cmd_screen(common, k, d, n_screen, screen_trials, coarse_map_path);
        if (oracle->parsed()) return cmd_oracle(common, matrix_path, perm_path);
        emit_error(1, "validation", "no subcommand given");
        return 1;
    } catch (const qpart::ResourceError& e) {
        emit_error(2, "resource", e.what());
        return 2;
    } catch (const qpart::ValidationError& e) {
        emit_error(1, "validation", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error(3, "internal", e.what());
        return 3;
    }
}
