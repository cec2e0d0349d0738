// hcsl: heteroscedastic causal structure learning toolkit.
//
// Subcommands: generate, order, learn, eval, bench. All randomness flows
// from --seed (or the per-cell seeds in a bench config) through
// derive_seed, so identical invocations give byte-identical artifacts. The
// one exception is the wall_time_seconds column of bench output, which is
// a measurement.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcsl/dag.hpp"
#include "hcsl/dataset.hpp"
#include "hcsl/errors.hpp"
#include "hcsl/graph_gen.hpp"
#include "hcsl/mathutil.hpp"
#include "hcsl/metrics.hpp"
#include "hcsl/ordering.hpp"
#include "hcsl/parallel.hpp"
#include "hcsl/recovery.hpp"
#include "hcsl/serialize.hpp"
#include "hcsl/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hcsl;

namespace {

const std::vector<std::string> kFamilies = {"ER-1", "ER-2", "ER-4",
                                            "SF-1", "SF-2", "SF-4"};

std::string canon_family(std::string f) {
    for (char& c : f) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (f.size() == 3 && f[2] != '-') f = f.substr(0, 2) + "-" + f.substr(2);
    for (const std::string& known : kFamilies)
        if (f == known) return f;
    throw std::invalid_argument("unknown graph family: " + f +
                                " (expected ER-1/ER-2/ER-4/SF-1/SF-2/SF-4)");
}

Dag make_graph(const std::string& family, int d, std::uint64_t seed) {
    const std::string f = canon_family(family);
    const int k = f[3] - '0';
    if (f[0] == 'E') return erdos_renyi(d, static_cast<double>(k), seed);
    return scale_free(d, k, seed);
}

HcmModel make_model(const Dag& g, const std::string& mechanism,
                    std::uint64_t seed) {
    if (mechanism == "linear") return sample_linear_model(g, seed);
    if (mechanism == "nonlinear") return sample_nonlinear_model(g, seed);
    throw std::invalid_argument("unknown mechanism: " + mechanism +
                                " (expected linear|nonlinear)");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir + ": " + ec.message());
}

std::string in_dir(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

// per-command option bundles -------------------------------------------------

struct FitFlags {
    int hidden = 0;
    double lr = 1e-2;
    int iters = 2000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--hidden", hidden,
                        "hidden units per head (0 = linear heads)");
        cmd->add_option("--lr", lr, "optimizer step size");
        cmd->add_option("--iters", iters, "optimizer iteration cap");
    }
    FitConfig fit() const {
        FitConfig f;
        f.hidden = hidden;
        f.lr = lr;
        f.max_iters = iters;
        return f;
    }
};

// subcommands ----------------------------------------------------------------

void cmd_generate(const std::string& family, const std::string& mechanism,
                  int d, std::size_t n, std::uint64_t seed,
                  const std::string& out) {
    const Dag g = make_graph(family, d, derive_seed(seed, {1}));
    const HcmModel m = make_model(g, mechanism, derive_seed(seed, {2}));
    const Dataset ds = generate(m, n, derive_seed(seed, {3}));
    ensure_dir(out);
    const std::string data_path = in_dir(out, "data.csv");
    const std::string model_path = in_dir(out, "model.json");
    const std::string graph_path = in_dir(out, "graph.json");
    write_csv(ds, data_path);
    write_model_json(m, model_path);
    write_dag_json(g, graph_path);
    std::cout << data_path << "\n" << model_path << "\n" << graph_path << "\n";
}

void cmd_order(const std::string& dataset, const std::string& method,
               const OrderConfig& cfg, const std::string& out) {
    const Dataset ds = read_csv(dataset);
    Ordering o;
    if (method == "host")
        o = host_order(ds, cfg);
    else if (method == "varsort")
        o = varsort_order(ds);
    else if (method == "eqvar")
        o = eqvar_order(ds);
    else
        throw std::invalid_argument("unknown method: " + method +
                                    " (expected host|varsort|eqvar)");
    ensure_dir(out);
    const std::string path = in_dir(out, "ordering.json");
    write_ordering_json(o, path);
    std::cout << path << "\n";
}

void cmd_learn(const std::string& dataset, const std::string& truth,
               const OrderConfig& ocfg, const CiConfig& ccfg,
               const std::string& out, bool verbose) {
    const Dataset raw = read_csv(dataset);
    if (raw.n < 50) throw DataError("learn: need at least 50 rows");
    const Dataset ds = standardize(raw);
    OrderDiag diag;
    const Ordering o = host_order(ds, ocfg, &diag);
    const RecoveryResult rec = recover_dag(ds, o.pi, ccfg);
    if (verbose)
        std::cerr << "fits=" << diag.fits << " ci_tests=" << rec.tests << "\n";
    ensure_dir(out);
    const std::string ordering_path = in_dir(out, "ordering.json");
    const std::string graph_path = in_dir(out, "graph.json");
    const std::string pvalues_path = in_dir(out, "pvalues.csv");
    write_ordering_json(o, ordering_path);
    write_dag_json(rec.g, graph_path);
    write_pvalues_csv(rec.pvalues, ds.names, pvalues_path);
    std::cout << ordering_path << "\n" << graph_path << "\n"
              << pvalues_path << "\n";
    if (!truth.empty()) {
        const Dag t = read_dag_json(truth);
        if (t.d != static_cast<int>(ds.d))
            throw DataError("learn: truth graph has d=" + std::to_string(t.d) +
                            " but dataset has d=" + std::to_string(ds.d));
        Scores s;
        s.order_divergence = order_divergence(t, o.pi);
        s.shd = shd(rec.g, t);
        s.f1 = f1(rec.g, t);
        s.auc = auc(t, rec.pvalues);
        const std::string scores_path = in_dir(out, "scores.json");
        write_scores_json(s, scores_path);
        std::cout << scores_path << "\n";
    }
}

void cmd_eval(const std::string& pred_path, const std::string& truth_path,
              const std::string& pi_path, const std::string& pvalues_path,
              const std::string& out) {
    const Dag pred = read_dag_json(pred_path);
    const Dag truth = read_dag_json(truth_path);
    if (pred.d != truth.d)
        throw DataError("eval: graphs have different vertex counts (" +
                        std::to_string(pred.d) + " vs " +
                        std::to_string(truth.d) + ")");
    Scores s;
    s.shd = shd(pred, truth);
    s.f1 = f1(pred, truth);
    if (!pi_path.empty()) {
        const Ordering o = read_ordering_json(pi_path);
        s.order_divergence = order_divergence(truth, o.pi);
    }
    if (!pvalues_path.empty()) {
        const std::vector<double> pv = read_pvalues_csv(pvalues_path);
        if (pv.size() != static_cast<std::size_t>(truth.d) * truth.d)
            throw DataError("eval: p-value matrix does not match graph size");
        s.auc = auc(truth, pv);
    }
    json j;
    if (s.order_divergence.has_value()) j["order_divergence"] = *s.order_divergence;
    j["shd"] = s.shd;
    j["f1"] = s.f1;
    if (s.auc.has_value()) j["auc"] = *s.auc;
    std::cout << j.dump(2) << "\n";
    if (!out.empty()) {
        ensure_dir(out);
        write_scores_json(s, in_dir(out, "scores.json"));
    }
}

// bench ----------------------------------------------------------------------

struct BenchConfig {
    std::string family;
    std::string mechanism;
    std::vector<std::size_t> ns;
    std::vector<int> ds;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> methods;
    OrderConfig order;
    CiConfig ci;
    std::string out = ".";
};

BenchConfig read_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    try {
        BenchConfig c;
        c.family = canon_family(j.at("family").get<std::string>());
        c.mechanism = j.at("mechanism").get<std::string>();
        if (c.mechanism != "linear" && c.mechanism != "nonlinear")
            throw DataError(path + ": mechanism must be linear|nonlinear");
        c.ns = j.at("n").get<std::vector<std::size_t>>();
        c.ds = j.at("d").get<std::vector<int>>();
        c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        c.methods = j.value("methods",
                            std::vector<std::string>{"host", "varsort", "eqvar"});
        if (c.ns.empty() || c.ds.empty() || c.seeds.empty() || c.methods.empty())
            throw DataError(path + ": n, d, seeds, methods must be nonempty");
        for (const std::string& m : c.methods)
            if (m != "host" && m != "varsort" && m != "eqvar")
                throw DataError(path + ": unknown method " + m);
        if (j.contains("order")) {
            const json& o = j.at("order");
            c.order.epsilon = o.value("epsilon", c.order.epsilon);
            c.order.fit.hidden = o.value("hidden", c.order.fit.hidden);
            c.order.fit.lr = o.value("lr", c.order.fit.lr);
            c.order.fit.max_iters = o.value("iters", c.order.fit.max_iters);
        }
        if (j.contains("ci")) {
            const json& o = j.at("ci");
            c.ci.alpha = o.value("alpha", c.ci.alpha);
            c.ci.permutations = o.value("permutations", c.ci.permutations);
            c.ci.fit.hidden = o.value("hidden", c.ci.fit.hidden);
            c.ci.fit.lr = o.value("lr", c.ci.fit.lr);
            c.ci.fit.max_iters = o.value("iters", c.ci.fit.max_iters);
        }
        c.out = j.value("out", c.out);
        return c;
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string sanitize_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

constexpr const char* kBenchHeader =
    "family,mechanism,n,d,seed,method,order_divergence,shd,f1,auc,"
    "wall_time_seconds,error";

// first six comma-separated fields identify a cell
std::string row_key(const std::string& row) {
    std::size_t pos = 0;
    for (int i = 0; i < 6; ++i) {
        pos = row.find(',', pos);
        if (pos == std::string::npos) return {};
        ++pos;
    }
    return row.substr(0, pos - 1);
}

void cmd_bench(const std::string& config_path, int jobs,
               const std::string& out_override, bool verbose) {
    BenchConfig cfg = read_bench_config(config_path);
    if (!out_override.empty()) cfg.out = out_override;
    ensure_dir(cfg.out);
    const std::string results_path = in_dir(cfg.out, "results.csv");

    // previously completed rows, keyed by (family,mechanism,n,d,seed,method)
    std::map<std::string, std::string> existing;
    if (fs::exists(results_path)) {
        std::ifstream in(results_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line == kBenchHeader || line.empty()) continue;
            const std::string key = row_key(line);
            if (!key.empty()) existing[key] = line;
        }
    }

    struct Cell {
        std::size_t n;
        int d;
        std::uint64_t seed;
        std::vector<std::string> rows;  // one per method, in config order
        bool any_missing = false;
    };
    std::vector<Cell> cells;
    for (std::size_t n : cfg.ns)
        for (int d : cfg.ds)
            for (std::uint64_t seed : cfg.seeds) {
                Cell c{n, d, seed, {}, false};
                for (const std::string& method : cfg.methods) {
                    const std::string key = cfg.family + "," + cfg.mechanism +
                                            "," + std::to_string(n) + "," +
                                            std::to_string(d) + "," +
                                            std::to_string(seed) + "," + method;
                    const auto it = existing.find(key);
                    if (it != existing.end()) {
                        c.rows.push_back(it->second);
                    } else {
                        c.rows.push_back({});
                        c.any_missing = true;
                    }
                }
                cells.push_back(std::move(c));
            }

    // cells run in parallel; inner ordering/recovery stay sequential so the
    // thread count is bounded by jobs either way
    parallel_for(cells.size(), jobs, [&](std::size_t ci) {
        Cell& cell = cells[ci];
        if (!cell.any_missing) return;
        const std::string prefix = cfg.family + "," + cfg.mechanism + "," +
                                   std::to_string(cell.n) + "," +
                                   std::to_string(cell.d) + "," +
                                   std::to_string(cell.seed) + ",";
        Dag truth;
        Dataset std_data;
        std::string cell_error;
        try {
            truth = make_graph(cfg.family, cell.d, derive_seed(cell.seed, {1}));
            const HcmModel model =
                make_model(truth, cfg.mechanism, derive_seed(cell.seed, {2}));
            const Dataset ds = generate(model, cell.n, derive_seed(cell.seed, {3}));
            std_data = standardize(ds);
        } catch (const std::exception& e) {
            cell_error = e.what();
        }
        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            if (!cell.rows[mi].empty()) continue;
            const std::string& method = cfg.methods[mi];
            std::string metrics = ",,,,,";
            if (!cell_error.empty()) {
                cell.rows[mi] = prefix + method + metrics + sanitize_field(cell_error);
                continue;
            }
            try {
                const auto t0 = std::chrono::steady_clock::now();
                Ordering o;
                if (method == "host") {
                    OrderConfig oc = cfg.order;
                    oc.seed = derive_seed(cell.seed, {4});
                    oc.jobs = 1;
                    o = host_order(std_data, oc);
                } else if (method == "varsort") {
                    o = varsort_order(std_data);
                } else {
                    o = eqvar_order(std_data);
                }
                CiConfig cc = cfg.ci;
                cc.seed = derive_seed(cell.seed, {5});
                cc.jobs = 1;
                const RecoveryResult rec = recover_dag(std_data, o.pi, cc);
                const auto t1 = std::chrono::steady_clock::now();
                const double secs =
                    std::chrono::duration<double>(t1 - t0).count();
                if (verbose)
                    std::cerr << prefix << method << " ci_tests=" << rec.tests
                              << "\n";
                const int od = order_divergence(truth, o.pi);
                const int dist = shd(rec.g, truth);
                const double f = f1(rec.g, truth);
                const std::optional<double> a = auc(truth, rec.pvalues);
                char secs_buf[32];
                std::snprintf(secs_buf, sizeof secs_buf, "%.3f", secs);
                cell.rows[mi] = prefix + method + "," + std::to_string(od) +
                                "," + std::to_string(dist) + "," +
                                fmt_double(f) + "," +
                                (a.has_value() ? fmt_double(*a) : "") + "," +
                                secs_buf + ",";
            } catch (const std::exception& e) {
                cell.rows[mi] = prefix + method + metrics + sanitize_field(e.what());
            }
        }
    });

    std::ofstream outf(results_path, std::ios::binary);
    if (!outf) throw DataError("cannot open for writing: " + results_path);
    outf << kBenchHeader << "\n";
    for (const Cell& cell : cells)
        for (const std::string& row : cell.rows) outf << row << "\n";
    if (!outf) throw DataError("write failed: " + results_path);
    std::cout << results_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heteroscedastic causal structure learning toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand(
        "generate", "sample a random DAG, a mechanism, and a dataset");
    std::string gen_family = "ER-1", gen_mech = "linear", gen_out = ".";
    int gen_d = 10;
    std::size_t gen_n = 500;
    std::uint64_t gen_seed = 0;
    gen->add_option("--family", gen_family, "ER-1|ER-2|ER-4|SF-1|SF-2|SF-4");
    gen->add_option("--mechanism", gen_mech, "linear|nonlinear");
    gen->add_option("--d", gen_d, "vertex count");
    gen->add_option("--n", gen_n, "sample count");
    gen->add_option("--seed", gen_seed, "base seed");
    gen->add_option("--out", gen_out, "output directory");

    // order
    auto* ord = app.add_subcommand(
        "order", "recover a causal ordering from a dataset");
    std::string ord_data, ord_method = "host", ord_out = ".";
    std::uint64_t ord_seed = 0;
    int ord_jobs = 1;
    double ord_epsilon = 1e-4;
    FitFlags ord_fit;
    ord->add_option("dataset", ord_data, "comma-separated numeric matrix")
        ->required();
    ord->add_option("--method", ord_method, "host|varsort|eqvar");
    ord->add_option("--seed", ord_seed, "base seed");
    ord->add_option("--jobs", ord_jobs, "worker threads");
    ord->add_option("--epsilon", ord_epsilon, "layer width on the W scale");
    ord_fit.attach(ord);
    ord->add_option("--out", ord_out, "output directory");

    // learn
    auto* lrn = app.add_subcommand(
        "learn", "full pipeline: standardize, order, recover a DAG");
    std::string lrn_data, lrn_truth, lrn_out = ".";
    std::uint64_t lrn_seed = 0;
    int lrn_jobs = 1, lrn_permutations = 1000;
    double lrn_epsilon = 1e-4, lrn_alpha = 0.001;
    bool lrn_verbose = false;
    FitFlags lrn_fit;
    lrn->add_option("dataset", lrn_data, "comma-separated numeric matrix")
        ->required();
    lrn->add_option("--truth", lrn_truth, "ground-truth graph for scoring");
    lrn->add_option("--seed", lrn_seed, "base seed");
    lrn->add_option("--jobs", lrn_jobs, "worker threads");
    lrn->add_option("--epsilon", lrn_epsilon, "layer width on the W scale");
    lrn->add_option("--alpha", lrn_alpha, "CI rejection threshold");
    lrn->add_option("--permutations", lrn_permutations,
                    "permutations per CI test");
    lrn_fit.attach(lrn);
    lrn->add_option("--out", lrn_out, "output directory");
    lrn->add_flag("--verbose", lrn_verbose, "report fit and CI test counts");

    // eval
    auto* evl = app.add_subcommand("eval", "score a predicted graph");
    std::string evl_pred, evl_truth, evl_pi, evl_pvalues, evl_out;
    evl->add_option("predicted", evl_pred, "predicted graph file")->required();
    evl->add_option("truth", evl_truth, "ground-truth graph file")->required();
    evl->add_option("--pi", evl_pi, "ordering file (enables order_divergence)");
    evl->add_option("--pvalues", evl_pvalues, "p-value matrix (enables auc)");
    evl->add_option("--out", evl_out, "also write scores.json here");

    // bench
    auto* bch = app.add_subcommand(
        "bench", "run a sweep from a config file into a results table");
    std::string bch_config, bch_out;
    int bch_jobs = 1;
    bool bch_verbose = false;
    bch->add_option("--config", bch_config, "experiment config file")
        ->required();
    bch->add_option("--jobs", bch_jobs, "parallel cells");
    bch->add_option("--out", bch_out, "output directory (overrides config)");
    bch->add_flag("--verbose", bch_verbose, "report per-cell test counts");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) {
            cmd_generate(gen_family, gen_mech, gen_d, gen_n, gen_seed, gen_out);
        } else if (ord->parsed()) {
            OrderConfig cfg;
            cfg.epsilon = ord_epsilon;
            cfg.fit = ord_fit.fit();
            cfg.seed = ord_seed;
            cfg.jobs = ord_jobs;
            cmd_order(ord_data, ord_method, cfg, ord_out);
        } else if (lrn->parsed()) {
            OrderConfig ocfg;
            ocfg.epsilon = lrn_epsilon;
            ocfg.fit = lrn_fit.fit();
            ocfg.seed = derive_seed(lrn_seed, {10});
            ocfg.jobs = lrn_jobs;
            CiConfig ccfg;
            ccfg.alpha = lrn_alpha;
            ccfg.permutations = lrn_permutations;
            ccfg.fit = lrn_fit.fit();
            ccfg.seed = derive_seed(lrn_seed, {11});
            ccfg.jobs = lrn_jobs;
            cmd_learn(lrn_data, lrn_truth, ocfg, ccfg, lrn_out, lrn_verbose);
        } else if (evl->parsed()) {
            cmd_eval(evl_pred, evl_truth, evl_pi, evl_pvalues, evl_out);
        } else if (bch->parsed()) {
            cmd_bench(bch_config, bch_jobs, bch_out, bch_verbose);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
