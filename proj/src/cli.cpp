#include "mlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlab/circuit.hpp"
#include "mlab/learn.hpp"
#include "mlab/mincut.hpp"
#include "mlab/statmech.hpp"

namespace mlab {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceCap = 3;
constexpr const char* kVersion = "monitor-lab 1.0.0";

const char* kUsage =
    "usage: monitor-lab <experiment> --config <file> [--seed N] [--workers N] [--out DIR]\n"
    "experiments: purity-growth entanglement-growth statmech-check\n"
    "             mincut-percolation learnability ancilla-probe\n";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

/// Flat key = value configuration with '#' comments. CLI flags override file
/// keys; every key must be consumed by the experiment, so a typo is reported
/// by name instead of being silently ignored.
class Config {
  public:
    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw UsageError("config file not readable: " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw UsageError("config line " + std::to_string(lineno) +
                                 ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty())
                throw UsageError("config line " + std::to_string(lineno) + ": empty key");
            values_[key] = trim(line.substr(eq + 1));
        }
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) throw UsageError("missing config key: " + key);
        consumed_.insert(key);
        return it->second;
    }
    std::string get_string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        return get_string(key);
    }
    long get_int(const std::string& key) { return parse_int(key, get_string(key)); }
    long get_int(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        return get_int(key);
    }
    double get_double(const std::string& key) { return parse_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return get_double(key);
    }
    std::vector<long> get_int_list(const std::string& key) {
        std::vector<long> out;
        for (const std::string& tok : split_list(get_string(key)))
            out.push_back(parse_int(key, tok));
        return out;
    }
    std::vector<double> get_double_list(const std::string& key) {
        std::vector<double> out;
        for (const std::string& tok : split_list(get_string(key)))
            out.push_back(parse_double(key, tok));
        return out;
    }

    void reject_unconsumed() const {
        for (const auto& [key, value] : values_)
            if (consumed_.count(key) == 0) throw UsageError("unknown config key: " + key);
    }

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    static std::vector<std::string> split_list(const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) out.push_back(tok);
        }
        return out;
    }
    long parse_int(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            long v = std::stol(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw UsageError("config key " + key + ": not an integer: " + value);
        }
    }
    double parse_double(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw UsageError("config key " + key + ": not a number: " + value);
        }
    }

    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw UsageError("cannot open output file: " + path.string());
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

struct RunContext {
    std::string experiment;
    Config config;
    std::uint64_t seed = 1;
    int workers = 1;
    std::filesystem::path out_dir = ".";
};

void run_purity_growth(RunContext& ctx, nlohmann::json& meta) {
    const int length = static_cast<int>(ctx.config.get_int("L"));
    const int d = static_cast<int>(ctx.config.get_int("d"));
    const int t_max = static_cast<int>(ctx.config.get_int("t_max"));
    const int samples = static_cast<int>(ctx.config.get_int("samples"));
    const int cut = static_cast<int>(ctx.config.get_int("cut", length / 2));
    if (std::pow(static_cast<double>(d), length) > 1.1e6)
        throw ResourceCapError("purity-growth: d^L exceeds the 2^20 state-vector cap");
    const auto curve = purity_growth_estimator(length, d, t_max, samples, cut,
                                               RandomStream{ctx.seed, 0}, ctx.workers);
    CsvWriter csv(ctx.out_dir / "purity-growth.csv",
                  {"t", "mean_purity", "stderr", "count", "closed_form"});
    const double hop = 2.0 * d / (static_cast<double>(d) * d + 1.0);
    for (int t = 1; t <= t_max; ++t) {
        const MeanStdErr& row = curve[t - 1];
        if (!(row.mean > 0.0 && row.mean <= 1.0 + 1e-9))
            throw InvariantError("purity-growth: mean purity outside (0, 1]");
        csv.row({std::to_string(t), fmt(row.mean), fmt(row.std_error),
                 std::to_string(row.count), fmt(std::pow(hop, 2 * t))});
    }
    meta["closed_form"] = "(2d/(d^2+1))^(2t)";
}

void run_entanglement_growth(RunContext& ctx, nlohmann::json& meta) {
    CircuitSpec spec;
    spec.num_sites = static_cast<int>(ctx.config.get_int("L"));
    spec.local_dim = static_cast<int>(ctx.config.get_int("d"));
    spec.depth = static_cast<int>(ctx.config.get_int("depth"));
    spec.meas_rate = ctx.config.get_double("p");
    spec.gate_seed = RandomStream{ctx.seed, 1};
    spec.meas_seed = RandomStream{ctx.seed, 2};
    const int renyi_n = static_cast<int>(ctx.config.get_int("n"));
    const int samples = static_cast<int>(ctx.config.get_int("samples"));
    const int first = static_cast<int>(ctx.config.get_int("region_first", 0));
    const int size = static_cast<int>(ctx.config.get_int("region_size", spec.num_sites / 2));
    if (std::pow(static_cast<double>(spec.local_dim), spec.num_sites) > 1.1e6)
        throw ResourceCapError("entanglement-growth: d^L exceeds the 2^20 state-vector cap");
    const Region region = Region::range(first, first + size);
    const auto curve = entanglement_growth_curve(spec, region, renyi_n, samples,
                                                 RandomStream{ctx.seed, 3}, ctx.workers);
    CsvWriter csv(ctx.out_dir / "entanglement-growth.csv",
                  {"t", "mean_entropy", "stderr", "count"});
    for (int t = 0; t <= spec.depth; ++t) {
        if (curve[t].mean < -1e-9)
            throw InvariantError("entanglement-growth: negative mean entropy");
        csv.row({std::to_string(t), fmt(curve[t].mean), fmt(curve[t].std_error),
                 std::to_string(curve[t].count)});
    }
    meta["entropy_units"] = "nats";
}

void run_statmech_check(RunContext& ctx, nlohmann::json& meta) {
    const int d = static_cast<int>(ctx.config.get_int("d"));
    const int t_max = static_cast<int>(ctx.config.get_int("t_max"));
    if (t_max > 6) throw ResourceCapError("statmech-check: t_max capped at 6 (width 4t+4)");
    CsvWriter csv(ctx.out_dir / "statmech-check.csv",
                  {"t", "ratio", "closed_form", "abs_diff"});
    const double hop = 2.0 * d / (static_cast<double>(d) * d + 1.0);
    bool violated = false;
    for (int t = 1; t <= t_max; ++t) {
        LatticeModel model;
        model.q = 2;
        model.local_dim = d;
        model.meas_rate = 0.0;
        model.width = 4 * t + 4;  // keeps domain walls off the side boundaries
        model.depth = t;
        const Region half = Region::range(0, model.width / 2);
        model.top_boundary = make_top_boundary(2, model.width, half, 2, 1);
        const LogZ z_a = contract(model);
        model.top_boundary = make_top_boundary(2, model.width, Region({}), 2, 1);
        const LogZ z_0 = contract(model);
        const double ratio = std::exp(logz_log_ratio(z_a, z_0));
        const double closed = std::pow(hop, 2 * t);
        const double diff = std::fabs(ratio - closed);
        if (diff > 1e-10 * closed) violated = true;
        csv.row({std::to_string(t), fmt(ratio), fmt(closed), fmt(diff)});
    }
    meta["closed_form"] = "(2d/(d^2+1))^(2t)";
    if (violated)
        throw InvariantError("statmech-check: contraction deviates from the closed form");
}

void run_mincut_percolation(RunContext& ctx, nlohmann::json& meta) {
    std::vector<int> sizes;
    for (long v : ctx.config.get_int_list("L_list")) sizes.push_back(static_cast<int>(v));
    const std::vector<double> p_grid = ctx.config.get_double_list("p_list");
    const int samples = static_cast<int>(ctx.config.get_int("samples"));
    for (int length : sizes)
        if (length > 64) throw ResourceCapError("mincut-percolation: L capped at 64");
    const PcEstimate estimate =
        estimate_pc(sizes, p_grid, samples, RandomStream{ctx.seed, 4}, ctx.workers);
    CsvWriter csv(ctx.out_dir / "mincut-percolation.csv",
                  {"L", "p", "mean_cut", "stderr", "count"});
    for (const PcSurfacePoint& pt : estimate.surface)
        csv.row({std::to_string(pt.num_sites), fmt(pt.p), fmt(pt.mean_cut),
                 fmt(pt.std_error), std::to_string(samples)});
    meta["pc"] = estimate.pc;
    meta["pc_ci_low"] = estimate.ci_low;
    meta["pc_ci_high"] = estimate.ci_high;
}

void run_learnability(RunContext& ctx, nlohmann::json& meta) {
    std::vector<int> sizes;
    for (long v : ctx.config.get_int_list("L_list")) sizes.push_back(static_cast<int>(v));
    const std::vector<double> p_grid = ctx.config.get_double_list("p_list");
    const int games = static_cast<int>(ctx.config.get_int("games"));
    const int depth_factor = static_cast<int>(ctx.config.get_int("depth_factor", 2));
    for (int length : sizes)
        if (length > 14)
            throw ResourceCapError("learnability: L capped at 14 (two state vectors per game)");
    const auto table = accuracy_curve(
        sizes, p_grid, [depth_factor](int length) { return depth_factor * length; }, games,
        RandomStream{ctx.seed, 5}, ctx.workers);
    CsvWriter csv(ctx.out_dir / "learnability.csv",
                  {"L", "p", "accuracy", "credence", "stderr", "games"});
    for (const AccuracyPoint& pt : table) {
        if (pt.accuracy < 0.5 - 4.0 * pt.std_error - 1e-12)
            throw InvariantError("learnability: accuracy below the guessing floor");
        csv.row({std::to_string(pt.num_sites), fmt(pt.p), fmt(pt.accuracy), fmt(pt.credence),
                 fmt(pt.std_error), std::to_string(pt.games)});
    }
    meta["measurement_rate_convention"] =
        "p is the per-site per-layer projective measurement probability";
}

void run_ancilla_probe(RunContext& ctx, nlohmann::json& meta) {
    CircuitSpec spec;
    spec.num_sites = static_cast<int>(ctx.config.get_int("L"));
    spec.local_dim = static_cast<int>(ctx.config.get_int("d"));
    spec.depth = static_cast<int>(ctx.config.get_int("depth"));
    spec.meas_rate = ctx.config.get_double("p");
    const int samples = static_cast<int>(ctx.config.get_int("samples"));
    const bool haar_pair = ctx.config.get_int("haar_pair", 1) != 0;
    if (std::pow(static_cast<double>(spec.local_dim), spec.num_sites + 1) > 1.1e6)
        throw ResourceCapError("ancilla-probe: d^(L+1) exceeds the 2^20 state-vector cap");
    std::vector<std::vector<double>> entries(
        static_cast<std::size_t>(spec.depth) + 1, std::vector<double>(samples, 0.0));
    parallel_for(static_cast<std::size_t>(samples), ctx.workers, [&](std::size_t i) {
        CircuitSpec sample_spec = spec;
        sample_spec.gate_seed = substream(RandomStream{ctx.seed, 6}, i);
        sample_spec.meas_seed = substream(RandomStream{ctx.seed, 7}, i);
        Rng rng(substream(RandomStream{ctx.seed, 8}, i));
        const std::vector<double> series = ancilla_probe_run(sample_spec, rng, haar_pair);
        for (int t = 0; t <= spec.depth; ++t) entries[t][i] = series[t];
    });
    CsvWriter csv(ctx.out_dir / "ancilla-probe.csv",
                  {"t", "mean_entropy", "stderr", "count"});
    for (int t = 0; t <= spec.depth; ++t) {
        const MeanStdErr row = mean_with_jackknife_se(entries[t]);
        if (row.mean < -1e-9 || row.mean > std::log(2.0) + 1e-9)
            throw InvariantError("ancilla-probe: reference entropy outside [0, ln 2]");
        csv.row({std::to_string(t), fmt(row.mean), fmt(row.std_error),
                 std::to_string(row.count)});
    }
    meta["entropy_units"] = "nats";
}

int dispatch(RunContext& ctx) {
    const auto start = std::chrono::steady_clock::now();
    nlohmann::json meta;
    meta["experiment"] = ctx.experiment;
    meta["version"] = kVersion;
    meta["seed"] = ctx.seed;
    meta["workers"] = ctx.workers;

    if (ctx.experiment == "purity-growth")
        run_purity_growth(ctx, meta);
    else if (ctx.experiment == "entanglement-growth")
        run_entanglement_growth(ctx, meta);
    else if (ctx.experiment == "statmech-check")
        run_statmech_check(ctx, meta);
    else if (ctx.experiment == "mincut-percolation")
        run_mincut_percolation(ctx, meta);
    else if (ctx.experiment == "learnability")
        run_learnability(ctx, meta);
    else if (ctx.experiment == "ancilla-probe")
        run_ancilla_probe(ctx, meta);
    else
        throw UsageError("unknown experiment: " + ctx.experiment);
    ctx.config.reject_unconsumed();

    nlohmann::json resolved;
    for (const auto& [key, value] : ctx.config.values()) resolved[key] = value;
    meta["resolved_config"] = resolved;
    meta["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(ctx.out_dir / (ctx.experiment + "_metadata.json"));
    out << meta.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    try {
        if (argc < 2) throw UsageError("missing experiment name");
        RunContext ctx;
        ctx.experiment = argv[1];
        std::optional<std::string> config_path;
        std::optional<std::string> seed_flag, workers_flag, out_flag;
        for (int i = 2; i < argc; ++i) {
            const std::string arg = argv[i];
            auto next = [&]() -> std::string {
                if (i + 1 >= argc) throw UsageError("flag " + arg + " needs a value");
                return argv[++i];
            };
            if (arg == "--config")
                config_path = next();
            else if (arg == "--seed")
                seed_flag = next();
            else if (arg == "--workers")
                workers_flag = next();
            else if (arg == "--out")
                out_flag = next();
            else
                throw UsageError("unknown flag: " + arg);
        }
        if (!config_path) throw UsageError("--config is required");
        ctx.config.load_file(*config_path);
        // CLI flags override file keys.
        if (seed_flag) ctx.config.set("seed", *seed_flag);
        if (workers_flag) ctx.config.set("workers", *workers_flag);
        if (out_flag) ctx.config.set("out", *out_flag);
        ctx.seed = static_cast<std::uint64_t>(ctx.config.get_int("seed", 1));
        ctx.workers = static_cast<int>(ctx.config.get_int("workers", 1));
        ctx.out_dir = ctx.config.get_string("out", ".");
        std::filesystem::create_directories(ctx.out_dir);
        return dispatch(ctx);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << kUsage;
        return kExitUsage;
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
}

}  // namespace mlab
