// Command-line laboratory: every pipeline is a subcommand over a shared
// key = value configuration, with flags overriding file values.
#include <iostream>

#include "CLI11.hpp"

#include "sadic/runner.hpp"
#include "sadic/version.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> overrides; // key=value pairs
};

void add_common(CLI::App* cmd, CommonFlags& common) {
    cmd->add_option("--config", common.config_path, "key = value configuration file");
    cmd->add_option("--set", common.overrides, "extra key=value overrides")->take_all();
}

// Registers an option that lands in the config under `key` when given.
void add_key(CLI::App* cmd, std::map<std::string, std::string>& sink, const std::string& flag,
             const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
           flag, [&sink, key](const std::string& v) { sink[key] = v; }, help)
        ->expected(1);
}

int run(const std::string& task, const CommonFlags& common, const std::map<std::string, std::string>& flags) {
    sadic::ExperimentConfig cfg;
    try {
        if (!common.config_path.empty()) cfg = sadic::ExperimentConfig::from_file(common.config_path);
        for (const std::string& kv : common.overrides) {
            std::size_t eq = kv.find('=');
            if (eq == std::string::npos) throw sadic::ConfigError("--set expects key=value, got " + kv);
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        for (const auto& [k, v] : flags) cfg.set(k, v); // flags win
        cfg.set("task", task);
    } catch (const sadic::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    sadic::RunResult result = sadic::run_experiment(cfg);
    for (const auto& t : result.manifest.tasks) {
        std::cout << t.name << ": " << t.status;
        if (!t.detail.empty()) std::cout << " (" << t.detail << ")";
        std::cout << "\n";
        for (const std::string& out : t.outputs)
            std::cout << "  " << cfg.get("out_dir", "out") << "/" << out << "\n";
    }
    if (result.exit_code != 0) std::cerr << result.message << "\n";
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sadiclab: substitutions, Rauzy induction, cocycles, special flows and their spectra"};
    app.set_version_flag("--version", sadic::kVersion);
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        CommonFlags common;
        std::map<std::string, std::string> flags;
    };
    std::map<std::string, Sub> subs;

    auto make = [&](const std::string& name, const std::string& help) -> Sub& {
        Sub& sub = subs[name];
        sub.cmd = app.add_subcommand(name, help);
        add_common(sub.cmd, sub.common);
        add_key(sub.cmd, sub.flags, "--out-dir", "out_dir", "output directory");
        add_key(sub.cmd, sub.flags, "--seed", "seed", "random seed");
        add_key(sub.cmd, sub.flags, "--workers", "workers", "worker threads over grid cells");
        add_key(sub.cmd, sub.flags, "--precision-bits", "precision_bits",
                "working precision for lattice tracking");
        return sub;
    };

    {
        Sub& s = make("rauzy-class", "enumerate the Rauzy class of a permutation");
        add_key(s.cmd, s.flags, "--pi", "pi", "one-row permutation, e.g. 3,2,1");
    }
    {
        Sub& s = make("good-word", "construct a simple positive word with good return words");
        add_key(s.cmd, s.flags, "--pi", "pi", "one-row permutation");
        add_key(s.cmd, s.flags, "--basepoint", "basepoint", "vertex id to anchor the word at");
    }
    {
        Sub& s = make("cocycle", "exact cocycle products with running exponent estimates");
        add_key(s.cmd, s.flags, "--seq", "seq",
                "sequence spec (fib, tribonacci, fib3, iid2, periodic:..., iid:...)");
        add_key(s.cmd, s.flags, "--n", "n", "number of steps");
    }
    {
        Sub& s = make("lyapunov", "Lyapunov spectrum by QR renormalization");
        add_key(s.cmd, s.flags, "--seq", "seq", "sequence spec");
        add_key(s.cmd, s.flags, "--N", "N", "steps");
        add_key(s.cmd, s.flags, "--trials", "trials", "independent start frames");
        add_key(s.cmd, s.flags, "--cadence", "cadence", "QR renormalization cadence");
    }
    {
        Sub& s = make("birkhoff", "twisted integral along one orbit");
        add_key(s.cmd, s.flags, "--seq", "seq", "sequence spec");
        add_key(s.cmd, s.flags, "--roof", "roof", "roof spec (unit, golden, random, or comma list)");
        add_key(s.cmd, s.flags, "--omega", "omega", "frequency");
        add_key(s.cmd, s.flags, "--R", "R", "integration length or grid");
        add_key(s.cmd, s.flags, "--level", "level", "cylindrical function level");
        add_key(s.cmd, s.flags, "--function", "function", "one | indicator | mean-zero");
    }
    {
        Sub& s = make("spectral", "L2-averaged twisted integrals over (omega, R) grids and the growth fit");
        add_key(s.cmd, s.flags, "--seq", "seq", "sequence spec");
        add_key(s.cmd, s.flags, "--roof", "roof", "roof spec");
        add_key(s.cmd, s.flags, "--omega-grid", "omega_grid", "grid lo:hi:step or comma list");
        add_key(s.cmd, s.flags, "--R-grid", "R_grid", "grid log:lo:hi:count or comma list");
        add_key(s.cmd, s.flags, "--starts", "starts", "sampled starting points");
        add_key(s.cmd, s.flags, "--function", "function", "one | indicator | mean-zero");
        add_key(s.cmd, s.flags, "--level", "level", "cylindrical function level");
        add_key(s.cmd, s.flags, "--svg", "svg", "emit spectral.svg (true/false)");
        add_key(s.cmd, s.flags, "--normalize-roof", "normalize_roof", "scale the roof into the simplex");
    }
    {
        Sub& s = make("veech", "nearest-lattice tracking / good-time densities");
        add_key(s.cmd, s.flags, "--seq", "seq", "sequence spec");
        add_key(s.cmd, s.flags, "--roof", "roof", "roof spec");
        add_key(s.cmd, s.flags, "--omega", "omega", "single frequency (trace mode)");
        add_key(s.cmd, s.flags, "--omega-grid", "omega_grid", "frequency grid (density mode)");
        add_key(s.cmd, s.flags, "--N", "N", "trace length");
        add_key(s.cmd, s.flags, "--rho", "rho", "torus distance threshold");
        add_key(s.cmd, s.flags, "--B", "B", "frequency window [1/B, B]");
    }
    {
        Sub& s = make("ek-count", "exhaustive covering counts with branch bounds");
        add_key(s.cmd, s.flags, "--seq", "seq", "sequence spec");
        add_key(s.cmd, s.flags, "--N", "N", "horizon");
        add_key(s.cmd, s.flags, "--N-grid", "N_grid", "horizon grid");
        add_key(s.cmd, s.flags, "--delta", "delta", "exceptional density");
        add_key(s.cmd, s.flags, "--B", "B", "frequency window bound");
    }
    {
        Sub& s = make("fit", "Holder fit from a spectral CSV");
        add_key(s.cmd, s.flags, "--in", "in", "input spectral.csv");
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& [name, sub] : subs)
        if (sub.cmd->parsed()) return run(name, sub.common, sub.flags);
    return 2;
}
