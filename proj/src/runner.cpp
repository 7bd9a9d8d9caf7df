#include "sadic/runner.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "json.hpp"

#include "sadic/birkhoff.hpp"
#include "sadic/csv.hpp"
#include "sadic/ek.hpp"
#include "sadic/errors.hpp"
#include "sadic/fit.hpp"
#include "sadic/lyapunov.hpp"
#include "sadic/rauzy_graph.hpp"
#include "sadic/version.hpp"

namespace sadic {

namespace {

namespace fs = std::filesystem;

std::string now_utc() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

IETPermutation permutation_from_config(const ExperimentConfig& cfg) {
    std::string spec = cfg.require("pi");
    std::vector<int> images;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            images.push_back(std::stoi(item));
        } catch (...) {
            throw ConfigError("config key 'pi': bad entry '" + item + "'");
        }
    }
    try {
        return IETPermutation(images);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'pi': ") + e.what());
    }
}

int worker_count(const ExperimentConfig& cfg) {
    long w = cfg.integer("workers", 1);
    if (w < 1) throw ConfigError("config key 'workers': must be >= 1");
    return static_cast<int>(w);
}

// Task-parallel map over [0, count) with a bounded pool; results must be
// written into index-addressed slots by `work` so output stays deterministic.
void parallel_for(int workers, std::size_t count, const std::function<void(std::size_t)>& work) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < std::min<std::size_t>(workers, count); ++t) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct TaskContext {
    const ExperimentConfig& cfg;
    fs::path out_dir;
    RunManifest::Task& task;

    std::string out(const std::string& filename) {
        task.outputs.push_back(filename);
        return (out_dir / filename).string();
    }
};

void run_rauzy_class(TaskContext& ctx) {
    RauzyGraph graph = RauzyGraph::closure(permutation_from_config(ctx.cfg));
    write_text(ctx.out("graph.json"), graph.to_json());
    write_text(ctx.out("graph.dot"), graph.to_dot());
    ctx.task.detail = std::to_string(graph.vertex_count()) + " vertices";
}

void run_good_word(TaskContext& ctx) {
    IETPermutation pi = permutation_from_config(ctx.cfg);
    RauzyGraph graph = RauzyGraph::closure(pi);
    GoodWordBudget budget;
    budget.max_loop_length = static_cast<int>(ctx.cfg.integer("max_loop_length", budget.max_loop_length));
    budget.max_power = static_cast<int>(ctx.cfg.integer("max_power", budget.max_power));
    int base = static_cast<int>(ctx.cfg.integer("basepoint", 0));
    if (base < 0 || base >= graph.vertex_count()) throw ConfigError("config key 'basepoint': out of range");
    GoodWordReport report = construct_good_word(graph, base, budget);

    nlohmann::json j;
    j["labels"] = report.path.labels();
    j["length"] = report.path.length();
    j["loop_length"] = report.loop_length;
    j["power"] = report.power;
    j["simple"] = report.simple;
    j["positive"] = report.positive;
    j["returns_good"] = report.returns_good;
    j["lattice_full"] = report.lattice_full;
    nlohmann::json words = nlohmann::json::array();
    for (const Word& w : report.return_words) words.push_back(format_word(w));
    j["return_words"] = words;
    nlohmann::json matrix = nlohmann::json::array();
    const IntMatrix& mat = report.block.matrix();
    for (int r = 0; r < mat.rows(); ++r)
        for (int c = 0; c < mat.cols(); ++c) matrix.push_back(mat.at(r, c).get_str());
    j["matrix"] = matrix;
    write_text(ctx.out("good_word.json"), j.dump(2) + "\n");
    ctx.task.detail = "labels=" + report.path.labels();
}

void run_cocycle(TaskContext& ctx) {
    SubstitutionSequence seq = sequence_from_config(ctx.cfg);
    long n_max = ctx.cfg.integer("n", 50);
    if (n_max < 1) throw ConfigError("config key 'n': must be >= 1");
    const int m = seq.alphabet_size();

    std::vector<std::string> header = {"n", "W", "log_norm"};
    for (int i = 1; i <= m; ++i) header.push_back("theta_hat_" + std::to_string(i));
    CsvWriter csv(std::move(header));

    CocycleAccumulator acc(seq);
    Eigen::MatrixXd frame = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd logsum = Eigen::VectorXd::Zero(m);
    for (long n = 1; n <= n_max; ++n) {
        acc.advance();
        // running per-step exponent estimates from a QR treadmill
        const IntMatrix& s = seq.at(n).matrix();
        Eigen::MatrixXd factor(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) factor(i, j) = s.at(j, i).get_d();
        frame = factor * frame;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
        Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < m; ++i) logsum(i) += std::log(std::abs(r(i, i)));
        frame = q;

        std::vector<std::string> row = {CsvWriter::format(n),
                                        CsvWriter::format(cocycle_factor(seq, n).log_linf_norm()),
                                        CsvWriter::format(acc.matrix().log_linf_norm())};
        for (int i = 0; i < m; ++i) row.push_back(CsvWriter::format(logsum(i) / static_cast<double>(n)));
        csv.add_row(row);
    }
    csv.write(ctx.out("cocycle.csv"));
}

void run_lyapunov(TaskContext& ctx) {
    SubstitutionSequence seq = sequence_from_config(ctx.cfg);
    LyapunovOptions opts;
    opts.steps = ctx.cfg.integer("N", 100000);
    opts.trials = static_cast<int>(ctx.cfg.integer("trials", 4));
    opts.cadence = static_cast<int>(ctx.cfg.integer("cadence", 5));
    opts.seed = ctx.cfg.seed();
    if (opts.steps < 1) throw ConfigError("config key 'N': must be >= 1");
    if (opts.trials < 1) throw ConfigError("config key 'trials': must be >= 1");
    LyapunovEstimate est = lyapunov_spectrum(seq, opts);

    CsvWriter csv({"i", "theta", "spread"});
    for (std::size_t i = 0; i < est.exponents.size(); ++i)
        csv.add_row({CsvWriter::format(static_cast<long>(i + 1)), CsvWriter::format(est.exponents[i]),
                     CsvWriter::format(est.spread[i])});
    csv.write(ctx.out("lyapunov.csv"));

    nlohmann::json j;
    j["exponents"] = est.exponents;
    j["spread"] = est.spread;
    j["kappa"] = est.kappa;
    j["top_simple"] = est.top_simple;
    j["steps"] = est.steps;
    j["trials"] = est.trials;
    write_text(ctx.out("lyapunov.json"), j.dump(2) + "\n");
    ctx.task.detail = "theta1=" + CsvWriter::format(est.exponents[0]);
}

CylFunction function_from_config(const ExperimentConfig& cfg, const SAdicSystem& sys,
                                 const RoofVector& roof) {
    int level = static_cast<int>(cfg.integer("level", 0));
    std::string kind = cfg.get("function", "mean-zero");
    const int m = sys.alphabet_size();
    if (kind == "one") return CylFunction::constant(level, m, 1.0);
    if (kind == "indicator") {
        long a = cfg.integer("function_letter", 1);
        if (a < 1 || a > m) throw ConfigError("config key 'function_letter': out of range");
        return CylFunction::indicator(level, m, static_cast<Letter>(a - 1));
    }
    if (kind == "mean-zero") {
        std::vector<std::complex<double>> values;
        for (int a = 0; a < m; ++a) values.push_back(a % 2 == 0 ? 1.0 : -1.0);
        return CylFunction::mean_zero_blockwise(sys, roof, level, std::move(values));
    }
    throw ConfigError("config key 'function': unknown kind '" + kind + "'");
}

void run_birkhoff(TaskContext& ctx) {
    SubstitutionSequence seq = sequence_from_config(ctx.cfg);
    SAdicSystem sys{seq};
    RoofVector roof = roof_from_config(ctx.cfg, sys);
    CylFunction f = function_from_config(ctx.cfg, sys, roof);
    double omega = ctx.cfg.require_number("omega");
    std::vector<double> r_grid = ctx.cfg.grid_or("R", "1e3");

    FlowTables tables = FlowTables::build(sys, roof, f.level());
    double min_block = *std::min_element(tables.block_time.begin(), tables.block_time.end());
    double r_max = *std::max_element(r_grid.begin(), r_grid.end());
    LetterStream stream = LetterStream::generate(sys, f.level(),
                                                 static_cast<std::size_t>(r_max / min_block) + 16);

    CsvWriter csv({"omega", "R", "re", "im", "abs"});
    std::vector<double> sorted = r_grid;
    std::sort(sorted.begin(), sorted.end());
    FlowCursor cursor{&stream, 0, 0.0};
    std::complex<double> acc = 0.0;
    double consumed = 0.0;
    for (double r : sorted) {
        if (r > consumed) {
            std::complex<double> piece = twisted_birkhoff(cursor, tables, f, omega, r - consumed);
            acc += std::polar(1.0, -2.0 * std::numbers::pi * omega * consumed) * piece;
            consumed = r;
        }
        csv.add_row({CsvWriter::format(omega), CsvWriter::format(r), CsvWriter::format(acc.real()),
                     CsvWriter::format(acc.imag()), CsvWriter::format(std::abs(acc))});
    }
    csv.write(ctx.out("birkhoff.csv"));
}

void run_spectral(TaskContext& ctx) {
    SubstitutionSequence seq = sequence_from_config(ctx.cfg);
    SAdicSystem sys{seq};
    RoofVector roof = roof_from_config(ctx.cfg, sys);
    CylFunction f = function_from_config(ctx.cfg, sys, roof);
    std::vector<double> omega_grid = ctx.cfg.grid_or("omega_grid", "0.5:2:0.25");
    std::vector<double> r_grid = ctx.cfg.grid_or("R_grid", "log:1e2:1e4:8");
    SpectralOptions opts;
    opts.starts = static_cast<int>(ctx.cfg.integer("starts", 64));

    // one omega per worker slot; results land in index-addressed cells
    std::vector<SpectralEstimate> parts(omega_grid.size());
    parallel_for(worker_count(ctx.cfg), omega_grid.size(), [&](std::size_t i) {
        parts[i] = spectral_estimate(sys, roof, f, {omega_grid[i]}, r_grid, opts);
    });

    CsvWriter csv({"omega", "R", "re", "im", "abs", "alpha_fit"});
    std::vector<double> worst(parts[0].r_grid.size(), 0.0);
    for (std::size_t oi = 0; oi < omega_grid.size(); ++oi) {
        const SpectralEstimate& est = parts[oi];
        for (std::size_t ri = 0; ri < est.r_grid.size(); ++ri) {
            const SpectralCell& cell = est.cell(0, ri);
            worst[ri] = std::max(worst[ri], cell.rms);
            csv.add_row({CsvWriter::format(cell.omega), CsvWriter::format(cell.big_r),
                         CsvWriter::format(cell.mean.real()), CsvWriter::format(cell.mean.imag()),
                         CsvWriter::format(cell.rms), CsvWriter::format(est.fits[0].alpha)});
        }
    }
    csv.write(ctx.out("spectral.csv"));

    PowerFit uniform = fit_power_law(parts[0].r_grid, worst);
    nlohmann::json j;
    j["alpha"] = uniform.alpha;
    j["gamma"] = uniform.gamma;
    j["C1"] = uniform.c1;
    j["R0"] = uniform.r0;
    j["residual"] = uniform.residual;
    write_text(ctx.out("fit.json"), j.dump(2) + "\n");

    if (ctx.cfg.flag("svg", false)) {
        std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;
        for (std::size_t oi = 0; oi < omega_grid.size(); ++oi) {
            std::vector<std::pair<double, double>> pts;
            for (std::size_t ri = 0; ri < parts[oi].r_grid.size(); ++ri)
                pts.emplace_back(parts[oi].r_grid[ri], parts[oi].cell(0, ri).rms);
            series.emplace_back("omega=" + CsvWriter::format(omega_grid[oi]), std::move(pts));
        }
        write_text(ctx.out("spectral.svg"), render_svg_lines(series, true, true));
    }
    ctx.task.detail = "gamma=" + CsvWriter::format(uniform.gamma);
}

void run_veech(TaskContext& ctx) {
    SubstitutionSequence seq = sequence_from_config(ctx.cfg);
    SAdicSystem sys{seq};
    RoofVector roof = roof_from_config(ctx.cfg, sys);
    long n_max = ctx.cfg.integer("N", 200);
    double rho = ctx.cfg.number("rho", 0.05);
    EKSettings settings;
    settings.precision_bits = static_cast<int>(ctx.cfg.integer("precision_bits", 0));
    if (ctx.cfg.get("roof", "") == "golden")
        settings.roof_hp = golden_roof_hp(std::max(512L, ctx.cfg.integer("precision_bits", 512)));

    const int m = seq.alphabet_size();
    if (ctx.cfg.has("omega_grid")) {
        std::vector<double> grid = ctx.cfg.grid("omega_grid");
        double b_range = ctx.cfg.number("B", 2.0);
        DensityReport report = good_time_density(seq, roof, grid, rho, n_max, b_range, settings);
        CsvWriter csv({"omega", "count", "density"});
        for (const auto& row : report.rows)
            csv.add_row({CsvWriter::format(row.omega), CsvWriter::format(row.count),
                         CsvWriter::format(row.density)});
        csv.write(ctx.out("density.csv"));
        ctx.task.detail = "min_density=" + CsvWriter::format(report.min_density);
        return;
    }

    double omega = ctx.cfg.require_number("omega");
    EKTrace trace = ek_track(seq, roof, omega, n_max, rho, settings);
    std::vector<std::string> header = {"n"};
    for (int i = 1; i <= m; ++i) header.push_back("K_" + std::to_string(i));
    header.insert(header.end(), {"eps_inf", "W", "rho", "M", "flag"});
    CsvWriter csv(std::move(header));
    for (const EKRow& row : trace.rows) {
        std::vector<std::string> cells = {CsvWriter::format(row.n)};
        for (const mpz_class& k : row.k) cells.push_back(k.get_str());
        cells.push_back(CsvWriter::format(row.eps_inf));
        cells.push_back(CsvWriter::format(row.w_next));
        cells.push_back(CsvWriter::format(row.rho));
        cells.push_back(row.m_bound.get_str());
        cells.push_back(row.flag ? "1" : "0");
        csv.add_row(cells);
    }
    csv.write(ctx.out("veech.csv"));
    ctx.task.detail = "density=" + CsvWriter::format(trace.flagged_density()) +
                      " uniqueness_violations=" + CsvWriter::format(trace.uniqueness_violations);
}

void run_ek_count(TaskContext& ctx) {
    SubstitutionSequence seq = sequence_from_config(ctx.cfg);
    double delta = ctx.cfg.number("delta", 0.1);
    double b_range = ctx.cfg.number("B", 2.0);
    std::vector<double> n_grid = ctx.cfg.grid_or("N_grid", CsvWriter::format(ctx.cfg.number("N", 20)));
    std::uint64_t budget = static_cast<std::uint64_t>(ctx.cfg.integer("leaf_budget", 50'000'000L));

    CsvWriter csv({"N", "delta", "psi_size", "k0", "count", "log_count", "log_rate"});
    for (double n_raw : n_grid) {
        long n = static_cast<long>(n_raw);
        CoveringCount count = ek_covering_count(seq, n, delta, b_range, budget);
        csv.add_row({CsvWriter::format(n), CsvWriter::format(delta),
                     CsvWriter::format(static_cast<long>(count.psi.size())), count.k0_count.get_str(),
                     count.count.get_str(), CsvWriter::format(count.log_count),
                     CsvWriter::format(count.log_rate)});
    }
    csv.write(ctx.out("ek_count.csv"));
}

void run_fit(TaskContext& ctx) {
    std::string in = ctx.cfg.require("in");
    HolderFit fit = fit_holder_file(in);
    nlohmann::json j;
    j["alpha"] = fit.alpha;
    j["gamma"] = fit.gamma;
    j["R0"] = fit.r0;
    j["C1"] = fit.c1;
    j["residual"] = fit.residual;
    j["points"] = fit.points;
    write_text(ctx.out("fit.json"), j.dump(2) + "\n");
    ctx.task.detail = "alpha=" + CsvWriter::format(fit.alpha) + " gamma=" + CsvWriter::format(fit.gamma);
}

} // namespace

SubstitutionSequence sequence_from_config(const ExperimentConfig& cfg) {
    std::string spec = cfg.get("seq", "fib");
    try {
        return preset_sequence(spec, cfg.seed());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'seq': ") + e.what());
    }
}

RoofVector roof_from_config(const ExperimentConfig& cfg, const SAdicSystem& sys) {
    std::string spec = cfg.get("roof", "unit");
    const int m = sys.alphabet_size();
    RoofVector roof;
    if (spec == "unit") {
        roof = RoofVector(std::vector<double>(static_cast<std::size_t>(m), 1.0));
    } else if (spec == "golden") {
        if (m != 2) throw ConfigError("config key 'roof': golden roof needs a two-letter system");
        roof = RoofVector({(1.0 + std::sqrt(5.0)) / 2.0, 1.0});
    } else if (spec == "random") {
        std::mt19937_64 rng(cfg.seed() ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> entry(0.2, 1.8);
        std::vector<double> s(static_cast<std::size_t>(m));
        for (double& v : s) v = entry(rng);
        roof = RoofVector(std::move(s));
    } else {
        std::vector<double> s = parse_grid(spec, "roof");
        if (static_cast<int>(s.size()) != m)
            throw ConfigError("config key 'roof': need " + std::to_string(m) + " entries");
        roof = RoofVector(std::move(s));
    }
    if (cfg.flag("normalize_roof", false)) roof = sys.normalize_roof(roof);
    return roof;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    RunResult result;
    result.manifest.version = kVersion;
    result.manifest.created_utc = now_utc();
    result.manifest.config_hash = cfg.hash();

    fs::path out_dir;
    std::string task_name;
    try {
        task_name = cfg.require("task");
        out_dir = cfg.get("out_dir", "out");
        fs::create_directories(out_dir);
    } catch (const ConfigError& e) {
        result.exit_code = 2;
        result.message = e.what();
        return result;
    }

    result.manifest.tasks.push_back({task_name, "ok", {}, ""});
    TaskContext ctx{cfg, out_dir, result.manifest.tasks.back()};
    try {
        if (task_name == "rauzy-class") run_rauzy_class(ctx);
        else if (task_name == "good-word") run_good_word(ctx);
        else if (task_name == "cocycle") run_cocycle(ctx);
        else if (task_name == "lyapunov") run_lyapunov(ctx);
        else if (task_name == "birkhoff") run_birkhoff(ctx);
        else if (task_name == "spectral") run_spectral(ctx);
        else if (task_name == "veech") run_veech(ctx);
        else if (task_name == "ek-count") run_ek_count(ctx);
        else if (task_name == "fit") run_fit(ctx);
        else throw ConfigError("config key 'task': unknown task '" + task_name + "'");
    } catch (const ConfigError& e) {
        ctx.task.status = "error";
        ctx.task.detail = e.what();
        result.exit_code = 2;
        result.message = e.what();
    } catch (const BudgetError& e) {
        ctx.task.status = "budget-exceeded";
        ctx.task.detail = e.what();
        result.exit_code = 3;
        result.message = e.what();
    } catch (const std::exception& e) {
        ctx.task.status = "error";
        ctx.task.detail = e.what();
        result.exit_code = 1;
        result.message = e.what();
    }

    result.manifest.write((out_dir / "manifest.json").string());
    return result;
}

} // namespace sadic
