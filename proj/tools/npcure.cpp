#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "npcure/bandwidth.hpp"
#include "npcure/cure.hpp"
#include "npcure/errors.hpp"
#include "npcure/io.hpp"
#include "npcure/sim.hpp"
#include "npcure/truth.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumeric = 4;
constexpr const char* kVersion = "0.1.0";

using namespace npcure;

std::vector<double> parse_x_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    unsigned long count = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lu", &lo, &hi, &count) != 3 || count < 1 ||
        (count > 1 && !(hi > lo)))
        throw ParseError("x grid must be lo:hi:count, got '" + spec + "'");
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return grid;
}

int cmd_simulate(int model, std::size_t n, std::uint64_t seed, const std::string& out) {
    const ModelTruth truth =
        ModelTruth::from_id(model == 1 ? ModelId::Model1 : ModelId::Model2);
    const SurvivalSample sample = gen_sample(truth, n, seed);
    write_dataset(out, sample);

    nlohmann::json sidecar;
    sidecar["model"] = model;
    sidecar["n"] = n;
    sidecar["seed"] = seed;
    sidecar["censoring_rate"] = truth.censoring_rate;
    sidecar["covariate_lo"] = truth.covariate_lo;
    sidecar["covariate_hi"] = truth.covariate_hi;
    sidecar["tau0"] = truth.tau0;
    sidecar["version"] = kVersion;
    std::ofstream meta(out + ".json");
    if (!meta) throw Error("cannot write '" + out + ".json'");
    meta << sidecar.dump(2) << '\n';
    return 0;
}

struct FitOptions {
    std::string data_path;
    std::string x_spec = "";
    double h = 0.0;
    bool select = false;
    double b = 0.0;
    std::string pilot = "local";
    bool smooth = false;
    std::string group_filter;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::size_t stage1_resamples = 80;
    std::size_t stage2_resamples = 1000;
    bool single_stage = false;
};

int cmd_fit(const FitOptions& opt) {
    const Dataset data = read_dataset(opt.data_path);
    std::vector<std::string> groups = data.has_group ? data.group_labels()
                                                     : std::vector<std::string>{""};
    if (!opt.group_filter.empty()) {
        bool found = false;
        for (const auto& g : groups) found = found || g == opt.group_filter;
        if (!found) {
            std::string available;
            for (const auto& g : groups) available += (available.empty() ? "" : ", ") + g;
            std::cerr << "unknown group '" << opt.group_filter << "'; available: " << available
                      << '\n';
            return kExitUsage;
        }
        groups = {opt.group_filter};
    }

    std::filesystem::create_directories(opt.out_dir);
    std::ofstream fits(opt.out_dir + "/fits.csv");
    if (!fits) throw Error("cannot write fits.csv");
    fits << "group,x,h_used,g_used,cure_probability,warning\n";
    std::optional<std::ofstream> latency_out;
    if (opt.b > 0.0) {
        latency_out.emplace(opt.out_dir + "/latency.csv");
        if (!*latency_out) throw Error("cannot write latency.csv");
        *latency_out << "group,x,b,t,S0_hat,warning\n";
    }

    for (const std::string& group : groups) {
        const SurvivalSample sample = data.sample_for(group);
        const IdentifiabilityReport ident = identifiability_diagnostic(sample);
        std::vector<double> x_grid;
        if (!opt.x_spec.empty()) x_grid = parse_x_grid(opt.x_spec);
        else {
            // default: 21 points over the group's covariate range
            const double lo = sample.covariate_min();
            const double hi = sample.covariate_max();
            for (std::size_t i = 0; i < 21; ++i)
                x_grid.push_back(lo + (hi - lo) * static_cast<double>(i) / 20.0);
        }

        std::vector<double> hs(x_grid.size(), opt.h);
        std::vector<double> gs(x_grid.size(), 0.0);
        std::vector<std::string> warnings(x_grid.size());
        if (opt.select) {
            BootstrapConfig config;
            config.stage1_resamples = opt.stage1_resamples;
            config.stage2_resamples = opt.stage2_resamples;
            config.single_stage = opt.single_stage;
            config.range_lo = 0.2;
            config.range_hi = std::max(sample.covariate_max() - sample.covariate_min(), 0.4);
            config.pilot.kind =
                opt.pilot == "global" ? PilotKind::GlobalUniform : PilotKind::LocalKNN;
            for (std::size_t i = 0; i < x_grid.size(); ++i) {
                BootstrapConfig local = config;
                local.master_seed = derive_seed(opt.seed, {0x666974ULL, i});
                try {
                    const BandwidthSearch search = select_bandwidth(sample, x_grid[i], local);
                    hs[i] = search.selected;
                    gs[i] = search.pilot;
                    if (search.boundary) warnings[i] = "grid_boundary";
                } catch (const Error&) {
                    hs[i] = std::numeric_limits<double>::quiet_NaN();
                    warnings[i] = "selector_failed";
                }
            }
            if (opt.smooth) {
                std::vector<double> finite = hs;
                bool all_finite = true;
                for (double h : finite) all_finite = all_finite && std::isfinite(h);
                if (all_finite) hs = smooth_bandwidths(finite);
            }
        }

        for (std::size_t i = 0; i < x_grid.size(); ++i) {
            double cure = std::numeric_limits<double>::quiet_NaN();
            std::string warning = warnings[i];
            if (std::isfinite(hs[i]) && hs[i] > 0.0) {
                try {
                    cure = incidence(sample, x_grid[i], hs[i]);
                } catch (const EmptyNeighborhood&) {
                    warning = warning.empty() ? "empty_neighborhood" : warning;
                }
            }
            if ((ident.warning || ident.no_uncensored) && warning.empty())
                warning = "identifiability";
            fits << group << ',' << format_real(x_grid[i]) << ',' << format_real(hs[i]) << ','
                 << (gs[i] > 0.0 ? format_real(gs[i]) : "") << ',' << format_real(cure) << ','
                 << warning << '\n';

            if (latency_out) {
                try {
                    const CureFit fit = cure_fit(sample, x_grid[i],
                                                 std::isfinite(hs[i]) && hs[i] > 0.0 ? hs[i]
                                                                                     : opt.b,
                                                 opt.b);
                    *latency_out << group << ',' << format_real(x_grid[i]) << ','
                                 << format_real(opt.b) << ",0,1,\n";
                    for (std::size_t k = 0; k < fit.latency_curve.jump_times.size(); ++k)
                        *latency_out << group << ',' << format_real(x_grid[i]) << ','
                                     << format_real(opt.b) << ','
                                     << format_real(fit.latency_curve.jump_times[k]) << ','
                                     << format_real(fit.latency_curve.values[k]) << ",\n";
                } catch (const CuredSlice&) {
                    *latency_out << group << ',' << format_real(x_grid[i]) << ','
                                 << format_real(opt.b) << ",,,cured_slice\n";
                } catch (const EmptyNeighborhood&) {
                    *latency_out << group << ',' << format_real(x_grid[i]) << ','
                                 << format_real(opt.b) << ",,,empty_neighborhood\n";
                }
            }
        }
    }
    return 0;
}

int cmd_benchmark(const std::string& plan_path, const std::string& out_dir, int workers) {
    const auto start = std::chrono::steady_clock::now();
    const BenchmarkPlanFile file = BenchmarkPlanFile::parse(plan_path);
    std::filesystem::create_directories(out_dir);

    std::vector<IncidenceMseReport> mse_reports;
    std::vector<LatencyMiseReport> mise_reports;
    std::vector<BootstrapStudyReport> bootstrap_reports;
    for (std::size_t n : file.plan.sample_sizes) {
        mse_reports.push_back(mc_incidence_mse(file.plan, n, workers));
        if (file.run_mise) mise_reports.push_back(mc_latency_mise(file.plan, n, workers));
        if (file.run_bootstrap)
            bootstrap_reports.push_back(
                mc_bootstrap_bandwidth_study(file.plan, file.config, n, workers));
    }
    write_incidence_mse_csv(out_dir + "/mse.csv", mse_reports);
    if (file.run_mise) write_latency_mise_csv(out_dir + "/mise.csv", mise_reports);
    if (file.run_bootstrap) write_bootstrap_csv(out_dir + "/bootstrap.csv", bootstrap_reports);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json manifest;
    manifest["config"] = file.echo();
    manifest["seed"] = file.plan.master_seed;
    manifest["version"] = kVersion;
    manifest["wall_time_seconds"] = wall;
    std::ofstream mf(out_dir + "/manifest.json");
    if (!mf) throw Error("cannot write manifest.json");
    mf << manifest.dump(2) << '\n';
    return 0;
}

int cmd_diagnose(const std::string& data_path, const std::string& group_filter,
                 const std::string& out_path) {
    const Dataset data = read_dataset(data_path);
    std::vector<std::string> groups = data.has_group ? data.group_labels()
                                                     : std::vector<std::string>{""};
    if (!group_filter.empty()) groups = {group_filter};

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw Error("cannot write '" + out_path + "'");
        out = &file;
    }
    *out << "group,n,censored,censoring_pct,t1max,condition_warning\n";
    for (const std::string& group : groups) {
        SurvivalSample sample = [&]() -> SurvivalSample {
            return data.sample_for(group);
        }();
        std::size_t censored = 0;
        for (const Observation& o : sample.observations())
            if (o.status == 0) ++censored;
        const IdentifiabilityReport report = identifiability_diagnostic(sample);
        *out << group << ',' << sample.size() << ',' << censored << ','
             << format_real(100.0 * static_cast<double>(censored) /
                            static_cast<double>(sample.size()))
             << ',' << (report.t1max ? format_real(*report.t1max) : "") << ','
             << (report.warning ? "1" : "0") << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonparametric mixture cure model estimation toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "generate a benchmark-model dataset");
    int sim_model = 1;
    std::size_t sim_n = 0;
    std::uint64_t sim_seed = 1;
    std::string sim_out = "sample.csv";
    simulate->add_option("--model", sim_model, "benchmark model id")->check(CLI::Range(1, 2));
    simulate->add_option("--n", sim_n, "sample size")->required();
    simulate->add_option("--seed", sim_seed, "master seed");
    simulate->add_option("--out", sim_out, "output CSV path");

    // fit
    auto* fit = app.add_subcommand("fit", "estimate cure probability (and latency)");
    fit->set_help_flag("--help", "print help");  // frees -h/--h for the bandwidth
    FitOptions fopt;
    fit->add_option("--data", fopt.data_path, "dataset CSV")->required();
    fit->add_option("--x-grid", fopt.x_spec, "covariate grid lo:hi:count");
    fit->add_option("--h", fopt.h, "fixed incidence bandwidth");
    fit->add_flag("--select", fopt.select, "bootstrap bandwidth selection per point");
    fit->add_option("--b", fopt.b, "latency bandwidth (enables latency table)");
    fit->add_option("--pilot", fopt.pilot, "pilot rule: global|local")
        ->check(CLI::IsMember({"global", "local"}));
    fit->add_flag("--smooth", fopt.smooth, "smooth selected bandwidths over the grid");
    fit->add_option("--group", fopt.group_filter, "restrict to one group label");
    fit->add_option("--out", fopt.out_dir, "output directory");
    fit->add_option("--seed", fopt.seed, "master seed for the selector");
    fit->add_option("--stage1-resamples", fopt.stage1_resamples, "stage-1 resample count");
    fit->add_option("--stage2-resamples", fopt.stage2_resamples, "stage-2 resample count");
    fit->add_flag("--single-stage", fopt.single_stage, "one-step double search");

    // benchmark
    auto* benchmark = app.add_subcommand("benchmark", "Monte Carlo error study");
    std::string bench_plan, bench_out = ".";
    int bench_workers = 0;
    benchmark->add_option("--plan", bench_plan, "plan JSON file")->required();
    benchmark->add_option("--out", bench_out, "output directory");
    benchmark->add_option("--workers", bench_workers, "worker threads (0 = auto)");

    // diagnose
    auto* diagnose = app.add_subcommand("diagnose", "identifiability / censoring report");
    std::string diag_data, diag_group, diag_out;
    diagnose->add_option("--data", diag_data, "dataset CSV")->required();
    diagnose->add_option("--group", diag_group, "restrict to one group label");
    diagnose->add_option("--out", diag_out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            if (sim_n == 0) {
                std::cerr << "simulate: --n must be positive\n";
                return kExitUsage;
            }
            return cmd_simulate(sim_model, sim_n, sim_seed, sim_out);
        }
        if (fit->parsed()) {
            if (!fopt.select && !(fopt.h > 0.0)) {
                std::cerr << "fit: provide --h or --select\n";
                return kExitUsage;
            }
            return cmd_fit(fopt);
        }
        if (benchmark->parsed()) return cmd_benchmark(bench_plan, bench_out, bench_workers);
        if (diagnose->parsed()) return cmd_diagnose(diag_data, diag_group, diag_out);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}
