#include "npcure/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "npcure/beran.hpp"
#include "npcure/cure.hpp"
#include "npcure/errors.hpp"
#include "npcure/parallel.hpp"

namespace npcure {

namespace {

constexpr std::uint64_t kSampleTag = 0x73616d706c65ULL;
constexpr std::uint64_t kSelectTag = 0x73656c656374ULL;

std::uint64_t sample_seed(const ExperimentPlan& plan, std::size_t n, std::size_t rep) {
    return derive_seed(plan.master_seed, {kSampleTag, n, rep});
}

std::vector<double> equispaced(double lo, double hi, std::size_t count) {
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return grid;
}

// Type-7 quantile over an already sorted vector.
double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

ExperimentPlan ExperimentPlan::defaults(ModelId model) {
    ExperimentPlan plan;
    plan.model = model;
    plan.sample_sizes = {50, 100, 200};
    plan.x_grid = equispaced(-20.0, 20.0, 81);
    plan.h_grid = log_spaced_grid(1.2, 20.0, 100);
    plan.b_grid = log_spaced_grid(10.0, 40.0, 100);
    return plan;
}

void ExperimentPlan::validate() const {
    if (replications < 1) throw DomainError("experiment plan requires replications >= 1");
    if (x_grid.empty() || h_grid.empty() || b_grid.empty())
        throw DomainError("experiment plan requires non-empty grids");
    for (double h : h_grid)
        if (!(h > 0.0)) throw DomainError("incidence bandwidth grid must be positive");
    for (double b : b_grid)
        if (!(b > 0.0)) throw DomainError("latency bandwidth grid must be positive");
    if (time_grid_points < 2) throw DomainError("time grid needs at least two points");
    for (std::size_t n : sample_sizes)
        if (n < 1) throw DomainError("sample sizes must be positive");
}

double sample_uncured_time(const ModelTruth& truth, double x, Rng& rng) {
    if (truth.id == ModelId::Model1) {
        const double lambda = std::exp((x + 20.0) / 40.0);
        const double tail = std::exp(-lambda * truth.tau0);
        const double s = rng.uniform();
        return -std::log(s * (1.0 - tail) + tail) / lambda;
    }
    // Exact two-component mixture draw.
    const double component = rng.uniform();
    const double u = rng.uniform();
    const double rate = component < 0.5 ? std::exp((x + 20.0) / 40.0) / 5.0 : 100.0;
    return std::pow(-std::log1p(-u) / rate, 0.2);
}

SurvivalSample gen_sample(const ModelTruth& truth, std::size_t n, std::uint64_t seed) {
    Rng rng = substream(seed, {});
    std::vector<Observation> obs;
    obs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform(truth.covariate_lo, truth.covariate_hi);
        const bool cured = rng.uniform() >= truth.uncured_probability(x);
        const double c = rng.exponential(truth.censoring_rate);
        if (cured) {
            // Y = +inf: the observation is the censoring time, always censored.
            obs.push_back({x, c, 0});
            continue;
        }
        const double y = sample_uncured_time(truth, x, rng);
        obs.push_back({x, std::min(y, c), y <= c ? 1 : 0});
    }
    return SurvivalSample(std::move(obs));
}

std::size_t IncidenceMseReport::oracle_index(std::size_t ix) const {
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t ih = 0; ih < hs.size(); ++ih) {
        const double v = at(ix, ih);
        if (std::isfinite(v) && v < best_val) {
            best_val = v;
            best = ih;
        }
    }
    return best;
}

IncidenceMseReport mc_incidence_mse(const ExperimentPlan& plan, std::size_t n, int workers) {
    plan.validate();
    const ModelTruth truth = ModelTruth::from_id(plan.model);
    const std::size_t nx = plan.x_grid.size();
    const std::size_t nh = plan.h_grid.size();
    const std::size_t cells = nx * nh;
    const std::size_t m = plan.replications;

    // Per-replication squared errors, reduced in replication order so the
    // report does not depend on scheduling.
    std::vector<double> sq(m * cells, std::numeric_limits<double>::quiet_NaN());
    parallel_for(m, workers, [&](std::size_t rep) {
        const SurvivalSample sample = gen_sample(truth, n, sample_seed(plan, n, rep));
        double* row = sq.data() + rep * cells;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = plan.x_grid[ix];
            const double p_true = true_incidence(truth, x);
            for (std::size_t ih = 0; ih < nh; ++ih) {
                try {
                    const double dev = incidence(sample, x, plan.h_grid[ih]) - p_true;
                    row[ix * nh + ih] = dev * dev;
                } catch (const EmptyNeighborhood&) {
                    // excluded cell, counted below
                }
            }
        }
    });

    IncidenceMseReport report;
    report.n = n;
    report.replications = m;
    report.xs = plan.x_grid;
    report.hs = plan.h_grid;
    report.mse.assign(cells, 0.0);
    report.failures.assign(cells, 0);
    for (std::size_t rep = 0; rep < m; ++rep) {
        const double* row = sq.data() + rep * cells;
        for (std::size_t c = 0; c < cells; ++c) {
            if (std::isnan(row[c])) ++report.failures[c];
            else report.mse[c] += row[c];
        }
    }
    for (std::size_t c = 0; c < cells; ++c) {
        const std::size_t valid = m - report.failures[c];
        report.mse[c] = valid > 0 ? report.mse[c] / static_cast<double>(valid)
                                  : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

LatencyMiseReport mc_latency_mise(const ExperimentPlan& plan, std::size_t n, int workers) {
    plan.validate();
    const ModelTruth truth = ModelTruth::from_id(plan.model);
    const std::size_t nx = plan.x_grid.size();
    const std::size_t nb = plan.b_grid.size();
    const std::size_t cells = nx * nb;
    const std::size_t m = plan.replications;
    const std::vector<double> t_grid = equispaced(0.0, truth.tau0, plan.time_grid_points);
    const double dt = t_grid[1] - t_grid[0];

    std::vector<double> ise(m * cells, std::numeric_limits<double>::quiet_NaN());
    parallel_for(m, workers, [&](std::size_t rep) {
        const SurvivalSample sample = gen_sample(truth, n, sample_seed(plan, n, rep));
        double* row = ise.data() + rep * cells;
        const auto t1max = sample.largest_uncensored_time();
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = plan.x_grid[ix];
            for (std::size_t ib = 0; ib < nb; ++ib) {
                try {
                    const BeranCurve curve = beran_fit(sample, x, plan.b_grid[ib]);
                    const double cured = t1max ? curve(*t1max) : 1.0;
                    const double p = 1.0 - cured;
                    if (p <= kCuredSliceTolerance) throw CuredSlice(x);
                    double acc = 0.0;
                    for (std::size_t it = 0; it < t_grid.size(); ++it) {
                        const double est =
                            std::clamp((curve(t_grid[it]) - cured) / p, 0.0, 1.0);
                        const double dev = est - truth.latency_survival(t_grid[it], x);
                        const double w = (it == 0 || it + 1 == t_grid.size()) ? 0.5 : 1.0;
                        acc += w * dev * dev;
                    }
                    row[ix * nb + ib] = acc * dt;
                } catch (const Error&) {
                    // CuredSlice / EmptyNeighborhood: excluded cell
                }
            }
        }
    });

    LatencyMiseReport report;
    report.n = n;
    report.replications = m;
    report.xs = plan.x_grid;
    report.bs = plan.b_grid;
    report.mise.assign(cells, 0.0);
    report.failures.assign(cells, 0);
    for (std::size_t rep = 0; rep < m; ++rep) {
        const double* row = ise.data() + rep * cells;
        for (std::size_t c = 0; c < cells; ++c) {
            if (std::isnan(row[c])) ++report.failures[c];
            else report.mise[c] += row[c];
        }
    }
    for (std::size_t c = 0; c < cells; ++c) {
        const std::size_t valid = m - report.failures[c];
        report.mise[c] = valid > 0 ? report.mise[c] / static_cast<double>(valid)
                                   : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

double mc_mse_at(const ExperimentPlan& plan, std::size_t n, double x, double h,
                 int workers) {
    const ModelTruth truth = ModelTruth::from_id(plan.model);
    const double p_true = true_incidence(truth, x);
    const std::size_t m = plan.replications;
    std::vector<double> sq(m, std::numeric_limits<double>::quiet_NaN());
    parallel_for(m, workers, [&](std::size_t rep) {
        const SurvivalSample sample = gen_sample(truth, n, sample_seed(plan, n, rep));
        try {
            const double dev = incidence(sample, x, h) - p_true;
            sq[rep] = dev * dev;
        } catch (const EmptyNeighborhood&) {
        }
    });
    double sum = 0.0;
    std::size_t valid = 0;
    for (double v : sq)
        if (!std::isnan(v)) {
            sum += v;
            ++valid;
        }
    return valid > 0 ? sum / static_cast<double>(valid)
                     : std::numeric_limits<double>::quiet_NaN();
}

BootstrapStudyReport mc_bootstrap_bandwidth_study(const ExperimentPlan& plan,
                                                  const BootstrapConfig& config,
                                                  std::size_t n, int workers) {
    plan.validate();
    const ModelTruth truth = ModelTruth::from_id(plan.model);
    const std::size_t nx = plan.x_grid.size();
    const std::size_t m = plan.replications;

    std::vector<double> selected(m * nx, std::numeric_limits<double>::quiet_NaN());
    parallel_for(m * nx, workers, [&](std::size_t item) {
        const std::size_t rep = item / nx;
        const std::size_t ix = item % nx;
        const SurvivalSample sample = gen_sample(truth, n, sample_seed(plan, n, rep));
        BootstrapConfig local = config;
        local.master_seed = derive_seed(plan.master_seed, {kSelectTag, n, rep, ix});
        try {
            selected[item] = select_bandwidth(sample, plan.x_grid[ix], local).selected;
        } catch (const Error&) {
            // excluded replicate, counted below
        }
    });

    const IncidenceMseReport grid_mse = mc_incidence_mse(plan, n, workers);

    BootstrapStudyReport report;
    report.replications = m;
    report.rows.reserve(nx);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        BootstrapStudyRow row;
        row.x = plan.x_grid[ix];
        row.n = n;
        std::vector<double> hs;
        hs.reserve(m);
        for (std::size_t rep = 0; rep < m; ++rep) {
            const double v = selected[rep * nx + ix];
            if (std::isnan(v)) ++row.failures;
            else hs.push_back(v);
        }
        std::sort(hs.begin(), hs.end());
        row.q25 = quantile(hs, 0.25);
        row.median = quantile(hs, 0.50);
        row.q75 = quantile(hs, 0.75);
        row.mse_q25 = mc_mse_at(plan, n, row.x, row.q25, workers);
        row.mse_median = mc_mse_at(plan, n, row.x, row.median, workers);
        row.mse_q75 = mc_mse_at(plan, n, row.x, row.q75, workers);
        const std::size_t oracle = grid_mse.oracle_index(ix);
        row.h_oracle = grid_mse.hs[oracle];
        row.mse_oracle = grid_mse.at(ix, oracle);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace npcure
