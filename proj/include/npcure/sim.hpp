#pragma once

#include <cstdint>
#include <vector>

#include "npcure/bandwidth.hpp"
#include "npcure/rng.hpp"
#include "npcure/sample.hpp"
#include "npcure/truth.hpp"

namespace npcure {

struct ExperimentPlan {
    ModelId model = ModelId::Model1;
    std::vector<std::size_t> sample_sizes{100};
    std::size_t replications = 100;
    std::vector<double> x_grid;       // covariate evaluation points
    std::vector<double> h_grid;       // incidence bandwidths
    std::vector<double> b_grid;       // latency bandwidths
    std::size_t time_grid_points = 512;
    std::uint64_t master_seed = 1;

    // 81 equispaced covariate points, 100 log-spaced bandwidths 1.2..20 for
    // the incidence and 10..40 for the latency.
    static ExperimentPlan defaults(ModelId model);

    void validate() const;
};

// Lifetime draw for an uncured subject (inverse CDF of S0). Exposed for
// distributional checks against the closed-form truth.
double sample_uncured_time(const ModelTruth& truth, double x, Rng& rng);

// n iid draws of (X, T, delta). Cured subjects carry Y = +inf internally and
// always surface as censored observations at their censoring time.
SurvivalSample gen_sample(const ModelTruth& truth, std::size_t n, std::uint64_t seed);

struct IncidenceMseReport {
    std::size_t n = 0;
    std::size_t replications = 0;
    std::vector<double> xs;
    std::vector<double> hs;
    std::vector<double> mse;              // row-major over (x, h)
    std::vector<std::size_t> failures;    // excluded cells per (x, h)

    double at(std::size_t ix, std::size_t ih) const { return mse[ix * hs.size() + ih]; }
    std::size_t oracle_index(std::size_t ix) const;  // argmin over the h grid
};

IncidenceMseReport mc_incidence_mse(const ExperimentPlan& plan, std::size_t n,
                                    int workers = 0);

struct LatencyMiseReport {
    std::size_t n = 0;
    std::size_t replications = 0;
    std::vector<double> xs;
    std::vector<double> bs;
    std::vector<double> mise;             // row-major over (x, b)
    std::vector<std::size_t> failures;

    double at(std::size_t ix, std::size_t ib) const { return mise[ix * bs.size() + ib]; }
};

LatencyMiseReport mc_latency_mise(const ExperimentPlan& plan, std::size_t n,
                                  int workers = 0);

struct BootstrapStudyRow {
    double x = 0.0;
    std::size_t n = 0;
    double q25 = 0.0, median = 0.0, q75 = 0.0;   // bootstrap bandwidth percentiles
    double mse_q25 = 0.0, mse_median = 0.0, mse_q75 = 0.0;
    double h_oracle = 0.0;   // grid minimizer of the Monte Carlo MSE
    double mse_oracle = 0.0;
    std::size_t failures = 0;
};

struct BootstrapStudyReport {
    std::size_t replications = 0;
    std::vector<BootstrapStudyRow> rows;
};

// Per replication and covariate point, run the bootstrap selector; report
// percentiles of the selected bandwidths and the Monte Carlo MSE evaluated
// at those percentiles next to the grid-oracle MSE.
BootstrapStudyReport mc_bootstrap_bandwidth_study(const ExperimentPlan& plan,
                                                  const BootstrapConfig& config,
                                                  std::size_t n, int workers = 0);

// Monte Carlo MSE of the cure probability at a single (x, h), over the
// plan's replications. Shared by the study and the oracle checks.
double mc_mse_at(const ExperimentPlan& plan, std::size_t n, double x, double h,
                 int workers = 0);

}  // namespace npcure
