#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "npcure/kernel.hpp"
#include "npcure/sample.hpp"

namespace npcure {

// Strictly increasing grid of candidate bandwidths, equispaced on a
// logarithmic scale.
std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count);

enum class PilotKind { GlobalUniform, LocalKNN };

struct PilotRule {
    PilotKind kind = PilotKind::GlobalUniform;
    std::size_t k = 0;  // LocalKNN neighbor count; 0 means round(n / 4)

    double bandwidth_at(const SurvivalSample& sample, double x) const;
};

// Global pilot (X_(n) - X_(1)) / 10^(7/9) * n^(-1/9).
double pilot_global(const SurvivalSample& sample);

// Local k-NN pilot ((d_k^+ + d_k^-) / 2) * 100^(1/9) * n^(-1/9); a missing
// side borrows the other side's distance.
double pilot_local(const SurvivalSample& sample, double x, std::size_t k);

struct BootstrapConfig {
    std::size_t stage1_resamples = 80;
    std::size_t stage2_resamples = 1000;
    std::size_t stage1_grid_size = 21;
    std::size_t stage2_grid_size = 5;
    double range_lo = 0.2;   // simulation default; data work uses the covariate range
    double range_hi = 50.0;
    PilotRule pilot;
    std::uint64_t master_seed = 1;
    bool single_stage = false;  // one-step double search (real-data workflow)
};

// Resample (T*, delta*) from the weighted conditional empirical law at each
// X_i, keeping the covariates fixed.
SurvivalSample bootstrap_resample(const SurvivalSample& sample, const PilotRule& pilot,
                                  std::uint64_t seed, const KernelSpec& spec = {});

// Monte Carlo bootstrap MSE of the cure probability estimate at (x, h)
// against the pilot-bandwidth estimate on the original sample.
double bootstrap_mse(const SurvivalSample& sample, double x, double h, double g,
                     std::size_t resamples, std::uint64_t seed, const KernelSpec& spec = {});

struct StageSearch {
    std::vector<double> grid;
    std::vector<double> mse;        // NaN where the bandwidth was skipped
    std::vector<bool> skipped;      // empty neighborhood at (x, h)
    std::size_t argmin = 0;
};

struct BandwidthSearch {
    double center = 0.0;
    double selected = 0.0;
    double pilot = 0.0;
    std::vector<StageSearch> searches;
    bool boundary = false;             // argmin hit an endpoint of the final grid
    std::size_t skipped_bandwidths = 0;
    std::size_t rejected_resamples = 0;
};

// Two-step double grid search minimizing the bootstrap MSE. Resamples are
// shared across every bandwidth within a stage (common random numbers).
BandwidthSearch select_bandwidth(const SurvivalSample& sample, double x,
                                 const BootstrapConfig& config, const KernelSpec& spec = {});

// Moving-average smoothing of per-point bandwidths over an equispaced
// covariate grid x_0..x_m; requires m >= 10.
std::vector<double> smooth_bandwidths(std::span<const double> hs);

}  // namespace npcure
