#pragma once

#include <optional>
#include <span>
#include <vector>

#include "npcure/beran.hpp"
#include "npcure/kernel.hpp"
#include "npcure/sample.hpp"

namespace npcure {

// Cure probability 1 - p_hat_h(x): the Beran product over the full sample,
// which equals the Beran curve at the largest uncensored time. Returns 1
// when the sample has no uncensored observation (empty product).
double incidence(const SurvivalSample& sample, double x, double h,
                 const KernelSpec& spec = {});

// Conditional survival of the uncured, (S_b(t|x) - (1 - p_b(x))) / p_b(x),
// clipped to [0, 1]. Throws CuredSlice when p_b(x) is numerically zero.
double latency(const SurvivalSample& sample, double x, double b, double t,
               const KernelSpec& spec = {});

inline constexpr double kCuredSliceTolerance = 1e-10;

struct CureFit {
    double center = 0.0;
    double incidence_bandwidth = 0.0;
    double latency_bandwidth = 0.0;
    double cure_probability = 0.0;  // 1 - p_hat_h(x)
    BeranCurve latency_curve;       // clipped to [0, 1]
    double preclip_min = 1.0;       // extremes of the latency values before clipping
    double preclip_max = 1.0;
};

CureFit cure_fit(const SurvivalSample& sample, double x, double h, double b,
                 const KernelSpec& spec = {});

// Local log-likelihood Psi over conditional hazard jumps, with the
// conventions 0*log(0) = 0 and a -inf value when an impossible jump gets
// positive mass against positive remaining weight.
double local_loglikelihood(const SurvivalSample& sample, double x, double h,
                           std::span<const double> lambdas, const KernelSpec& spec = {});

// Maximizers of the local log-likelihood; the running product of (1 - jump)
// reproduces the Beran curve values.
std::vector<double> hazard_jumps(const SurvivalSample& sample, double x, double h,
                                 const KernelSpec& spec = {});

struct IdentifiabilityReport {
    std::optional<double> t1max;          // undefined without uncensored data
    double largest_time = 0.0;
    std::size_t censored_beyond = 0;      // censored observations with t > t1max
    bool largest_time_uncensored = false; // full-support incidence estimate is 0
    bool no_uncensored = false;           // incidence is identically 1
    bool warning = false;                 // no censored mass beyond t1max
};

// Empirical check of the support condition that makes censored subjects
// beyond the largest uncensored time identifiable as cured.
IdentifiabilityReport identifiability_diagnostic(const SurvivalSample& sample);

}  // namespace npcure
