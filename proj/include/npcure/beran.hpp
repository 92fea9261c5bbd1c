#pragma once

#include <cstddef>
#include <vector>

#include "npcure/kernel.hpp"
#include "npcure/rng.hpp"
#include "npcure/sample.hpp"

namespace npcure {

// Conditional survival step function at a fixed covariate point.
// Right-continuous; value 1 before the first jump.
struct BeranCurve {
    double center = 0.0;
    double bandwidth = 0.0;
    std::vector<double> jump_times;  // strictly increasing uncensored times
    std::vector<double> values;      // survival value after each jump

    double operator()(double t) const;
};

// Generalized (covariate-weighted) Kaplan-Meier product estimator.
BeranCurve beran_fit(const SurvivalSample& sample, double x, double h,
                     const KernelSpec& spec = {});

// Conditional cumulative hazard at t.
double cumulative_hazard(const SurvivalSample& sample, double x, double h, double t,
                         const KernelSpec& spec = {});

// Weighted conditional empirical law over the observed (t, delta) pairs;
// mass of pair i is the NW weight of observation i at x with bandwidth g.
struct ConditionalEmpirical {
    double center = 0.0;
    double bandwidth = 0.0;
    std::vector<double> cumulative;  // over original observation order

    double mass(std::size_t i) const {
        return i == 0 ? cumulative[0] : cumulative[i] - cumulative[i - 1];
    }
    // Index of the drawn (t, delta) atom.
    std::size_t draw(Rng& rng) const;
};

ConditionalEmpirical conditional_empirical(const SurvivalSample& sample, double x, double g,
                                           const KernelSpec& spec = {});

struct SubDistributions {
    double h;   // weighted empirical P(T <= t | x)
    double h1;  // weighted empirical P(T <= t, delta = 1 | x)
};

SubDistributions subdistribution_estimates(const SurvivalSample& sample, double x, double h,
                                           double t, const KernelSpec& spec = {});

namespace detail {

// NW weights in canonical (time-sorted) order with suffix sums
// tail[i] = sum_{r >= i} w[r]. Shared hot path of the product estimators.
struct LocalWeights {
    std::vector<double> w;
    std::vector<double> tail;
};

LocalWeights sorted_weights(const SurvivalSample& sample, double x, double h,
                            const KernelSpec& spec);

}  // namespace detail

}  // namespace npcure
