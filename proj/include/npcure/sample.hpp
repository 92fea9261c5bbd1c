#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace npcure {

struct Observation {
    double x = 0.0;   // covariate
    double t = 0.0;   // observed time, >= 0
    int status = 0;   // 0 censored, 1 uncensored
};

// Immutable right-censored sample with a canonical ordering: time ascending,
// uncensored before censored at tied times, covariate ascending as the final
// tie-breaker. Ties in time are measure-zero under an absolutely continuous
// model but do occur in real CSV data.
class SurvivalSample {
  public:
    explicit SurvivalSample(std::vector<Observation> observations);

    std::size_t size() const { return obs_.size(); }
    const std::vector<Observation>& observations() const { return obs_; }
    const Observation& operator[](std::size_t i) const { return obs_[i]; }

    // Permutation of [0, n) realizing the canonical ordering.
    const std::vector<std::size_t>& sorted_view() const { return order_; }

    // Covariates in original order (for weights, pilots, resampling).
    const std::vector<double>& covariates() const { return xs_; }

    // Covariates in canonical order (hot path of the product estimators).
    const std::vector<double>& sorted_covariates() const { return xs_sorted_; }

    double covariate_min() const { return x_min_; }
    double covariate_max() const { return x_max_; }

    // T^1_max; empty when no observation is uncensored.
    std::optional<double> largest_uncensored_time() const { return t1max_; }

    std::size_t uncensored_count() const { return uncensored_; }

  private:
    std::vector<Observation> obs_;
    std::vector<std::size_t> order_;
    std::vector<double> xs_;
    std::vector<double> xs_sorted_;
    std::optional<double> t1max_;
    std::size_t uncensored_ = 0;
    double x_min_ = 0.0;
    double x_max_ = 0.0;
};

}  // namespace npcure
