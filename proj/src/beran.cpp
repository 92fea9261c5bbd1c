#include "npcure/beran.hpp"

#include <algorithm>
#include <cmath>

#include "npcure/errors.hpp"

namespace npcure {

namespace detail {

LocalWeights sorted_weights(const SurvivalSample& sample, double x, double h,
                            const KernelSpec& spec) {
    WeightVector wv = nw_weights(sample.sorted_covariates(), x, h, spec);
    LocalWeights lw;
    lw.w = std::move(wv.weights);
    const std::size_t n = lw.w.size();
    lw.tail.resize(n);
    double run = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        run += lw.w[i];
        lw.tail[i] = run;
    }
    return lw;
}

}  // namespace detail

double BeranCurve::operator()(double t) const {
    // first jump time strictly greater than t
    const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    if (it == jump_times.begin()) return 1.0;
    return values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

BeranCurve beran_fit(const SurvivalSample& sample, double x, double h,
                     const KernelSpec& spec) {
    const detail::LocalWeights lw = detail::sorted_weights(sample, x, h, spec);
    const auto& order = sample.sorted_view();
    const std::size_t n = order.size();

    BeranCurve curve;
    curve.center = x;
    curve.bandwidth = h;
    double survival = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Observation& o = sample[order[i]];
        if (o.status != 1 || lw.w[i] <= 0.0) continue;
        // A zero suffix sum carries no information: the factor is 1.
        if (lw.tail[i] <= 0.0) continue;
        const double factor = 1.0 - lw.w[i] / lw.tail[i];
        survival *= std::max(factor, 0.0);
        if (!curve.jump_times.empty() && curve.jump_times.back() == o.t) {
            curve.values.back() = survival;
        } else {
            curve.jump_times.push_back(o.t);
            curve.values.push_back(survival);
        }
    }
    return curve;
}

double cumulative_hazard(const SurvivalSample& sample, double x, double h, double t,
                         const KernelSpec& spec) {
    const detail::LocalWeights lw = detail::sorted_weights(sample, x, h, spec);
    const auto& order = sample.sorted_view();
    double hazard = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Observation& o = sample[order[i]];
        if (o.t > t) break;
        if (o.status != 1 || lw.w[i] <= 0.0 || lw.tail[i] <= 0.0) continue;
        hazard += lw.w[i] / lw.tail[i];
    }
    return hazard;
}

std::size_t ConditionalEmpirical::draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(i, cumulative.size() - 1);
}

ConditionalEmpirical conditional_empirical(const SurvivalSample& sample, double x, double g,
                                           const KernelSpec& spec) {
    const WeightVector wv = nw_weights(sample.covariates(), x, g, spec);
    ConditionalEmpirical law;
    law.center = x;
    law.bandwidth = g;
    law.cumulative.resize(wv.weights.size());
    double run = 0.0;
    for (std::size_t i = 0; i < wv.weights.size(); ++i) {
        run += wv.weights[i];
        law.cumulative[i] = run;
    }
    return law;
}

SubDistributions subdistribution_estimates(const SurvivalSample& sample, double x, double h,
                                           double t, const KernelSpec& spec) {
    const WeightVector wv = nw_weights(sample.covariates(), x, h, spec);
    SubDistributions out{0.0, 0.0};
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (sample[i].t > t) continue;
        out.h += wv.weights[i];
        if (sample[i].status == 1) out.h1 += wv.weights[i];
    }
    return out;
}

}  // namespace npcure
