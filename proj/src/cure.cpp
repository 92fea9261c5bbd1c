#include "npcure/cure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "npcure/errors.hpp"

namespace npcure {

double incidence(const SurvivalSample& sample, double x, double h,
                 const KernelSpec& spec) {
    const detail::LocalWeights lw = detail::sorted_weights(sample, x, h, spec);
    const auto& order = sample.sorted_view();
    double product = 1.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (sample[order[i]].status != 1 || lw.w[i] <= 0.0) continue;
        if (lw.tail[i] <= 0.0) continue;
        product *= std::max(1.0 - lw.w[i] / lw.tail[i], 0.0);
    }
    return product;
}

double latency(const SurvivalSample& sample, double x, double b, double t,
               const KernelSpec& spec) {
    const BeranCurve curve = beran_fit(sample, x, b, spec);
    const double cured = incidence(sample, x, b, spec);
    const double p = 1.0 - cured;
    if (p <= kCuredSliceTolerance) throw CuredSlice(x);
    const double raw = (curve(t) - cured) / p;
    return std::clamp(raw, 0.0, 1.0);
}

CureFit cure_fit(const SurvivalSample& sample, double x, double h, double b,
                 const KernelSpec& spec) {
    CureFit fit;
    fit.center = x;
    fit.incidence_bandwidth = h;
    fit.latency_bandwidth = b;
    fit.cure_probability = incidence(sample, x, h, spec);

    const double cured_b = incidence(sample, x, b, spec);
    const double p_b = 1.0 - cured_b;
    if (p_b <= kCuredSliceTolerance) throw CuredSlice(x);
    fit.latency_curve = beran_fit(sample, x, b, spec);
    fit.latency_curve.bandwidth = b;
    for (double& v : fit.latency_curve.values) {
        const double raw = (v - cured_b) / p_b;
        fit.preclip_min = std::min(fit.preclip_min, raw);
        fit.preclip_max = std::max(fit.preclip_max, raw);
        v = std::clamp(raw, 0.0, 1.0);
    }
    return fit;
}

double local_loglikelihood(const SurvivalSample& sample, double x, double h,
                           std::span<const double> lambdas, const KernelSpec& spec) {
    if (lambdas.size() != sample.size())
        throw DomainError("local_loglikelihood requires one hazard jump per observation");
    const detail::LocalWeights lw = detail::sorted_weights(sample, x, h, spec);
    const auto& order = sample.sorted_view();
    double psi = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const double lambda = lambdas[i];
        if (lambda < 0.0 || lambda > 1.0)
            throw DomainError("hazard jump outside [0, 1]");
        const double d = sample[order[i]].status == 1 ? lw.w[i] : 0.0;
        const double rest = lw.tail[i] - lw.w[i];  // sum_{r > i} of the weights
        if (d > 0.0) {
            if (lambda == 0.0) throw DomainError("zero hazard jump at an uncensored atom");
            psi += d * std::log(lambda);
        }
        if (rest > 0.0) {
            if (lambda == 1.0) return -std::numeric_limits<double>::infinity();
            psi += rest * std::log1p(-lambda);
        }
    }
    return psi;
}

std::vector<double> hazard_jumps(const SurvivalSample& sample, double x, double h,
                                 const KernelSpec& spec) {
    const detail::LocalWeights lw = detail::sorted_weights(sample, x, h, spec);
    const auto& order = sample.sorted_view();
    std::vector<double> jumps(order.size(), 0.0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (sample[order[i]].status != 1 || lw.w[i] <= 0.0) continue;
        // delta_i B_i / (sum_{r>i} B_r + delta_i B_i) reduces to w_i / tail_i
        if (lw.tail[i] <= 0.0) continue;
        jumps[i] = lw.w[i] / lw.tail[i];
    }
    return jumps;
}

IdentifiabilityReport identifiability_diagnostic(const SurvivalSample& sample) {
    IdentifiabilityReport report;
    report.t1max = sample.largest_uncensored_time();
    report.largest_time = 0.0;
    for (const Observation& o : sample.observations())
        report.largest_time = std::max(report.largest_time, o.t);
    if (!report.t1max) {
        report.no_uncensored = true;
        return report;
    }
    for (const Observation& o : sample.observations())
        if (o.status == 0 && o.t > *report.t1max) ++report.censored_beyond;
    report.largest_time_uncensored = report.largest_time <= *report.t1max;
    report.warning = report.censored_beyond == 0;
    return report;
}

}  // namespace npcure
