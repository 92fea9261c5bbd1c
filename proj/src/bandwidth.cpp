#include "npcure/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "npcure/beran.hpp"
#include "npcure/cure.hpp"
#include "npcure/errors.hpp"
#include "npcure/rng.hpp"

namespace npcure {

namespace {

constexpr std::uint64_t kStage1Tag = 0x73746167652d3160ULL;
constexpr std::uint64_t kStage2Tag = 0x73746167652d3261ULL;
constexpr int kMaxResampleAttempts = 10;

// One conditional law per observation; covariates never change, so the laws
// are shared by every bootstrap replicate.
std::vector<ConditionalEmpirical> resampling_laws(const SurvivalSample& sample,
                                                  const PilotRule& pilot,
                                                  const KernelSpec& spec) {
    std::vector<ConditionalEmpirical> laws;
    laws.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double x_i = sample[i].x;
        laws.push_back(conditional_empirical(sample, x_i, pilot.bandwidth_at(sample, x_i), spec));
    }
    return laws;
}

SurvivalSample draw_resample(const SurvivalSample& sample,
                             const std::vector<ConditionalEmpirical>& laws, Rng& rng) {
    std::vector<Observation> obs;
    obs.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const std::size_t j = laws[i].draw(rng);
        obs.push_back({sample[i].x, sample[j].t, sample[j].status});
    }
    return SurvivalSample(std::move(obs));
}

}  // namespace

std::vector<double> log_spaced_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("bandwidth grid requires 0 < lo < hi");
    if (count < 2) throw DomainError("bandwidth grid requires at least two points");
    std::vector<double> grid(count);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                     static_cast<double>(count - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

double PilotRule::bandwidth_at(const SurvivalSample& sample, double x) const {
    if (kind == PilotKind::GlobalUniform) return pilot_global(sample);
    const std::size_t kk =
        k > 0 ? k : static_cast<std::size_t>(std::llround(static_cast<double>(sample.size()) / 4.0));
    return pilot_local(sample, x, std::max<std::size_t>(kk, 1));
}

double pilot_global(const SurvivalSample& sample) {
    const std::size_t n = sample.size();
    if (n < 2) throw DegenerateCovariate("pilot_global requires n >= 2");
    const double range = sample.covariate_max() - sample.covariate_min();
    if (range <= 0.0) throw DegenerateCovariate("pilot_global requires a positive covariate range");
    return range / std::pow(10.0, 7.0 / 9.0) * std::pow(static_cast<double>(n), -1.0 / 9.0);
}

double pilot_local(const SurvivalSample& sample, double x, std::size_t k) {
    const std::size_t n = sample.size();
    if (n < 2) throw DegenerateCovariate("pilot_local requires n >= 2");
    if (k < 1) throw DomainError("pilot_local requires k >= 1");
    std::vector<double> right, left;
    for (double xi : sample.covariates()) {
        if (xi > x) right.push_back(xi - x);
        else if (xi < x) left.push_back(x - xi);
    }
    auto kth = [k](std::vector<double>& d) -> double {
        std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
        return d[k - 1];
    };
    const bool has_right = right.size() >= k;
    const bool has_left = left.size() >= k;
    if (!has_right && !has_left)
        throw DegenerateCovariate("pilot_local: fewer than k neighbors on both sides");
    const double d_right = has_right ? kth(right) : 0.0;
    const double d_left = has_left ? kth(left) : 0.0;
    const double dp = has_right ? d_right : d_left;
    const double dm = has_left ? d_left : d_right;
    return 0.5 * (dp + dm) * std::pow(100.0, 1.0 / 9.0) *
           std::pow(static_cast<double>(n), -1.0 / 9.0);
}

SurvivalSample bootstrap_resample(const SurvivalSample& sample, const PilotRule& pilot,
                                  std::uint64_t seed, const KernelSpec& spec) {
    const auto laws = resampling_laws(sample, pilot, spec);
    Rng rng = substream(seed, {});
    return draw_resample(sample, laws, rng);
}

double bootstrap_mse(const SurvivalSample& sample, double x, double h, double g,
                     std::size_t resamples, std::uint64_t seed, const KernelSpec& spec) {
    if (resamples < 1) throw DomainError("bootstrap_mse requires at least one resample");
    std::vector<ConditionalEmpirical> laws;
    laws.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        laws.push_back(conditional_empirical(sample, sample[i].x, g, spec));
    const double p_pilot = incidence(sample, x, g, spec);
    double sum = 0.0;
    for (std::size_t b = 0; b < resamples; ++b) {
        bool done = false;
        for (int attempt = 0; attempt < kMaxResampleAttempts && !done; ++attempt) {
            Rng rng = substream(seed, {b, static_cast<std::uint64_t>(attempt)});
            const SurvivalSample resample = draw_resample(sample, laws, rng);
            try {
                const double cured = incidence(resample, x, h, spec);
                const double dev = cured - p_pilot;
                sum += dev * dev;
                done = true;
            } catch (const Error&) {
                if (attempt + 1 == kMaxResampleAttempts) throw;
            }
        }
    }
    return sum / static_cast<double>(resamples);
}

namespace {

StageSearch run_search(const SurvivalSample& original,
                       const std::vector<SurvivalSample>& resamples, double x,
                       double p_pilot, std::vector<double> grid, const KernelSpec& spec,
                       std::size_t& skipped_total) {
    StageSearch search;
    search.grid = std::move(grid);
    search.mse.assign(search.grid.size(), std::numeric_limits<double>::quiet_NaN());
    search.skipped.assign(search.grid.size(), false);
    bool any = false;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < search.grid.size(); ++l) {
        const double h = search.grid[l];
        // Neighborhood emptiness depends on the covariates only, which every
        // resample shares with the original sample.
        try {
            (void)nw_weights(original.covariates(), x, h, spec);
        } catch (const EmptyNeighborhood&) {
            search.skipped[l] = true;
            ++skipped_total;
            continue;
        }
        double sum = 0.0;
        for (const SurvivalSample& resample : resamples) {
            const double dev = incidence(resample, x, h, spec) - p_pilot;
            sum += dev * dev;
        }
        search.mse[l] = sum / static_cast<double>(resamples.size());
        if (search.mse[l] < best) {
            best = search.mse[l];
            search.argmin = l;
            any = true;
        }
    }
    if (!any)
        throw EmptyNeighborhood(x, search.grid.front());
    return search;
}

}  // namespace

BandwidthSearch select_bandwidth(const SurvivalSample& sample, double x,
                                 const BootstrapConfig& config, const KernelSpec& spec) {
    if (config.stage1_resamples < 1 || config.stage2_resamples < 1 ||
        config.stage1_grid_size < 2 || config.stage2_grid_size < 2)
        throw DomainError("invalid bootstrap configuration");
    if (!(config.range_lo > 0.0) || !(config.range_hi > config.range_lo))
        throw DomainError("invalid bootstrap bandwidth range");

    BandwidthSearch result;
    result.center = x;
    result.pilot = config.pilot.bandwidth_at(sample, x);
    const double p_pilot = incidence(sample, x, result.pilot, spec);
    const auto laws = resampling_laws(sample, config.pilot, spec);

    auto draw_stage = [&](std::size_t count, std::uint64_t tag) {
        std::vector<SurvivalSample> resamples;
        resamples.reserve(count);
        for (std::size_t b = 0; b < count; ++b) {
            Rng rng = substream(config.master_seed, {tag, b});
            resamples.push_back(draw_resample(sample, laws, rng));
        }
        return resamples;
    };

    // Each refinement is log-equispaced over [h/rho, h*rho] with rho the
    // adjacent-point ratio of the previous grid, so it brackets the previous
    // minimizer and shrinks geometrically.
    auto refine = [](const std::vector<double>& prev, double center, std::size_t count) {
        const double rho = prev[1] / prev[0];
        return log_spaced_grid(center / rho, center * rho, count);
    };

    const std::size_t coarse_grid = config.stage1_grid_size;
    const std::size_t fine_grid = config.single_stage ? config.stage1_grid_size
                                                      : config.stage2_grid_size;
    const std::size_t stage1_b = config.single_stage ? config.stage2_resamples
                                                     : config.stage1_resamples;

    const auto stage1 = draw_stage(stage1_b, kStage1Tag);
    result.searches.push_back(run_search(sample, stage1, x, p_pilot,
                                         log_spaced_grid(config.range_lo, config.range_hi, coarse_grid),
                                         spec, result.skipped_bandwidths));
    result.searches.push_back(run_search(
        sample, stage1, x, p_pilot,
        refine(result.searches[0].grid, result.searches[0].grid[result.searches[0].argmin],
               coarse_grid),
        spec, result.skipped_bandwidths));

    if (!config.single_stage) {
        const auto stage2 = draw_stage(config.stage2_resamples, kStage2Tag);
        result.searches.push_back(run_search(
            sample, stage2, x, p_pilot,
            refine(result.searches[1].grid, result.searches[1].grid[result.searches[1].argmin],
                   fine_grid),
            spec, result.skipped_bandwidths));
        result.searches.push_back(run_search(
            sample, stage2, x, p_pilot,
            refine(result.searches[2].grid, result.searches[2].grid[result.searches[2].argmin],
                   fine_grid),
            spec, result.skipped_bandwidths));
    }

    const StageSearch& last = result.searches.back();
    result.selected = last.grid[last.argmin];
    result.boundary = last.argmin == 0 || last.argmin + 1 == last.grid.size();
    return result;
}

std::vector<double> smooth_bandwidths(std::span<const double> hs) {
    if (hs.size() < 11) throw GridTooSmall("bandwidth smoothing requires at least 11 grid points");
    const std::size_t m = hs.size() - 1;
    std::vector<double> out(hs.size());
    for (std::size_t l = 0; l <= m; ++l) {
        std::size_t lo, hi, divisor;
        if (l <= 4) {
            lo = 0;
            hi = l + 5;
            divisor = l + 6;
        } else if (l <= m - 5) {
            lo = l - 5;
            hi = l + 5;
            divisor = 11;
        } else {
            lo = l - 5;
            hi = m;
            divisor = m - l + 6;
        }
        double sum = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) sum += hs[j];
        out[l] = sum / static_cast<double>(divisor);
    }
    return out;
}

}  // namespace npcure
