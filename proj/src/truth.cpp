#include "npcure/truth.hpp"

#include <cmath>

#include "npcure/errors.hpp"
#include "npcure/numeric.hpp"

namespace npcure {

namespace {

// Model 1 incidence/latency coefficients.
constexpr double kM1Beta0 = 0.476;
constexpr double kM1Beta1 = 0.358;
constexpr double kM1Tau0 = 4.605;

// Model 2 cubic logistic coefficients.
constexpr double kM2Beta0 = 0.0476;
constexpr double kM2Beta1 = -0.2558;
constexpr double kM2Beta2 = -0.0027;
constexpr double kM2Beta3 = 0.0020;

constexpr double kQuadTol = 1e-9;
constexpr double kPhiQuadTol = 1e-12;
constexpr double kCurvatureTol = 1e-8;

double m1_rate(double x) { return std::exp((x + 20.0) / 40.0); }
double m2_alpha(double x) { return std::exp((x + 20.0) / 40.0) / 5.0; }

double logistic(double eta) {
    // numerically stable in both tails
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double linear_predictor(const ModelTruth& truth, double x) {
    if (truth.id == ModelId::Model1) return kM1Beta0 + kM1Beta1 * x;
    return kM2Beta0 + x * (kM2Beta1 + x * (kM2Beta2 + x * kM2Beta3));
}

double one_minus_h(const ModelTruth& truth, double t, double x) {
    return truth.survival(t, x) * truth.censoring_survival(t);
}

// Density of the uncensored observed time: p(x) f0(t|x) (1 - G(t)).
double h1_density(const ModelTruth& truth, double t, double x) {
    return truth.uncured_probability(x) * truth.latency_density(t, x) *
           truth.censoring_survival(t);
}

// Local drift functional whose u-curvature at u = x drives the smoothing
// bias of the cure probability estimate; it vanishes identically at u = x.
double phi(const ModelTruth& truth, double u, double x) {
    const auto integrand = [&](double t) {
        const double denom = one_minus_h(truth, t, x);
        return h1_density(truth, t, u) / denom -
               one_minus_h(truth, t, u) * h1_density(truth, t, x) / (denom * denom);
    };
    return integrate(integrand, 0.0, truth.tau0, kPhiQuadTol);
}

}  // namespace

ModelTruth ModelTruth::model1() {
    ModelTruth truth;
    truth.id = ModelId::Model1;
    truth.tau0 = kM1Tau0;
    return truth;
}

ModelTruth ModelTruth::model2() {
    ModelTruth truth;
    truth.id = ModelId::Model2;
    // Effective support end: smallest t with S0(t | lo) < 1e-12. The heavier
    // mixture component at x = lo dominates the tail.
    double lo = 0.0, hi = 8.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (truth.latency_survival(mid, truth.covariate_lo) < 1e-12) hi = mid;
        else lo = mid;
    }
    truth.tau0 = hi;
    return truth;
}

ModelTruth ModelTruth::from_id(ModelId id) {
    return id == ModelId::Model1 ? model1() : model2();
}

double ModelTruth::uncured_probability(double x) const {
    return logistic(linear_predictor(*this, x));
}

double ModelTruth::uncured_probability_dd(double x) const {
    const double p = uncured_probability(x);
    double eta1, eta2;
    if (id == ModelId::Model1) {
        eta1 = kM1Beta1;
        eta2 = 0.0;
    } else {
        eta1 = kM2Beta1 + x * (2.0 * kM2Beta2 + x * 3.0 * kM2Beta3);
        eta2 = 2.0 * kM2Beta2 + 6.0 * kM2Beta3 * x;
    }
    return p * (1.0 - p) * ((1.0 - 2.0 * p) * eta1 * eta1 + eta2);
}

double ModelTruth::latency_survival(double t, double x) const {
    if (t <= 0.0) return 1.0;
    if (id == ModelId::Model1) {
        if (t > kM1Tau0) return 0.0;
        const double lambda = m1_rate(x);
        return (std::exp(-lambda * t) - std::exp(-lambda * kM1Tau0)) /
               (1.0 - std::exp(-lambda * kM1Tau0));
    }
    const double t5 = std::pow(t, 5.0);
    return 0.5 * (std::exp(-m2_alpha(x) * t5) + std::exp(-100.0 * t5));
}

double ModelTruth::latency_density(double t, double x) const {
    if (t < 0.0) return 0.0;
    if (id == ModelId::Model1) {
        if (t > kM1Tau0) return 0.0;
        const double lambda = m1_rate(x);
        return lambda * std::exp(-lambda * t) / (1.0 - std::exp(-lambda * kM1Tau0));
    }
    const double t4 = std::pow(t, 4.0);
    const double t5 = t4 * t;
    const double alpha = m2_alpha(x);
    return 0.5 * (5.0 * alpha * t4 * std::exp(-alpha * t5) +
                  500.0 * t4 * std::exp(-100.0 * t5));
}

double ModelTruth::survival(double t, double x) const {
    const double p = uncured_probability(x);
    return 1.0 - p + p * latency_survival(t, x);
}

double ModelTruth::censoring_survival(double t) const {
    return t <= 0.0 ? 1.0 : std::exp(-censoring_rate * t);
}

double ModelTruth::censoring_cdf(double t) const { return 1.0 - censoring_survival(t); }

double ModelTruth::covariate_density(double x) const {
    if (x < covariate_lo || x > covariate_hi) return 0.0;
    return 1.0 / (covariate_hi - covariate_lo);
}

double ModelTruth::covariate_density_d(double /*x*/) const { return 0.0; }

double true_incidence(const ModelTruth& truth, double x) {
    return 1.0 - truth.uncured_probability(x);
}

double true_latency(const ModelTruth& truth, double x, double t) {
    return truth.latency_survival(t, x);
}

TrueSubdistributions true_subdistributions(const ModelTruth& truth, double x, double t) {
    TrueSubdistributions out{0.0, 0.0, truth.censoring_cdf(t)};
    if (t <= 0.0) return out;
    out.h = 1.0 - one_minus_h(truth, t, x);
    const double upper = std::min(t, truth.tau0);
    out.h1 = integrate([&](double u) { return h1_density(truth, u, x); }, 0.0, upper,
                       kQuadTol);
    return out;
}

double amse_sigma2(const ModelTruth& truth, double x) {
    const auto integrand = [&](double t) {
        const double denom = one_minus_h(truth, t, x);
        return h1_density(truth, t, x) / (denom * denom);
    };
    return integrate(integrand, 0.0, truth.tau0, kQuadTol) / truth.covariate_density(x);
}

double amse_mu(const ModelTruth& truth, double x) {
    // 0.1% of the covariate range: a step sweep shows the Richardson
    // truncation and quadrature noise both stay below ~1e-8 relative here.
    const double step = 1e-3 * (truth.covariate_hi - truth.covariate_lo);
    const auto phi_u = [&](double u) { return phi(truth, u, x); };
    const double phi_d1 = derivative1(phi_u, x, step);
    const double phi_d2 = derivative2(phi_u, x, step);
    const double m = truth.covariate_density(x);
    return (2.0 * phi_d1 * truth.covariate_density_d(x) + phi_d2 * m) / m;
}

double amse_from_report(const ModelTruth& truth, const AmseReport& report, double h,
                        std::size_t n, const KernelSpec& spec) {
    const KernelConstants kc = kernel_constants(spec);
    const double cure = true_incidence(truth, report.x);
    const double variance =
        cure * cure * kc.c_k * report.sigma2 / (static_cast<double>(n) * h);
    const double bias = 0.5 * h * h * kc.d_k * cure * report.mu;
    return variance + bias * bias;
}

double amse(const ModelTruth& truth, double x, double h, std::size_t n,
            const KernelSpec& spec) {
    AmseReport report;
    report.x = x;
    report.sigma2 = amse_sigma2(truth, x);
    report.mu = amse_mu(truth, x);
    return amse_from_report(truth, report, h, n, spec);
}

AmseReport amse_report(const ModelTruth& truth, double x, std::size_t n,
                       const KernelSpec& spec) {
    const KernelConstants kc = kernel_constants(spec);
    AmseReport report;
    report.x = x;
    report.sigma2 = amse_sigma2(truth, x);
    report.mu = amse_mu(truth, x);
    report.degenerate = std::abs(report.mu) < kCurvatureTol;
    if (!report.degenerate)
        report.h_amse = std::pow(kc.c_k * report.sigma2 / (kc.d_k * kc.d_k * report.mu * report.mu),
                                 0.2) *
                        std::pow(static_cast<double>(n), -0.2);
    return report;
}

double amse_optimal_bandwidth(const ModelTruth& truth, double x, std::size_t n,
                              const KernelSpec& spec) {
    const AmseReport report = amse_report(truth, x, n, spec);
    if (report.degenerate) throw DegenerateCurvature(x);
    return report.h_amse;
}

}  // namespace npcure
