#pragma once

#include <cstddef>

#include "npcure/kernel.hpp"

namespace npcure {

enum class ModelId { Model1 = 1, Model2 = 2 };

// Closed-form truth for the two simulation benchmarks: logistic-exponential
// (Model 1) and cubic-logistic Weibull-type mixture (Model 2). Censoring is
// exponential with mean 1/0.3 and the covariate is uniform on (-20, 20) in
// both models.
struct ModelTruth {
    ModelId id = ModelId::Model1;
    double censoring_rate = 0.3;
    double covariate_lo = -20.0;
    double covariate_hi = 20.0;
    // Upper end of the latency support: exact for Model 1, effective (the
    // point where S0(t | lo) falls below 1e-12) for Model 2.
    double tau0 = 0.0;

    static ModelTruth model1();
    static ModelTruth model2();
    static ModelTruth from_id(ModelId id);

    double uncured_probability(double x) const;      // p(x)
    double uncured_probability_dd(double x) const;   // closed-form p''(x)
    double latency_survival(double t, double x) const;   // S0(t|x)
    double latency_density(double t, double x) const;    // f0(t|x)
    double survival(double t, double x) const;           // 1 - p + p S0
    double censoring_survival(double t) const;
    double censoring_cdf(double t) const;
    double covariate_density(double x) const;    // m(x)
    double covariate_density_d(double x) const;  // m'(x)
};

// Cure probability 1 - p(x).
double true_incidence(const ModelTruth& truth, double x);
double true_latency(const ModelTruth& truth, double x, double t);

struct TrueSubdistributions {
    double h;   // H(t|x) = P(T <= t | x)
    double h1;  // H1(t|x) = P(T <= t, delta = 1 | x)
    double g;   // censoring CDF
};

// H from the product identity 1 - H = S * (1 - G); H1 by adaptive quadrature
// of the uncensored-failure density.
TrueSubdistributions true_subdistributions(const ModelTruth& truth, double x, double t);

struct AmseReport {
    double x = 0.0;
    double mu = 0.0;
    double sigma2 = 0.0;
    double h_amse = 0.0;  // 0 when the curvature term vanishes
    bool degenerate = false;
};

double amse_sigma2(const ModelTruth& truth, double x);
double amse_mu(const ModelTruth& truth, double x);

// Asymptotic MSE of the cure probability estimate at (x, h, n):
// variance (1-p)^2 c_K sigma^2 / (n h) plus squared bias (h^2 d_K (1-p) mu / 2)^2.
double amse(const ModelTruth& truth, double x, double h, std::size_t n,
            const KernelSpec& spec = {});

// Same expansion reusing precomputed mu and sigma^2 (grid sweeps).
double amse_from_report(const ModelTruth& truth, const AmseReport& report, double h,
                        std::size_t n, const KernelSpec& spec = {});

AmseReport amse_report(const ModelTruth& truth, double x, std::size_t n,
                       const KernelSpec& spec = {});

// (c_K sigma^2 / (d_K^2 mu^2))^(1/5) n^(-1/5).
// Throws DegenerateCurvature when |mu(x)| < 1e-8.
double amse_optimal_bandwidth(const ModelTruth& truth, double x, std::size_t n,
                              const KernelSpec& spec = {});

}  // namespace npcure
