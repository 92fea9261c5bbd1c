#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "npcure/errors.hpp"
#include "npcure/kernel.hpp"
#include "npcure/numeric.hpp"
#include "npcure/rng.hpp"

using namespace npcure;

TEST_CASE("epanechnikov pointwise values") {
    KernelSpec spec;
    CHECK(kernel_eval(spec, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(kernel_eval(spec, 0.5) == doctest::Approx(0.75 * 0.75).epsilon(1e-15));
    CHECK(kernel_eval(spec, 1.0) == 0.0);
    CHECK(kernel_eval(spec, -1.0) == 0.0);
    CHECK(kernel_eval(spec, 1.5) == 0.0);
    CHECK(kernel_eval(spec, -7.0) == 0.0);
    for (double u = -0.95; u < 1.0; u += 0.1)
        CHECK(kernel_eval(spec, u) == doctest::Approx(kernel_eval(spec, -u)).epsilon(1e-15));
}

TEST_CASE("kernel integrates to one and moments match closed forms") {
    KernelSpec spec;
    const auto k = [&](double u) { return kernel_eval(spec, u); };
    CHECK(integrate(k, -1.0, 1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));

    const KernelConstants kc = kernel_constants(spec);
    const double c_num = integrate([&](double u) { return k(u) * k(u); }, -1.0, 1.0, 1e-12);
    const double d_num = integrate([&](double u) { return u * u * k(u); }, -1.0, 1.0, 1e-12);
    CHECK(kc.c_k == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(kc.d_k == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(kc.c_k == doctest::Approx(c_num).epsilon(1e-10));
    CHECK(kc.d_k == doctest::Approx(d_num).epsilon(1e-10));
}

TEST_CASE("nw weights on identical covariates are uniform") {
    std::vector<double> xs{0.0, 0.0, 0.0};
    for (double h : {0.1, 1.0, 42.0}) {
        const WeightVector w = nw_weights(xs, 0.0, h);
        for (double wi : w.weights) CHECK(wi == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
}

TEST_CASE("nw weights hand example") {
    // xs = (-1, 0, 1), x = 0, h = 1.5: weights proportional to
    // (K(2/3), K(0), K(2/3)).
    std::vector<double> xs{-1.0, 0.0, 1.0};
    const WeightVector w = nw_weights(xs, 0.0, 1.5);
    KernelSpec spec;
    const double a = kernel_eval(spec, 2.0 / 3.0);
    const double b = kernel_eval(spec, 0.0);
    const double total = 2.0 * a + b;
    CHECK(w.weights[0] == doctest::Approx(a / total).epsilon(1e-14));
    CHECK(w.weights[1] == doctest::Approx(b / total).epsilon(1e-14));
    CHECK(w.weights[2] == doctest::Approx(a / total).epsilon(1e-14));
}

TEST_CASE("nw weights random properties") {
    Rng rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0.0, 30.0));
        std::vector<double> xs(n);
        for (double& v : xs) v = rng.uniform(-5.0, 5.0);
        const double x = rng.uniform(-5.0, 5.0);
        const double h = rng.uniform(0.5, 12.0);

        WeightVector w;
        try {
            w = nw_weights(xs, x, h);
        } catch (const EmptyNeighborhood&) {
            for (double xi : xs) CHECK(std::fabs(x - xi) >= h);
            continue;
        }
        double sum = 0.0;
        for (double wi : w.weights) {
            CHECK(wi >= 0.0);
            sum += wi;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

        // translation invariance
        const double c = rng.uniform(-100.0, 100.0);
        std::vector<double> shifted(n);
        for (std::size_t i = 0; i < n; ++i) shifted[i] = xs[i] + c;
        const WeightVector ws = nw_weights(shifted, x + c, h);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(ws.weights[i] == doctest::Approx(w.weights[i]).epsilon(1e-12));
    }
}

TEST_CASE("full-support bandwidth gives strictly positive weights") {
    Rng rng(12);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> xs(10);
        for (double& v : xs) v = rng.uniform(-3.0, 3.0);
        double lo = xs[0], hi = xs[0];
        for (double v : xs) { lo = std::min(lo, v); hi = std::max(hi, v); }
        const double h = 2.0 * (hi - lo) + 1.0;
        const double x = rng.uniform(lo, hi);
        const WeightVector w = nw_weights(xs, x, h);
        for (double wi : w.weights) CHECK(wi > 0.0);
    }
}

TEST_CASE("nw weights domain errors") {
    std::vector<double> xs{0.0, 1.0};
    CHECK_THROWS_AS(nw_weights(xs, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(nw_weights(xs, 0.0, -1.0), DomainError);
    CHECK_THROWS_AS(nw_weights(std::vector<double>{}, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(nw_weights(xs, 100.0, 1.0), EmptyNeighborhood);
}
