#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "npcure/errors.hpp"
#include "npcure/parallel.hpp"
#include "npcure/rng.hpp"
#include "npcure/sim.hpp"

using namespace npcure;

TEST_CASE("substream derivation is order-free and well spread") {
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
    CHECK(derive_seed(1, {}) != derive_seed(2, {}));
    Rng a = substream(7, {1, 2});
    Rng b = substream(7, {1, 2});
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
    // uniform() lies in [0, 1)
    Rng c(99);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 2,
                                 [](std::size_t i) {
                                     if (i == 5) throw DomainError("boom");
                                 }),
                    DomainError);
}

TEST_CASE("generated samples are clean and reproducible") {
    const ModelTruth m1 = ModelTruth::model1();
    const SurvivalSample s = gen_sample(m1, 500, 77);
    REQUIRE(s.size() == 500);
    for (const Observation& o : s.observations()) {
        CHECK(std::isfinite(o.t));
        CHECK(o.t >= 0.0);
        CHECK((o.status == 0 || o.status == 1));
        CHECK(o.x >= -20.0);
        CHECK(o.x <= 20.0);
    }
    const SurvivalSample s2 = gen_sample(m1, 500, 77);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s2[i].x == s[i].x);
        CHECK(s2[i].t == s[i].t);
        CHECK(s2[i].status == s[i].status);
    }
}

TEST_CASE("samples nest: a prefix draw is unchanged by extending n") {
    const ModelTruth m1 = ModelTruth::model1();
    const SurvivalSample small = gen_sample(m1, 250, 123);
    const SurvivalSample big = gen_sample(m1, 4000, 123);
    for (std::size_t i = 0; i < small.size(); ++i) {
        CHECK(big[i].x == small[i].x);
        CHECK(big[i].t == small[i].t);
        CHECK(big[i].status == small[i].status);
    }
}

TEST_CASE("censoring fractions match the models") {
    // Model 1: 54% censored; Model 2: 62% (checked at +-1 point).
    const SurvivalSample s1 = gen_sample(ModelTruth::model1(), 100000, 9);
    const double c1 = 1.0 - double(s1.uncensored_count()) / double(s1.size());
    CHECK(c1 > 0.53);
    CHECK(c1 < 0.55);
    const SurvivalSample s2 = gen_sample(ModelTruth::model2(), 100000, 9);
    const double c2 = 1.0 - double(s2.uncensored_count()) / double(s2.size());
    CHECK(c2 > 0.61);
    CHECK(c2 < 0.63);
}

TEST_CASE("uncured lifetimes follow the latency law (kolmogorov-smirnov)") {
    for (ModelId id : {ModelId::Model1, ModelId::Model2}) {
        const ModelTruth truth = ModelTruth::from_id(id);
        for (double x : {-10.0, 3.0}) {
            Rng rng(61);
            const int n = 10000;
            std::vector<double> draws(n);
            for (double& d : draws) d = sample_uncured_time(truth, x, rng);
            std::sort(draws.begin(), draws.end());
            double ks = 0.0;
            for (int i = 0; i < n; ++i) {
                const double cdf = 1.0 - truth.latency_survival(draws[i], x);
                ks = std::max(ks, std::fabs(cdf - (i + 1.0) / n));
                ks = std::max(ks, std::fabs(cdf - double(i) / n));
            }
            // 1.63 / sqrt(n) is the 1% Kolmogorov critical value
            CHECK(ks < 1.63 / std::sqrt(double(n)));
        }
    }
}

TEST_CASE("covariates are uniform on (-20, 20) (kolmogorov-smirnov)") {
    const SurvivalSample s = gen_sample(ModelTruth::model1(), 10000, 62);
    std::vector<double> xs = s.covariates();
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double cdf = (xs[i] + 20.0) / 40.0;
        ks = std::max(ks, std::fabs(cdf - (i + 1.0) / xs.size()));
        ks = std::max(ks, std::fabs(cdf - double(i) / xs.size()));
    }
    CHECK(ks < 1.63 / std::sqrt(double(xs.size())));
}

TEST_CASE("monte carlo reports are worker-count invariant") {
    ExperimentPlan plan = ExperimentPlan::defaults(ModelId::Model1);
    plan.x_grid = {-5.0, 5.0};
    plan.h_grid = {3.0, 6.0, 12.0};
    plan.b_grid = {10.0, 20.0};
    plan.replications = 30;
    plan.time_grid_points = 64;
    plan.master_seed = 2024;

    const IncidenceMseReport a = mc_incidence_mse(plan, 60, 1);
    const IncidenceMseReport b = mc_incidence_mse(plan, 60, 4);
    const IncidenceMseReport c = mc_incidence_mse(plan, 60, 8);
    REQUIRE(a.mse.size() == b.mse.size());
    for (std::size_t i = 0; i < a.mse.size(); ++i) {
        CHECK(a.mse[i] == b.mse[i]);
        CHECK(a.mse[i] == c.mse[i]);
        CHECK(a.failures[i] == b.failures[i]);
        if (a.failures[i] < a.replications) {
            CHECK(std::isfinite(a.mse[i]));
            CHECK(a.mse[i] >= 0.0);
        }
    }

    const LatencyMiseReport la = mc_latency_mise(plan, 60, 1);
    const LatencyMiseReport lb = mc_latency_mise(plan, 60, 8);
    for (std::size_t i = 0; i < la.mise.size(); ++i) {
        CHECK(la.mise[i] == lb.mise[i]);
        if (la.failures[i] < la.replications) CHECK(la.mise[i] >= 0.0);
    }
}

TEST_CASE("bootstrap bandwidth study is deterministic and consistent") {
    ExperimentPlan plan = ExperimentPlan::defaults(ModelId::Model1);
    plan.x_grid = {0.0};
    plan.h_grid = log_spaced_grid(1.2, 20.0, 30);
    plan.replications = 12;
    plan.master_seed = 5;
    BootstrapConfig config;
    config.stage1_resamples = 20;
    config.stage2_resamples = 50;

    const BootstrapStudyReport a = mc_bootstrap_bandwidth_study(plan, config, 50, 1);
    const BootstrapStudyReport b = mc_bootstrap_bandwidth_study(plan, config, 50, 8);
    REQUIRE(a.rows.size() == 1);
    CHECK(a.rows[0].q25 == b.rows[0].q25);
    CHECK(a.rows[0].median == b.rows[0].median);
    CHECK(a.rows[0].q75 == b.rows[0].q75);
    CHECK(a.rows[0].mse_median == b.rows[0].mse_median);
    CHECK(a.rows[0].q25 <= a.rows[0].median);
    CHECK(a.rows[0].median <= a.rows[0].q75);
    CHECK(a.rows[0].mse_oracle > 0.0);
    CHECK(a.rows[0].h_oracle > 0.0);

    // mc_mse_at agrees with the corresponding grid cell
    const IncidenceMseReport grid = mc_incidence_mse(plan, 50, 4);
    for (std::size_t ih = 0; ih < grid.hs.size(); ih += 7)
        CHECK(mc_mse_at(plan, 50, 0.0, grid.hs[ih], 4) ==
              doctest::Approx(grid.at(0, ih)).epsilon(1e-12));
}

TEST_CASE("experiment plan validation") {
    ExperimentPlan plan = ExperimentPlan::defaults(ModelId::Model2);
    CHECK_NOTHROW(plan.validate());
    CHECK(plan.x_grid.size() == 81);
    CHECK(plan.h_grid.size() == 100);
    CHECK(plan.h_grid.front() == doctest::Approx(1.2));
    CHECK(plan.h_grid.back() == doctest::Approx(20.0));
    CHECK(plan.b_grid.front() == doctest::Approx(10.0));
    CHECK(plan.b_grid.back() == doctest::Approx(40.0));
    plan.replications = 0;
    CHECK_THROWS_AS(plan.validate(), DomainError);
}
