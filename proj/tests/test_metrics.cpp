#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "shimr/metrics.hpp"
#include "shimr/rng.hpp"

using namespace shimr;

namespace {

// Minimal final state with given opinions and a weight rule.
template <typename WeightFn>
RunResult synthetic_run(const std::vector<double>& opinions, int num_influencers,
                        WeightFn&& weight_of) {
    RunResult run;
    run.cfg.agents = static_cast<int>(opinions.size());
    run.cfg.influencer_opinions.assign(num_influencers, -1.0);
    run.final_opinions = opinions;
    run.final_weights = WeightMatrix(run.cfg.agents);
    for (int m = 0; m < run.cfg.agents; ++m)
        for (int n = 0; n < run.cfg.agents; ++n)
            if (m != n) run.final_weights.set(m, n, weight_of(m, n));
    return run;
}

}  // namespace

TEST_CASE("histogram: edge conventions and conservation") {
    std::vector<double> one = {0.5};
    Histogram h = build_histogram(one, 0.0, 1.0, 2);
    REQUIRE(h.counts.size() == 2);
    CHECK(h.counts[0] == 0);
    CHECK(h.counts[1] == 1);  // interior edges close on the right
    CHECK(h.total == 1);

    std::vector<double> spill = {-5.0, 0.25, 1.0, 7.0};
    h = build_histogram(spill, 0.0, 1.0, 4);
    CHECK(h.counts[0] == 1);  // -5 clamps into the first bin
    CHECK(h.counts[1] == 1);
    CHECK(h.counts[3] == 2);  // 1.0 and 7.0 land in the last bin
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), 0LL) == 4);

    std::vector<double> equal(100, 0.3);
    h = build_histogram(equal, 0.0, 1.0, 10);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), 0LL) == 100);
    // 0.3 sits just below the computed edge 3*0.1 = 0.30000000000000004
    CHECK(h.counts[2] == 100);
    std::vector<double> on_edge(5, 0.25);
    h = build_histogram(on_edge, 0.0, 1.0, 4);
    CHECK(h.counts[1] == 5);  // exactly on an edge: upper bin

    std::vector<double> empty;
    h = build_histogram(empty, 0.0, 1.0, 5);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), 0LL) == 0);
    for (double d : h.density) CHECK(d == 0.0);
}

TEST_CASE("histogram: densities integrate to one") {
    RngStream rng(3);
    std::vector<double> samples(5000);
    for (double& x : samples) x = rng.next_normal();
    Histogram h = build_histogram(samples, -4.0, 4.0, 37);
    double integral = 0.0;
    for (double d : h.density) integral += d * h.bin_width();
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("histogram: uniform samples fill bins within 4 sigma") {
    RngStream rng(17);
    std::vector<double> samples(1000);
    for (double& x : samples) x = rng.next_uniform();
    Histogram h = build_histogram(samples, 0.0, 1.0, 10);
    double sigma = std::sqrt(1000 * 0.1 * 0.9);
    for (long long c : h.counts) CHECK(std::abs(c - 100.0) <= 4.0 * sigma);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), 0LL) == 1000);
}

TEST_CASE("histogram rejects bad shapes") {
    std::vector<double> samples = {0.1};
    CHECK_THROWS_AS(build_histogram(samples, 0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_histogram(samples, 1.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("correlation: exact linear anti-correlation gives -1") {
    RngStream rng(5);
    std::vector<double> opinions(30);
    for (double& o : opinions) o = rng.next_uniform() * 2.0 - 1.0;
    RunResult run = synthetic_run(opinions, 0, [&](int m, int n) {
        return 1.0 - std::abs(opinions[m] - opinions[n]) / 2.0;
    });
    auto r = weight_opinion_correlation(run.final_opinions, run.final_weights, 0);
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("correlation: zero-variance samples are reported missing") {
    RngStream rng(6);
    std::vector<double> opinions(10);
    for (double& o : opinions) o = rng.next_uniform();
    RunResult run = synthetic_run(opinions, 0, [](int, int) { return 0.42; });
    CHECK(!weight_opinion_correlation(run.final_opinions, run.final_weights, 0).has_value());

    // constant opinions degenerate the other axis
    std::vector<double> flat(10, 0.3);
    RunResult run2 = synthetic_run(flat, 0, [&rng](int, int) { return rng.next_uniform(); });
    CHECK(!weight_opinion_correlation(run2.final_opinions, run2.final_weights, 0)
               .has_value());
}

TEST_CASE("correlation: influencer pairs are excluded by default") {
    std::vector<double> opinions = {-1.0, 1.0, 0.1, -0.2, 0.4, 0.3};
    RngStream rng(7);
    RunResult run =
        synthetic_run(opinions, 2, [&rng](int, int) { return rng.next_uniform(); });
    CorrelationOptions with;
    with.include_influencers = true;
    auto excluded = weight_opinion_correlation(run.final_opinions, run.final_weights, 2);
    auto included =
        weight_opinion_correlation(run.final_opinions, run.final_weights, 2, with);
    REQUIRE(excluded.has_value());
    REQUIRE(included.has_value());
    CHECK(*excluded != *included);
}

TEST_CASE("correlation: invariant under agent relabeling") {
    RngStream rng(8);
    const int n_agents = 12;
    std::vector<double> opinions(n_agents);
    for (double& o : opinions) o = rng.next_uniform() * 2.0 - 1.0;
    std::vector<std::vector<double>> w(n_agents, std::vector<double>(n_agents));
    for (auto& row : w)
        for (double& x : row) x = rng.next_uniform();

    RunResult base = synthetic_run(opinions, 0, [&](int m, int n) { return w[m][n]; });
    std::vector<int> perm(n_agents);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::vector<double> perm_opinions(n_agents);
    for (int i = 0; i < n_agents; ++i) perm_opinions[perm[i]] = opinions[i];
    RunResult relabeled = synthetic_run(perm_opinions, 0, [&](int m, int n) {
        // find original labels
        int om = static_cast<int>(std::find(perm.begin(), perm.end(), m) - perm.begin());
        int on = static_cast<int>(std::find(perm.begin(), perm.end(), n) - perm.begin());
        return w[om][on];
    });
    auto r1 = weight_opinion_correlation(base.final_opinions, base.final_weights, 0);
    auto r2 = weight_opinion_correlation(relabeled.final_opinions, relabeled.final_weights, 0);
    REQUIRE(r1.has_value());
    REQUIRE(r2.has_value());
    CHECK(*r1 == doctest::Approx(*r2).epsilon(1e-12));
}

TEST_CASE("correlation recovers the analytic value of a noisy construction") {
    RngStream rng(9);
    const int n_agents = 320;  // ~1e5 directed pairs
    const double slope = -0.35, intercept = 0.8, noise = 0.05;
    std::vector<double> opinions(n_agents);
    for (double& o : opinions) o = rng.next_uniform() * 2.0 - 1.0;

    std::vector<double> xs, ys;
    RunResult run = synthetic_run(opinions, 0, [&](int m, int n) {
        double x = std::abs(opinions[m] - opinions[n]);
        double y = std::clamp(slope * x + intercept + noise * rng.next_normal(), 0.0, 1.0);
        xs.push_back(x);
        ys.push_back(y);
        return y;
    });
    auto r = weight_opinion_correlation(run.final_opinions, run.final_weights, 0);
    REQUIRE(r.has_value());

    double var_x = 0.0, mean_x = 0.0;
    for (double x : xs) mean_x += x;
    mean_x /= xs.size();
    for (double x : xs) var_x += (x - mean_x) * (x - mean_x);
    var_x /= xs.size();
    double expected = slope * std::sqrt(var_x) /
                      std::sqrt(slope * slope * var_x + noise * noise);
    CHECK(*r == doctest::Approx(expected).epsilon(0.03));
    CHECK(*r < -0.5);
}

TEST_CASE("pooled correlation: single and duplicated runs collapse to the run value") {
    RngStream rng(10);
    std::vector<double> opinions(20);
    for (double& o : opinions) o = rng.next_uniform() * 2.0 - 1.0;
    RunResult run = synthetic_run(opinions, 0, [&rng](int, int) { return rng.next_uniform(); });

    EnsembleSummary single = pooled_correlation({run});
    REQUIRE(single.pooled_r.has_value());
    REQUIRE(single.run_r.size() == 1);
    CHECK(*single.pooled_r == *single.run_r[0]);
    CHECK(*single.run_r_mean == *single.run_r[0]);

    EnsembleSummary twice = pooled_correlation({run, run});
    CHECK(*twice.pooled_r == doctest::Approx(*single.pooled_r).epsilon(1e-12));
    CHECK(*twice.run_r_std == 0.0);
}

TEST_CASE("pooled correlation: run order does not matter") {
    RngStream rng(11);
    std::vector<RunResult> runs;
    for (int i = 0; i < 4; ++i) {
        std::vector<double> opinions(15);
        for (double& o : opinions) o = rng.next_uniform() * 2.0 - 1.0;
        runs.push_back(
            synthetic_run(opinions, 0, [&rng](int, int) { return rng.next_uniform(); }));
    }
    EnsembleSummary fwd = pooled_correlation(runs);
    std::reverse(runs.begin(), runs.end());
    EnsembleSummary rev = pooled_correlation(runs);
    REQUIRE(fwd.pooled_r.has_value());
    REQUIRE(rev.pooled_r.has_value());
    CHECK(*fwd.pooled_r == doctest::Approx(*rev.pooled_r).epsilon(1e-12));
    CHECK(fwd.opinion_mean == doctest::Approx(rev.opinion_mean).epsilon(1e-12));
}

TEST_CASE("pooled moments match direct computation") {
    RngStream rng(12);
    std::vector<RunResult> runs;
    std::vector<double> all;
    for (int i = 0; i < 3; ++i) {
        std::vector<double> opinions(25);
        for (double& o : opinions) o = rng.next_uniform() * 1.6 - 0.8;
        for (std::size_t a = 1; a < opinions.size(); ++a) all.push_back(opinions[a]);
        RunResult run =
            synthetic_run(opinions, 1, [&rng](int, int) { return rng.next_uniform(); });
        runs.push_back(run);
    }
    EnsembleSummary summary = pooled_correlation(runs);

    double mean = 0.0;
    for (double o : all) mean += o;
    mean /= all.size();
    double var = 0.0, m3 = 0.0, mean_abs = 0.0;
    for (double o : all) {
        var += (o - mean) * (o - mean);
        m3 += (o - mean) * (o - mean) * (o - mean);
        mean_abs += std::abs(o);
    }
    var /= all.size();
    m3 /= all.size();
    mean_abs /= all.size();

    CHECK(summary.opinion_mean == doctest::Approx(mean).epsilon(1e-10));
    CHECK(summary.opinion_variance == doctest::Approx(var).epsilon(1e-9));
    CHECK(summary.opinion_skewness ==
          doctest::Approx(m3 / std::pow(var, 1.5)).epsilon(1e-8));
    CHECK(summary.mean_abs_opinion == doctest::Approx(mean_abs).epsilon(1e-12));
    CHECK(pooled_final_opinions(runs).size() == all.size());
}
