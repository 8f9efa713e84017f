#include <doctest.h>

#include <cmath>

#include "causal_atlas/discovery_ts.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/optimize.hpp"
#include "causal_atlas/simulate.hpp"
#include "causal_atlas/stats.hpp"

using namespace causal_atlas;

namespace {

TemporalGraph lagged_only(int p, std::initializer_list<std::tuple<int, int, int, double>> edges, int max_lag = 1) {
    std::vector<MatrixXd> lags(static_cast<std::size_t>(max_lag), MatrixXd::Zero(p, p));
    for (auto [k, i, j, w] : edges) lags[static_cast<std::size_t>(k - 1)](i, j) = w;
    return TemporalGraph(MatrixXd::Zero(p, p), lags);
}

Dataset run(const TemporalGraph& tg, int n, NoiseKind noise, std::uint64_t seed) {
    TsScenario sc;
    sc.n_nodes = tg.n_nodes();
    sc.n_steps = n;
    sc.noise = noise;
    sc.seed = seed;
    return simulate_temporal(tg, sc);
}

// normal equations solved independently of the QR path
VectorXd normal_equations(const MatrixXd& z, const VectorXd& y) {
    MatrixXd x(z.rows(), z.cols() + 1);
    x.col(0).setOnes();
    x.rightCols(z.cols()) = z;
    return (x.transpose() * x).ldlt().solve(x.transpose() * y);
}

}  // namespace

TEST_CASE("lag design layout") {
    MatrixXd x(5, 2);
    x << 1, 10, 2, 20, 3, 30, 4, 40, 5, 50;
    MatrixXd z = lag_design(x, 2);
    MatrixXd expected(3, 4);
    expected << 2, 20, 1, 10, 3, 30, 2, 20, 4, 40, 3, 30;
    CHECK(z == expected);
}

TEST_CASE("fit_var on white noise and on a scalar AR(1)") {
    Dataset noise = run(lagged_only(3, {}, 1), 3000, NoiseKind::gaussian, 1);
    VarFit w = fit_var(noise, 2);
    CHECK(w.residuals.rows() == 3000 - 2);
    for (const auto& m : w.coefficients) CHECK(m.cwiseAbs().maxCoeff() < 0.08);  // ~4 SE at n=3000
    for (Index j = 0; j < 3; ++j) {
        double tss = (noise.values().col(j).tail(2998).array() - noise.values().col(j).tail(2998).mean()).square().sum();
        CHECK(1.0 - w.rss_per_equation(j) / tss < 0.01);
    }

    // AR(1) with phi 0.8: SE of phi-hat is sqrt((1 - 0.64) / n) = 0.0085 at n=5000
    Dataset ar = run(lagged_only(1, {{1, 0, 0, 0.8}}), 5000, NoiseKind::gaussian, 2);
    VarFit a = fit_var(ar, 1);
    CHECK(std::abs(a.coefficients[0](0, 0) - 0.8) < 4 * 0.0085);

    VectorXd beta = normal_equations(lag_design(ar.values(), 1), ar.values().col(0).tail(4999));
    CHECK(a.intercept(0) == doctest::Approx(beta(0)).epsilon(1e-9));
    CHECK(a.coefficients[0](0, 0) == doctest::Approx(beta(1)).epsilon(1e-9));
}

TEST_CASE("fit_var coefficient convention matches the regression form") {
    TemporalGraph tg = lagged_only(3, {{1, 0, 1, 0.6}, {2, 1, 2, -0.5}}, 2);
    Dataset d = run(tg, 20000, NoiseKind::gaussian, 3);
    VarFit f = fit_var(d, 2);
    CHECK(f.coefficients[0](1, 0) == doctest::Approx(0.6).epsilon(0.05));
    CHECK(f.coefficients[1](2, 1) == doctest::Approx(-0.5).epsilon(0.05));
    CHECK(std::abs(f.coefficients[0](0, 1)) < 0.05);
}

TEST_CASE("fit_var preconditions") {
    Dataset d(MatrixXd::Random(10, 3));
    CHECK_THROWS_AS(fit_var(d, 0), Error);
    try {
        fit_var(d, 2);  // needs more than 3*3+1 = 10 steps
        FAIL("expected InsufficientLength");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientLength);
    }
    CHECK_NOTHROW(fit_var(Dataset(MatrixXd::Random(11, 3)), 2));
}

TEST_CASE("granger F closed form") {
    double f = granger_f_statistic(120.0, 100.0, 2, 105 - 2 * 2 - 1);
    CHECK(std::abs(f - 10.0) <= 1e-9);
    // F(2, d) survival has the closed form (1 + 2x/d)^(-d/2)
    CHECK(std::abs(f_sf(10.0, 2, 100) - std::pow(1.2, -50.0)) <= 1e-15);
    CHECK(granger_f_statistic(100.0, 100.0, 2, 100) == 0.0);
}

TEST_CASE("nested least squares never increases the residual sum") {
    Rng rng = make_rng(4);
    for (int t = 0; t < 200; ++t) {
        MatrixXd z = MatrixXd::Random(60, 6);
        VectorXd y = VectorXd::Random(60) + z.col(static_cast<Index>(rng() % 6));
        int keep = 1 + static_cast<int>(rng() % 5);
        CHECK(ols_rss(z, y) <= ols_rss(z.leftCols(keep), y) + 1e-12);
    }
}

TEST_CASE("granger detects a lagged driver") {
    TemporalGraph tg = lagged_only(2, {{1, 0, 1, 0.8}});
    int reverse = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        Dataset d = run(tg, 2000, NoiseKind::gaussian, s);
        GrangerResult g = granger_pairwise(d, {1, 0.05, false});
        CHECK(g.p_value(0, 1) < 1e-6);
        CHECK(g.graph.has_edge(0, 1));
        reverse += g.graph.has_edge(1, 0);
        CHECK(g.f_statistic(1, 0) >= 0.0);
    }
    CHECK(reverse <= 5);
}

TEST_CASE("granger pairwise is calibrated under independence") {
    // 1000 trials x 2 ordered pairs at alpha 0.05: sd of the rate is 0.0049
    int rejections = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        Dataset d = run(lagged_only(2, {}), 200, NoiseKind::gaussian, 10000 + s);
        rejections += static_cast<int>(granger_pairwise(d, {2, 0.05, false}).graph.edge_count());
    }
    double rate = rejections / 2000.0;
    CHECK(std::abs(rate - 0.05) < 3 * 0.0049);
}

TEST_CASE("multivariate and pairwise agree on two variables") {
    TemporalGraph tg = lagged_only(2, {{1, 0, 1, 0.3}, {1, 1, 1, 0.5}});
    for (std::uint64_t s = 0; s < 10; ++s) {
        Dataset d = run(tg, 500, NoiseKind::gaussian, s);
        GrangerResult a = granger_pairwise(d, {3, 0.05, false});
        GrangerResult b = granger_multivariate(d, {3, 0.05, false});
        CHECK(a.graph == b.graph);
        CHECK(a.f_statistic(0, 1) == doctest::Approx(b.f_statistic(0, 1)).epsilon(1e-9));
        CHECK(a.f_statistic(1, 0) == doctest::Approx(b.f_statistic(1, 0)).epsilon(1e-9));
    }
}

TEST_CASE("multivariate granger conditions away an indirect chain") {
    TemporalGraph tg = lagged_only(3, {{1, 0, 1, 0.8}, {1, 1, 2, 0.8}});
    int pairwise_spurious = 0, multivariate_spurious = 0;
    for (std::uint64_t s = 0; s < 30; ++s) {
        Dataset d = run(tg, 5000, NoiseKind::gaussian, s);
        pairwise_spurious += granger_pairwise(d).graph.has_edge(0, 2);
        multivariate_spurious += granger_multivariate(d).graph.has_edge(0, 2);
    }
    CHECK(pairwise_spurious >= 25);
    CHECK(multivariate_spurious <= 6);
}

TEST_CASE("benjamini-hochberg only removes edges") {
    TsScenario sc;
    sc.n_nodes = 6;
    sc.n_steps = 300;
    auto smp = simulate_timeseries(sc);
    GrangerResult plain = granger_pairwise(smp.data, {3, 0.05, false});
    GrangerResult bh = granger_pairwise(smp.data, {3, 0.05, true});
    CHECK((bh.graph.edges().array() <= plain.graph.edges().array()).all());
}

TEST_CASE("var_lingam lag identity") {
    TsScenario sc;
    sc.n_nodes = 4;
    sc.max_lag = 2;
    sc.noise = NoiseKind::uniform;
    sc.n_steps = 2000;
    auto smp = simulate_timeseries(sc);
    VarLingamResult r = var_lingam_full(smp.data, 2, 0.0);
    MatrixXd i_b0 = MatrixXd::Identity(4, 4) - r.b0;
    for (int k = 1; k <= 2; ++k) {
        MatrixXd expected = i_b0 * r.var.coefficients[static_cast<std::size_t>(k - 1)];
        CHECK((r.graph.lag(k).transpose() - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK((r.graph.intra() - r.b0.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("var_lingam with no instantaneous effects keeps the VAR coefficients") {
    TemporalGraph tg = lagged_only(3, {{1, 0, 1, 0.5}, {1, 2, 0, -0.4}});
    int exact = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        VarLingamResult r = var_lingam_full(run(tg, 3000, NoiseKind::uniform, s), 1, 0.0);
        if (!r.b0.isZero(0.0)) continue;
        ++exact;
        CHECK(r.graph.lag(1).transpose() == r.var.coefficients[0]);
    }
    CHECK(exact >= 7);
}

TEST_CASE("var_lingam recovers instantaneous and lagged edges") {
    MatrixXd w0 = MatrixXd::Zero(2, 2), a1 = MatrixXd::Zero(2, 2);
    w0(0, 1) = 0.8;
    a1(1, 0) = 0.5;
    TemporalGraph tg(w0, {a1});
    int both = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        VarLingamResult r = var_lingam_full(run(tg, 5000, NoiseKind::uniform, s), 1);
        both += r.graph.intra()(0, 1) != 0.0 && r.graph.lag(1)(1, 0) != 0.0;
        CHECK_FALSE(r.low_confidence);
    }
    CHECK(both >= 18);

    VarLingamResult g = var_lingam_full(run(tg, 5000, NoiseKind::gaussian, 1), 1);
    CHECK(g.low_confidence);
}

TEST_CASE("dynotears gradient matches central differences") {
    Rng rng = make_rng(21);
    const Index p = 4, lag = 2, m = p + p * lag;
    for (int t = 0; t < 20; ++t) {
        MatrixXd y = MatrixXd::Random(150, m);
        DynotearsObjective obj;
        obj.gram = y.transpose() * y / 150.0;
        obj.p = p;
        obj.lag = lag;
        obj.lambda_w = 0.05;
        obj.lambda_a = 0.07;
        obj.rho = std::pow(10.0, t % 4);
        obj.alpha = uniform01(rng);
        VectorXd v(2 * p * p + 2 * p * lag * p);
        for (Index i = 0; i < v.size(); ++i) v(i) = 0.3 * uniform01(rng);
        for (Index i = 0; i < p; ++i) v(i * p + i) = v(p * p + i * p + i) = 0;
        VectorXd g;
        obj(v, g);
        VectorXd fd = numeric_gradient(obj, v, 1e-6);
        CHECK((g - fd).norm() / fd.norm() <= 1e-5);
    }
}

TEST_CASE("dynotears objective equals the direct least-squares form") {
    const Index p = 3, lag = 1, n = 80;
    MatrixXd y = MatrixXd::Random(n, p + p * lag);
    DynotearsObjective obj;
    obj.gram = y.transpose() * y / static_cast<double>(n);
    obj.p = p;
    obj.lag = lag;
    obj.rho = 0.0;
    VectorXd v = VectorXd::Random(2 * p * p + 2 * p * p * lag).cwiseAbs();
    for (Index i = 0; i < p; ++i) v(i * p + i) = v(p * p + i * p + i) = 0;
    VectorXd g;
    MatrixXd w = obj.unpack_w(v), a = obj.unpack_a(v);
    MatrixXd x = y.leftCols(p), z = y.rightCols(p * lag);
    double direct = (x - x * w - z * a).squaredNorm() / (2.0 * n) + obj.alpha * notears_h(w);
    CHECK(obj(v, g) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("dynotears finds no instantaneous edges in a purely lagged system") {
    TemporalGraph tg = lagged_only(4, {{1, 0, 1, 0.5}, {1, 1, 2, 0.4}, {2, 3, 0, -0.4}}, 2);
    DynotearsConfig cfg;
    cfg.lag = 2;
    DynotearsResult r = dynotears_full(run(tg, 5000, NoiseKind::gaussian, 5), cfg);
    CHECK(r.graph.intra().isZero(0.0));
    CHECK(r.graph.lag(1)(0, 1) != 0.0);
    CHECK(r.graph.lag(1)(1, 2) != 0.0);
    CHECK(r.graph.lag(2)(3, 0) != 0.0);
    CHECK(r.converged);
}

TEST_CASE("time-series methods reject missing values") {
    MatrixXd x = MatrixXd::Random(100, 3);
    x(5, 1) = std::nan("");
    Dataset d(x);
    CHECK_THROWS_AS(fit_var(d, 1), Error);
    CHECK_THROWS_AS(granger_pairwise(d), Error);
    CHECK_THROWS_AS(dynotears(d), Error);
}
