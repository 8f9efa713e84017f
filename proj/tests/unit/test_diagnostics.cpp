#include <doctest.h>

#include <cmath>

#include "causal_atlas/diagnostics.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/random.hpp"
#include "causal_atlas/simulate.hpp"
#include "causal_atlas/stats.hpp"

using namespace causal_atlas;

namespace {

const double nan_v = std::nan("");

Dataset with_domains(const Dataset& d, int n_domains) {
    IntVector dom(d.n_samples());
    for (Index i = 0; i < d.n_samples(); ++i) dom(i) = static_cast<int>(i * n_domains / d.n_samples());
    return d.with_domain_index(dom);
}

Dataset random_walks(int p, int n, std::uint64_t seed, bool integrate) {
    Rng rng = make_rng(seed);
    MatrixXd x(n, p);
    for (int j = 0; j < p; ++j) {
        VectorXd e = sample_noise(NoiseKind::gaussian, 1.0, n, rng);
        double acc = 0.0;
        for (int t = 0; t < n; ++t) x(t, j) = integrate ? (acc += e(t)) : e(t);
    }
    return Dataset(x);
}

}  // namespace

TEST_CASE("infer_schema level rule") {
    MatrixXd x(30, 3);
    for (int i = 0; i < 30; ++i) {
        x(i, 0) = 5 + i % 3;        // 3 levels, relabelled to 0..2
        x(i, 1) = 0.5 * i;          // real valued
        x(i, 2) = i % 15;           // 15 integer levels
    }
    x(4, 0) = nan_v;
    SchemaResult s = infer_schema(Dataset(x));
    CHECK(s.data.column(0).kind == ColumnKind::discrete);
    CHECK(s.data.column(0).cardinality == 3);
    CHECK(s.levels[0] == std::vector<double>{5, 6, 7});
    CHECK(s.data.values()(0, 0) == 0.0);
    CHECK(std::isnan(s.data.values()(4, 0)));
    CHECK(s.data.column(1).kind == ColumnKind::continuous);
    CHECK(s.data.column(2).kind == ColumnKind::continuous);
    CHECK_THROWS_AS(infer_schema(Dataset(MatrixXd(0, 2))), Error);
}

TEST_CASE("impute strategies") {
    MatrixXd x(3, 2);
    x << 1, 0, nan_v, 1, 3, nan_v;
    Dataset d(x);
    Dataset m = impute(d);
    CHECK(m.values()(1, 0) == 2.0);
    CHECK(m.n_columns() == 2);

    Dataset clean(MatrixXd::Ones(4, 2));
    CHECK(impute(clean) == clean);

    // discrete mode with a tie keeps the smaller label
    MatrixXd c(5, 1);
    c << 2, 1, 2, 1, nan_v;
    Dataset dd(c, {{"c", ColumnKind::discrete, 3}});
    CHECK(impute(dd).values()(4, 0) == 1.0);

    MatrixXd allmiss = MatrixXd::Constant(3, 2, nan_v);
    allmiss.col(0).setOnes();
    try {
        impute(Dataset(allmiss));
        FAIL("expected AllMissingColumn");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllMissingColumn);
    }
}

TEST_CASE("drop_rows removes exactly the incomplete rows") {
    TabularScenario s;
    s.missing_rate = 0.3;
    s.n_nodes = 3;
    auto smp = simulate_tabular(s);
    int incomplete = 0;
    for (Index i = 0; i < smp.data.n_samples(); ++i) incomplete += smp.data.values().row(i).array().isNaN().any();
    Dataset out = impute(smp.data, ImputeStrategy::drop_rows);
    CHECK(out.n_samples() == smp.data.n_samples() - incomplete);
    CHECK_FALSE(out.has_missing());
    // P(row complete) = 0.7^3 = 0.343 with 1000 rows: sd 15
    CHECK(std::abs(out.n_samples() - 343.0) < 4 * 15.0);
}

TEST_CASE("drop_constant") {
    MatrixXd x = MatrixXd::Random(20, 3);
    x.col(1).setConstant(4.0);
    DropConstantResult r = drop_constant(Dataset(x));
    CHECK(r.removed == std::vector<std::string>{"X1"});
    CHECK(r.data.n_columns() == 2);
    CHECK(r.data.n_samples() == 20);
    Dataset fine(MatrixXd::Random(20, 2));
    CHECK(drop_constant(fine).data == fine);
    CHECK_THROWS_AS(drop_constant(Dataset(MatrixXd::Ones(5, 2))), Error);
}

TEST_CASE("linearity verdicts") {
    Rng rng = make_rng(1);
    const int n = 2000;
    VectorXd x = sample_noise(NoiseKind::uniform, 1.0, n, rng) * 1.7;
    MatrixXd lin(n, 2), sine(n, 2);
    lin.col(0) = x;
    lin.col(1) = 2 * x + sample_noise(NoiseKind::gaussian, 0.5, n, rng);
    sine.col(0) = x;
    sine.col(1) = (3 * x).array().sin().matrix() + sample_noise(NoiseKind::gaussian, 0.1, n, rng);
    LinearityResult a = test_linearity(Dataset(lin));
    CHECK(a.verdict == Linearity::linear);
    CHECK(a.median_gain < 0.01);
    LinearityResult b = test_linearity(Dataset(sine));
    CHECK(b.verdict == Linearity::nonlinear);
    CHECK(b.median_gain > 0.1);
    CHECK(test_linearity(Dataset(MatrixXd::Random(500, 4))).verdict == Linearity::linear);
    CHECK(test_linearity(Dataset(MatrixXd::Random(50, 1))).verdict == Linearity::unknown);
}

TEST_CASE("gaussian noise verdicts") {
    int gaussian = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        TabularScenario sc;
        sc.n_samples = 2000;
        sc.seed = s;
        gaussian += test_gaussian_noise(simulate_tabular(sc).data).verdict == NoiseVerdict::gaussian;
        sc.noise = NoiseKind::exponential;
        CHECK(test_gaussian_noise(simulate_tabular(sc).data).verdict == NoiseVerdict::non_gaussian);
    }
    CHECK(gaussian >= 18);
}

TEST_CASE("jarque-bera statistic from sample moments") {
    Rng rng = make_rng(2);
    VectorXd g = sample_noise(NoiseKind::gaussian, 1.0, 100000, rng);
    JbResult r = jarque_bera(g);
    double s = skewness(g), k = excess_kurtosis(g);
    CHECK(r.statistic == doctest::Approx(100000.0 / 6 * (s * s + k * k / 4)).epsilon(1e-12));
}

TEST_CASE("adf separates random walks from white noise") {
    CHECK(adf_lag_count(2000) == 25);
    CHECK(adf_lag_count(100) == 12);
    int walk_ns = 0, noise_st = 0;
    for (std::uint64_t s = 0; s < 30; ++s) {
        walk_ns += !adf_test(random_walks(1, 2000, s, true).values().col(0)).stationary;
        noise_st += adf_test(random_walks(1, 2000, s + 100, false).values().col(0)).stationary;
    }
    CHECK(walk_ns >= 27);
    CHECK(noise_st >= 27);

    AdfResult c = adf_test(VectorXd::Constant(500, 3.0));
    CHECK(c.degenerate);
    CHECK(c.stationary);
    try {
        adf_test(VectorXd::Random(20));
        FAIL("expected SeriesTooShort");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SeriesTooShort);
    }
}

TEST_CASE("estimate_lag picks the generating order") {
    int one = 0, three = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        MatrixXd a1 = MatrixXd::Zero(3, 3), a3 = MatrixXd::Zero(3, 3);
        a1(0, 1) = 0.6;
        a1(1, 1) = 0.5;
        a1(2, 0) = -0.5;
        TsScenario sc;
        sc.n_nodes = 3;
        sc.n_steps = 3000;
        sc.seed = s;
        one += estimate_lag(simulate_temporal(TemporalGraph(MatrixXd::Zero(3, 3), {a1}), sc), 5) == 1;
        a3(1, 2) = 0.5;
        a3(2, 0) = 0.4;
        three += estimate_lag(simulate_temporal(TemporalGraph(MatrixXd::Zero(3, 3), {a1, MatrixXd::Zero(3, 3), a3}), sc), 5) == 3;
    }
    CHECK(one >= 18);
    CHECK(three >= 16);
    CHECK(estimate_lag(random_walks(2, 100, 1, false), 1) == 1);
    CHECK_THROWS_AS(estimate_lag(random_walks(3, 10, 1, false), 3), Error);
}

TEST_CASE("heterogeneity needs a domain index and detects shifts") {
    TabularScenario s;
    s.n_domains = 5;
    s.domain_shift = 1.0;
    int detected = 0, false_alarm = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        s.seed = seed;
        detected += test_heterogeneity(simulate_tabular(s).data).heterogeneous.value();
        TabularScenario plain;
        plain.seed = seed;
        false_alarm += test_heterogeneity(with_domains(simulate_tabular(plain).data, 5)).heterogeneous.value();
    }
    CHECK(detected >= 9);
    CHECK(false_alarm <= 2);
    CHECK_FALSE(test_heterogeneity(Dataset(MatrixXd::Random(100, 3))).heterogeneous.has_value());
}

TEST_CASE("density proxy separates sparse and dense graphs") {
    double sparse = 0, dense = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        TabularScenario s;
        s.seed = seed;
        sparse += *estimate_density(simulate_tabular(s).data);
        s.edge_prob = 0.5;
        dense += *estimate_density(simulate_tabular(s).data);
    }
    CHECK(sparse / 5 < kDenseThreshold);
    CHECK(dense / 5 > kDenseThreshold);
}

TEST_CASE("profile routing, hints and determinism") {
    TabularScenario s;
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        s.seed = seed;
        DatasetProfile p = profile_dataset(simulate_tabular(s).data);
        agree += p.linearity == Linearity::linear && p.gaussian_noise == NoiseVerdict::gaussian &&
                 !p.heterogeneous.has_value();
        CHECK_FALSE(p.stationary.has_value());
    }
    CHECK(agree >= 8);

    Dataset d = simulate_tabular(s).data;
    ProfileHints h;
    h.linearity = Linearity::nonlinear;
    DatasetProfile hinted = profile_dataset(d, h);
    CHECK(hinted.linearity == Linearity::nonlinear);
    CHECK(to_json(profile_dataset(d, {}, 3)) == to_json(profile_dataset(d, {}, 3)));

    TsScenario ts;
    ts.n_nodes = 4;
    DatasetProfile tp = profile_dataset(simulate_timeseries(ts).data);
    CHECK(tp.data_kind == DataKind::time_series);
    CHECK(tp.stationary.has_value());
    CHECK(tp.suggested_lag.has_value());
    CHECK_FALSE(tp.density.has_value());
    CHECK(tp.linearity == Linearity::linear);
    CHECK(profile_from_json(to_json(tp)).suggested_lag == tp.suggested_lag);
    CHECK(to_json(profile_from_json(to_json(tp))) == to_json(tp));
    CHECK(to_json(hints_from_json(to_json(h))) == to_json(h));
}

TEST_CASE("jarque-bera is zero at zero skew and normal kurtosis") {
    // m2 = 12/12 = 1, m4 = 36/12 = 3
    VectorXd v(12);
    v << -2, 2, -1, -1, 1, 1, 0, 0, 0, 0, 0, 0;
    JbResult r = jarque_bera(v);
    CHECK(std::abs(r.statistic) <= 1e-12);
    CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-12));
}
