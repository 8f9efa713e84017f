#include <doctest.h>

#include <cmath>

#include "causal_atlas/ci_tests.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/random.hpp"
#include "causal_atlas/simulate.hpp"
#include "support/oracles.hpp"

using namespace causal_atlas;

namespace {

MatrixXd gaussian(Index n, Index p, Rng& rng) {
    MatrixXd m(n, p);
    for (Index j = 0; j < p; ++j) m.col(j) = sample_noise(NoiseKind::gaussian, 1.0, n, rng);
    return m;
}

Dataset discrete_uniform(Index n, Index p, int card, Rng& rng) {
    std::uniform_int_distribution<int> d(0, card - 1);
    MatrixXd m(n, p);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
    std::vector<ColumnMeta> cols;
    for (Index j = 0; j < p; ++j) cols.push_back({"D" + std::to_string(j), ColumnKind::discrete, card});
    return Dataset(m, cols);
}

}  // namespace

TEST_CASE("partial correlation closed forms") {
    // chain X -> Y -> Z with unit coefficients and unit noise: Var = 1, 2, 3
    MatrixXd cov(3, 3);
    cov << 1, 1, 1, 1, 2, 2, 1, 2, 3;
    MatrixXd corr(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) corr(a, b) = cov(a, b) / std::sqrt(cov(a, a) * cov(b, b));
    CHECK(corr(0, 2) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
    SufficientStats s{corr, 1000};
    CHECK(partial_correlation(s, 0, 2, {}) == corr(0, 2));
    CHECK(std::abs(partial_correlation(s, 0, 2, {1})) <= 1e-9);
    CHECK(std::abs(partial_correlation(s, 2, 0, {1})) <= 1e-9);

    // identical columns clamp without error
    Rng rng = make_rng(1);
    MatrixXd x = gaussian(50, 1, rng);
    MatrixXd dup(50, 2);
    dup << x, x;
    SufficientStats d = sufficient_stats(dup);
    CHECK(partial_correlation(d, 0, 1, {}) == 1.0 - 1e-12);
    CHECK(std::isfinite(fisher_z_test(d, 0, 1, {}).statistic));

    // singular conditioning submatrix
    MatrixXd three(50, 3);
    three << x, x, gaussian(50, 1, rng);
    SufficientStats t = sufficient_stats(three);
    CHECK_THROWS_AS(partial_correlation(t, 0, 2, {1}), Error);
    CiResult r = fisher_z_test(t, 0, 2, {1});
    CHECK_FALSE(r.reliable);
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
}

TEST_CASE("fisher z closed forms") {
    CiResult zero = fisher_z_from_r(0.0, 100, 0);
    CHECK(zero.statistic == 0.0);
    CHECK(zero.p_value == 1.0);
    CiResult two = fisher_z_from_r(std::tanh(0.2), 103, 0);
    CHECK(std::abs(two.statistic - 2.0) <= 1e-9);
    // 2 * (1 - Phi(2)) at 30 digits: 0.0455002638963584144
    CHECK(std::abs(two.p_value - 0.04550026389635842) <= 1e-9);
    CiResult few = fisher_z_from_r(0.5, 4, 1);
    CHECK_FALSE(few.reliable);
    CHECK(few.p_value == 1.0);
}

TEST_CASE("fisher z is symmetric and affine invariant") {
    Rng rng = make_rng(2);
    MatrixXd x = gaussian(500, 4, rng);
    x.col(1) += 0.3 * x.col(0);
    x.col(2) += 0.2 * x.col(1);
    SufficientStats s = sufficient_stats(x);
    MatrixXd y = x;
    y.col(0) = 3.5 * y.col(0).array() + 7.0;
    y.col(2) = 0.01 * y.col(2).array() - 2.0;
    SufficientStats s2 = sufficient_stats(y);
    for (auto cond : std::vector<std::vector<int>>{{}, {1}, {1, 3}}) {
        CiResult a = fisher_z_test(s, 0, 2, cond), b = fisher_z_test(s, 2, 0, cond), c = fisher_z_test(s2, 0, 2, cond);
        CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-12));
        CHECK(a.p_value == doctest::Approx(c.p_value).epsilon(1e-9));
    }
}

TEST_CASE("fisher z type-I calibration") {
    Rng rng = make_rng(3);
    int rej05 = 0, rej01 = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        MatrixXd x = gaussian(1000, 3, rng);
        double p = fisher_z_test(sufficient_stats(x), 0, 1, {2}).p_value;
        rej05 += p < 0.05;
        rej01 += p < 0.01;
    }
    CHECK(std::abs(rej05 / double(trials) - 0.05) <= 0.02);
    CHECK(std::abs(rej01 / double(trials) - 0.01) <= 0.02);
}

TEST_CASE("chi-squared test") {
    Rng rng = make_rng(4);
    Dataset d = discrete_uniform(2000, 3, 3, rng);
    MatrixXd v = d.values();
    v.col(1) = v.col(0);
    Dataset dep = d.with_values(v);
    CHECK(chi_squared_test(dep, 0, 1, {}).p_value < 1e-12);
    CHECK(chi_squared_test(dep, 0, 1, {2}).p_value < 1e-12);

    int rej = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        Dataset ind = discrete_uniform(2000, 3, 3, rng);
        rej += chi_squared_test(ind, 0, 1, {2}).p_value < 0.05;
    }
    CHECK(std::abs(rej / double(trials) - 0.05) <= 0.02);

    Dataset small = discrete_uniform(30, 3, 3, rng);  // df up to 12 > 30 / 10
    CiResult r = chi_squared_test(small, 0, 1, {2});
    CHECK_FALSE(r.reliable);
    CHECK(r.p_value == 1.0);

    Dataset cont(gaussian(10, 2, rng));
    try {
        chi_squared_test(cont, 0, 1, {});
        FAIL("expected NonDiscreteColumn");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonDiscreteColumn);
    }
    try {
        make_ci_test(cont, CiTestKind::chi_squared);
        FAIL("expected TestMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TestMismatch);
    }
}

TEST_CASE("rank transform") {
    Rng rng = make_rng(5);
    MatrixXd x = gaussian(5000, 1, rng);
    Dataset d(x);
    Dataset r = rank_transform(d);
    VectorXd a = x.col(0).array() - x.col(0).mean(), b = r.values().col(0).array() - r.values().col(0).mean();
    CHECK(a.dot(b) / (a.norm() * b.norm()) >= 0.99);

    MatrixXd pair(5000, 2);
    pair << x, x.array().exp();
    Dataset rp = rank_transform(Dataset(pair));
    CHECK(rp.values().col(0) == rp.values().col(1));

    MatrixXd ties(4, 1);
    ties << 1, 2, 2, 3;
    Dataset rt = rank_transform(Dataset(ties));
    CHECK(rt.values()(1, 0) == rt.values()(2, 0));
    CHECK(rt.values()(1, 0) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(rank_transform(Dataset(MatrixXd::Ones(5, 1))), Error);
}

TEST_CASE("missing values are rejected") {
    MatrixXd x = MatrixXd::Ones(5, 2);
    x(0, 0) = std::nan("");
    x(1, 0) = 2;
    try {
        make_ci_test(Dataset(x), CiTestKind::fisher_z);
        FAIL("expected DataContainsMissing");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DataContainsMissing);
    }
}

TEST_CASE("d-separation oracle sanity") {
    BoolMatrix chain = BoolMatrix::Constant(3, 3, false);
    chain(0, 1) = chain(1, 2) = true;
    CHECK_FALSE(oracle::d_separated(chain, 0, 2, {}));
    CHECK(oracle::d_separated(chain, 0, 2, {1}));
    BoolMatrix collider = BoolMatrix::Constant(4, 4, false);
    collider(0, 2) = collider(1, 2) = collider(2, 3) = true;
    CHECK(oracle::d_separated(collider, 0, 1, {}));
    CHECK_FALSE(oracle::d_separated(collider, 0, 1, {2}));
    CHECK_FALSE(oracle::d_separated(collider, 0, 1, {3}));
}
