#include "causal_atlas/ci_tests.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "causal_atlas/error.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

namespace {

constexpr double kClamp = 1.0 - 1e-12;
constexpr double kSingularRatio = 1e-12;

double clamp_r(double r) {
    if (std::isnan(r)) return 0.0;
    return std::clamp(r, -kClamp, kClamp);
}

void require_complete(const Dataset& data) {
    if (data.has_missing()) throw Error(ErrorCode::DataContainsMissing, "data contains missing values; impute first");
}

MatrixXd submatrix(const MatrixXd& c, const std::vector<int>& idx) {
    const Index k = static_cast<Index>(idx.size());
    MatrixXd s(k, k);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b) s(a, b) = c(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    return s;
}

struct Partial {
    double r = 0.0;
    bool singular = false;
};

Partial partial(const SufficientStats& stats, int i, int j, const std::vector<int>& cond) {
    if (cond.empty()) return {clamp_r(stats.correlation(i, j)), false};
    std::vector<int> idx = {i, j};
    idx.insert(idx.end(), cond.begin(), cond.end());
    MatrixXd s = submatrix(stats.correlation, idx);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s);
    const VectorXd& ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    bool singular = ev.minCoeff() <= kSingularRatio * top;
    VectorXd inv_ev(ev.size());
    for (Index k = 0; k < ev.size(); ++k) inv_ev(k) = ev(k) > kSingularRatio * top ? 1.0 / ev(k) : 0.0;
    MatrixXd omega = es.eigenvectors() * inv_ev.asDiagonal() * es.eigenvectors().transpose();
    double d = omega(0, 0) * omega(1, 1);
    double r = d > 0 ? -omega(0, 1) / std::sqrt(d) : 0.0;
    return {clamp_r(r), singular};
}

void check_indices(int n, int i, int j, const std::vector<int>& cond) {
    auto bad = [n](int v) { return v < 0 || v >= n; };
    if (bad(i) || bad(j) || i == j) throw Error(ErrorCode::InvalidArgument, "invalid CI test pair");
    for (int c : cond)
        if (bad(c) || c == i || c == j) throw Error(ErrorCode::InvalidArgument, "invalid conditioning index");
}

}  // namespace

SufficientStats sufficient_stats(const MatrixXd& values) {
    if (values.array().isNaN().any())
        throw Error(ErrorCode::DataContainsMissing, "data contains missing values; impute first");
    return {correlation_matrix(values), values.rows()};
}

SufficientStats sufficient_stats(const Dataset& data) { return sufficient_stats(data.values()); }

double partial_correlation(const SufficientStats& stats, int i, int j, const std::vector<int>& cond) {
    check_indices(static_cast<int>(stats.correlation.rows()), i, j, cond);
    Partial p = partial(stats, i, j, cond);
    if (p.singular) throw Error(ErrorCode::SingularSubmatrix, "correlation submatrix is singular");
    return p.r;
}

CiResult fisher_z_from_r(double r, Index n, int cond_size) {
    CiResult res;
    res.conditioning_size = cond_size;
    const double dof = static_cast<double>(n) - cond_size - 3;
    if (dof <= 0) {
        res.reliable = false;
        return res;
    }
    r = clamp_r(r);
    double z = 0.5 * std::log((1 + r) / (1 - r));
    res.statistic = std::sqrt(dof) * std::abs(z);
    res.p_value = normal_two_sided_p(res.statistic);
    return res;
}

CiResult fisher_z_test(const SufficientStats& stats, int i, int j, const std::vector<int>& cond) {
    check_indices(static_cast<int>(stats.correlation.rows()), i, j, cond);
    Partial p = partial(stats, i, j, cond);
    CiResult res = fisher_z_from_r(p.r, stats.n, static_cast<int>(cond.size()));
    if (p.singular) res.reliable = false;
    return res;
}

CiResult chi_squared_test(const Dataset& data, int i, int j, const std::vector<int>& cond) {
    check_indices(static_cast<int>(data.n_columns()), i, j, cond);
    std::vector<int> all = {i, j};
    all.insert(all.end(), cond.begin(), cond.end());
    for (int c : all)
        if (data.column(c).kind != ColumnKind::discrete)
            throw Error(ErrorCode::NonDiscreteColumn, "chi-squared test needs discrete column " + data.column(c).name);
    require_complete(data);

    const MatrixXd& v = data.values();
    const int ci = data.column(i).cardinality, cj = data.column(j).cardinality;
    // stratum key -> ci x cj table
    std::map<std::vector<int>, Eigen::MatrixXd> strata;
    std::vector<int> key(cond.size());
    for (Index r = 0; r < v.rows(); ++r) {
        for (std::size_t k = 0; k < cond.size(); ++k) key[k] = static_cast<int>(v(r, cond[k]));
        auto [it, fresh] = strata.try_emplace(key);
        if (fresh) it->second = MatrixXd::Zero(ci, cj);
        it->second(static_cast<Index>(v(r, i)), static_cast<Index>(v(r, j))) += 1.0;
    }
    double stat = 0.0;
    double df = 0.0;
    for (const auto& [k, t] : strata) {
        VectorXd rows = t.rowwise().sum(), cols = t.colwise().sum().transpose();
        const double total = t.sum();
        Index nr = (rows.array() > 0).count(), nc = (cols.array() > 0).count();
        if (nr < 2 || nc < 2) continue;
        df += static_cast<double>((nr - 1) * (nc - 1));
        for (Index a = 0; a < ci; ++a)
            for (Index b = 0; b < cj; ++b) {
                double e = rows(a) * cols(b) / total;
                if (e > 0) stat += (t(a, b) - e) * (t(a, b) - e) / e;
            }
    }
    CiResult res;
    res.conditioning_size = static_cast<int>(cond.size());
    res.statistic = stat;
    if (static_cast<double>(v.rows()) < 10.0 * df) {
        res.reliable = false;
        res.p_value = 1.0;
        return res;
    }
    res.p_value = df > 0 ? chi_squared_sf(stat, df) : 1.0;
    return res;
}

Dataset rank_transform(const Dataset& data) {
    require_complete(data);
    MatrixXd v = data.values();
    const Index n = v.rows();
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index j = 0; j < v.cols(); ++j) {
        if (data.column(j).kind != ColumnKind::continuous) continue;
        if (n == 0 || v.col(j).maxCoeff() == v.col(j).minCoeff())
            throw Error(ErrorCode::ConstantColumn, "column " + data.column(j).name + " is constant");
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v(a, j) < v(b, j); });
        VectorXd scores(n);
        Index a = 0;
        while (a < n) {
            Index b = a;
            while (b + 1 < n && v(order[b + 1], j) == v(order[a], j)) ++b;
            double rank = 0.5 * static_cast<double>(a + b) + 1.0;  // 1-based average rank
            double s = normal_quantile(rank / static_cast<double>(n + 1));
            for (Index k = a; k <= b; ++k) scores(order[k]) = s;
            a = b + 1;
        }
        v.col(j) = scores;
    }
    return data.with_values(std::move(v));
}

std::string to_string(CiTestKind k) {
    switch (k) {
        case CiTestKind::fisher_z: return "fisher_z";
        case CiTestKind::chi_squared: return "chi_squared";
        case CiTestKind::rank_fisher_z: return "rank_fisher_z";
    }
    return "fisher_z";
}

CiTestKind parse_ci_test(const std::string& s) {
    for (auto k : {CiTestKind::fisher_z, CiTestKind::chi_squared, CiTestKind::rank_fisher_z})
        if (to_string(k) == s) return k;
    throw Error(ErrorCode::InvalidArgument, "unknown CI test '" + s + "'");
}

CiResult FisherZTest::test(int i, int j, const std::vector<int>& cond) const {
    CiResult r = fisher_z_test(stats_, i, j, cond);
    if (mixed_) r.reliable = false;
    return r;
}

ChiSquaredTest::ChiSquaredTest(Dataset data) : data_(std::move(data)) {
    for (Index j = 0; j < data_.n_columns(); ++j)
        if (data_.column(j).kind != ColumnKind::discrete)
            throw Error(ErrorCode::TestMismatch, "chi-squared test on continuous column " + data_.column(j).name);
    require_complete(data_);
}

CiResult ChiSquaredTest::test(int i, int j, const std::vector<int>& cond) const {
    return chi_squared_test(data_, i, j, cond);
}

std::unique_ptr<CiTest> make_ci_test(const Dataset& data, CiTestKind kind) {
    require_complete(data);
    switch (kind) {
        case CiTestKind::chi_squared:
            return std::make_unique<ChiSquaredTest>(data);
        case CiTestKind::rank_fisher_z:
            return std::make_unique<FisherZTest>(sufficient_stats(rank_transform(data)), !data.all_continuous());
        case CiTestKind::fisher_z:
            break;
    }
    return std::make_unique<FisherZTest>(sufficient_stats(data), !data.all_continuous());
}

}  // namespace causal_atlas
