#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "causal_atlas/ci_tests.hpp"
#include "causal_atlas/diagnostics.hpp"
#include "causal_atlas/discovery_ts.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/random.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

std::string to_string(DataKind v) { return v == DataKind::tabular ? "tabular" : "time_series"; }

std::string to_string(Linearity v) {
    switch (v) {
        case Linearity::linear: return "linear";
        case Linearity::nonlinear: return "nonlinear";
        case Linearity::unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(NoiseVerdict v) {
    switch (v) {
        case NoiseVerdict::gaussian: return "gaussian";
        case NoiseVerdict::non_gaussian: return "non_gaussian";
        case NoiseVerdict::unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(ImputeStrategy v) { return v == ImputeStrategy::mean_mode ? "mean_mode" : "drop_rows"; }

DataKind parse_data_kind(const std::string& s) {
    for (auto v : {DataKind::tabular, DataKind::time_series})
        if (to_string(v) == s) return v;
    throw Error(ErrorCode::InvalidArgument, "unknown data kind '" + s + "'");
}

Linearity parse_linearity(const std::string& s) {
    for (auto v : {Linearity::linear, Linearity::nonlinear, Linearity::unknown})
        if (to_string(v) == s) return v;
    throw Error(ErrorCode::InvalidArgument, "unknown linearity '" + s + "'");
}

NoiseVerdict parse_noise_verdict(const std::string& s) {
    for (auto v : {NoiseVerdict::gaussian, NoiseVerdict::non_gaussian, NoiseVerdict::unknown})
        if (to_string(v) == s) return v;
    throw Error(ErrorCode::InvalidArgument, "unknown noise verdict '" + s + "'");
}

ImputeStrategy parse_impute_strategy(const std::string& s) {
    for (auto v : {ImputeStrategy::mean_mode, ImputeStrategy::drop_rows})
        if (to_string(v) == s) return v;
    throw Error(ErrorCode::InvalidArgument, "unknown imputation strategy '" + s + "'");
}

namespace {

std::vector<Index> continuous_columns(const Dataset& data) {
    std::vector<Index> cols;
    for (Index j = 0; j < data.n_columns(); ++j)
        if (data.column(j).kind == ColumnKind::continuous) cols.push_back(j);
    return cols;
}

/// Continuous columns restricted to rows without missing cells among them.
MatrixXd complete_continuous(const Dataset& data) {
    std::vector<Index> cols = continuous_columns(data);
    std::vector<Index> rows;
    for (Index i = 0; i < data.n_samples(); ++i) {
        bool ok = true;
        for (Index j : cols) ok = ok && !std::isnan(data.values()(i, j));
        if (ok) rows.push_back(i);
    }
    MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out(static_cast<Index>(r), static_cast<Index>(c)) = data.values()(rows[r], cols[c]);
    return out;
}

std::vector<std::pair<Index, Index>> top_correlated_pairs(const MatrixXd& x, std::size_t limit) {
    MatrixXd c = correlation_matrix(x);
    std::vector<std::tuple<double, Index, Index>> all;
    for (Index a = 0; a < x.cols(); ++a)
        for (Index b = a + 1; b < x.cols(); ++b) {
            double r = std::isfinite(c(a, b)) ? std::abs(c(a, b)) : 0.0;
            all.emplace_back(-r, a, b);
        }
    std::sort(all.begin(), all.end());
    std::vector<std::pair<Index, Index>> out;
    for (std::size_t k = 0; k < all.size() && k < limit; ++k) out.emplace_back(std::get<1>(all[k]), std::get<2>(all[k]));
    return out;
}

double r_squared(const MatrixXd& design, const VectorXd& y) {
    double tss = (y.array() - y.mean()).square().sum();
    if (tss <= 0.0) return 0.0;
    return 1.0 - ols_rss(design, y) / tss;
}

double cubic_gain(const VectorXd& x, const VectorXd& y) {
    double sd = std::sqrt(variance(x));
    if (!(sd > 0.0)) return 0.0;
    VectorXd z = (x.array() - x.mean()) / sd;
    MatrixXd d3(z.size(), 3);
    d3.col(0) = z;
    d3.col(1) = z.array().square();
    d3.col(2) = z.array().cube();
    return r_squared(d3, y) - r_squared(d3.leftCols(1), y);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double one_way_anova_p(const VectorXd& v, const std::vector<int>& group, int n_groups) {
    std::vector<double> sum(static_cast<std::size_t>(n_groups), 0.0);
    std::vector<int> count(static_cast<std::size_t>(n_groups), 0);
    for (Index i = 0; i < v.size(); ++i) {
        sum[static_cast<std::size_t>(group[static_cast<std::size_t>(i)])] += v(i);
        ++count[static_cast<std::size_t>(group[static_cast<std::size_t>(i)])];
    }
    const double grand = v.mean();
    double between = 0.0, within = 0.0;
    for (int g = 0; g < n_groups; ++g)
        if (count[static_cast<std::size_t>(g)] > 0) {
            double m = sum[static_cast<std::size_t>(g)] / count[static_cast<std::size_t>(g)];
            between += count[static_cast<std::size_t>(g)] * (m - grand) * (m - grand);
        }
    for (Index i = 0; i < v.size(); ++i) {
        std::size_t g = static_cast<std::size_t>(group[static_cast<std::size_t>(i)]);
        double d = v(i) - sum[g] / count[g];
        within += d * d;
    }
    const double df1 = n_groups - 1, df2 = static_cast<double>(v.size()) - n_groups;
    if (df2 <= 0) return 1.0;
    if (within <= 0.0) return between > 0.0 ? 0.0 : 1.0;
    return f_sf((between / df1) / (within / df2), df1, df2);
}

}  // namespace

// ---- cleaning -----------------------------------------------------------

SchemaResult infer_schema(const Dataset& data) {
    if (data.n_samples() == 0 || data.n_columns() == 0) throw Error(ErrorCode::EmptyDataset, "dataset is empty");
    MatrixXd values = data.values();
    std::vector<ColumnMeta> cols = data.columns();
    SchemaResult res;
    res.levels.resize(cols.size());
    for (Index j = 0; j < data.n_columns(); ++j) {
        std::set<double> levels;
        bool integral = true, any = false;
        for (Index i = 0; i < data.n_samples() && integral; ++i) {
            double v = values(i, j);
            if (std::isnan(v)) continue;
            any = true;
            integral = std::floor(v) == v;
            levels.insert(v);
            if (levels.size() > static_cast<std::size_t>(kMaxDiscreteLevels)) integral = false;
        }
        auto& meta = cols[static_cast<std::size_t>(j)];
        if (!any || !integral) {
            meta.kind = ColumnKind::continuous;
            meta.cardinality = 0;
            continue;
        }
        std::vector<double> sorted(levels.begin(), levels.end());
        std::map<double, int> code;
        for (std::size_t k = 0; k < sorted.size(); ++k) code[sorted[k]] = static_cast<int>(k);
        for (Index i = 0; i < data.n_samples(); ++i)
            if (!std::isnan(values(i, j))) values(i, j) = code[values(i, j)];
        meta.kind = ColumnKind::discrete;
        meta.cardinality = static_cast<int>(sorted.size());
        res.levels[static_cast<std::size_t>(j)] = std::move(sorted);
    }
    res.data = data.with_values_and_columns(std::move(values), std::move(cols));
    return res;
}

Dataset impute(const Dataset& data, ImputeStrategy strategy) {
    const Index n = data.n_samples(), p = data.n_columns();
    for (Index j = 0; j < p; ++j)
        if (n > 0 && data.values().col(j).array().isNaN().all())
            throw Error(ErrorCode::AllMissingColumn, "column '" + data.column(j).name + "' has no observed values");
    if (!data.has_missing()) return data;

    if (strategy == ImputeStrategy::drop_rows) {
        std::vector<Index> keep;
        for (Index i = 0; i < n; ++i)
            if (!data.values().row(i).array().isNaN().any()) keep.push_back(i);
        return data.select_rows(keep);
    }

    MatrixXd v = data.values();
    for (Index j = 0; j < p; ++j) {
        double fill = 0.0;
        if (data.column(j).kind == ColumnKind::discrete) {
            std::map<double, int> counts;
            for (Index i = 0; i < n; ++i)
                if (!std::isnan(v(i, j))) ++counts[v(i, j)];
            int best = -1;
            for (auto [level, c] : counts)  // ascending, so ties keep the smallest label
                if (c > best) best = c, fill = level;
        } else {
            double s = 0.0;
            int c = 0;
            for (Index i = 0; i < n; ++i)
                if (!std::isnan(v(i, j))) s += v(i, j), ++c;
            fill = s / c;
        }
        for (Index i = 0; i < n; ++i)
            if (std::isnan(v(i, j))) v(i, j) = fill;
    }
    return data.with_values(std::move(v));
}

DropConstantResult drop_constant(const Dataset& data) {
    DropConstantResult res;
    std::vector<Index> keep;
    for (Index j = 0; j < data.n_columns(); ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (Index i = 0; i < data.n_samples(); ++i) {
            double v = data.values()(i, j);
            if (std::isnan(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi > lo)
            keep.push_back(j);
        else
            res.removed.push_back(data.column(j).name);
    }
    if (keep.empty()) throw Error(ErrorCode::AllColumnsConstant, "every column is constant");
    res.data = res.removed.empty() ? data : data.select_columns(keep);
    return res;
}

// ---- distributional checks ----------------------------------------------

LinearityResult test_linearity(const Dataset& data, std::uint64_t seed) {
    LinearityResult res;
    MatrixXd x = complete_continuous(data);
    if (x.cols() < 2 || x.rows() < 10) return res;
    if (x.rows() > 5000) {
        Rng rng = make_rng(seed, 21);
        std::vector<int> rows = sample_without_replacement(static_cast<int>(x.rows()), 5000, rng);
        std::sort(rows.begin(), rows.end());
        MatrixXd sub(5000, x.cols());
        for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Index>(r)) = x.row(rows[r]);
        x = std::move(sub);
    }
    std::vector<double> gains;
    for (auto [a, b] : top_correlated_pairs(x, 20))
        gains.push_back(std::max(cubic_gain(x.col(a), x.col(b)), cubic_gain(x.col(b), x.col(a))));
    res.pairs_tested = static_cast<int>(gains.size());
    res.median_gain = median(gains);
    res.verdict = res.median_gain > 0.1 ? Linearity::nonlinear : Linearity::linear;
    return res;
}

GaussianityResult test_gaussian_noise(const Dataset& data) {
    GaussianityResult res;
    MatrixXd x = complete_continuous(data);
    if (x.cols() == 0 || x.rows() < 10) return res;
    std::vector<VectorXd> residuals;
    if (x.cols() == 1) {
        residuals.push_back(x.col(0).array() - x.col(0).mean());
    } else {
        for (auto [a, b] : top_correlated_pairs(x, 20)) residuals.push_back(ols(x.col(a), x.col(b)).residuals);
    }
    for (const VectorXd& r : residuals) {
        ++res.tested;
        res.rejected += jarque_bera(r).p_value < 0.05;
    }
    res.verdict = 2 * res.rejected > res.tested ? NoiseVerdict::non_gaussian : NoiseVerdict::gaussian;
    return res;
}

// ---- time series --------------------------------------------------------

int adf_lag_count(Index n_steps) {
    return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n_steps) / 100.0, 0.25)));
}

AdfResult adf_test(const VectorXd& x) {
    AdfResult res;
    const Index t = x.size();
    const int k = adf_lag_count(t);
    res.lags = k;
    const Index rows = t - k - 1;
    if (rows < k + 12)
        throw Error(ErrorCode::SeriesTooShort, "series of length " + std::to_string(t) + " is too short for the ADF test");
    if (x.hasNaN()) throw Error(ErrorCode::DataContainsMissing, "series contains missing values; impute first");
    if (x.maxCoeff() == x.minCoeff()) {
        res.degenerate = true;
        res.stationary = true;
        return res;
    }
    VectorXd dx = x.tail(t - 1) - x.head(t - 1);  // dx(s) = x(s+1) - x(s)
    MatrixXd design(rows, 1 + k);
    VectorXd y(rows);
    for (Index r = 0; r < rows; ++r) {
        Index s = r + k;  // dx index of the response
        y(r) = dx(s);
        design(r, 0) = x(s);
        for (int i = 1; i <= k; ++i) design(r, i) = dx(s - i);
    }
    OlsFit fit = ols(design, y);
    res.t_stat = fit.coef(1) / fit.std_errors(1);
    res.stationary = res.t_stat < kAdfCritical;
    return res;
}

std::vector<AdfResult> test_stationarity(const Dataset& series) {
    std::vector<AdfResult> out;
    for (Index j = 0; j < series.n_columns(); ++j) out.push_back(adf_test(series.values().col(j)));
    return out;
}

int estimate_lag(const Dataset& series, int max_lag) {
    const Index p = series.n_columns(), t = series.n_samples();
    if (max_lag < 1) throw Error(ErrorCode::InvalidArgument, "max_lag must be at least 1");
    if (t <= (max_lag + 1) * p + 1)
        throw Error(ErrorCode::InsufficientLength, "series too short to compare lags up to " + std::to_string(max_lag));
    int best = 1;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int lag = 1; lag <= max_lag; ++lag) {
        std::vector<Index> rows;
        for (Index i = max_lag - lag; i < t; ++i) rows.push_back(i);
        VarFit fit = fit_var(series.select_rows(rows), lag);
        const double t_eff = static_cast<double>(fit.residuals.rows());
        MatrixXd sigma = fit.residuals.transpose() * fit.residuals / t_eff;
        Eigen::LLT<MatrixXd> llt(sigma);
        if (llt.info() != Eigen::Success) continue;
        double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        double bic = logdet + std::log(t_eff) / t_eff * lag * static_cast<double>(p * p);
        if (bic < best_bic) best_bic = bic, best = lag;
    }
    return best;
}

// ---- heterogeneity and density ------------------------------------------

HeterogeneityResult test_heterogeneity(const Dataset& data) {
    HeterogeneityResult res;
    if (!data.domain_index()) return res;
    const IntVector& dom = *data.domain_index();
    std::map<int, int> ids;
    for (Index i = 0; i < dom.size(); ++i) ids.emplace(dom(i), 0);
    if (ids.size() < 2) return res;
    int next = 0;
    for (auto& [d, id] : ids) id = next++;

    std::vector<Index> cols = continuous_columns(data);
    std::vector<Index> rows;
    for (Index i = 0; i < data.n_samples(); ++i) {
        bool ok = true;
        for (Index j : cols) ok = ok && !std::isnan(data.values()(i, j));
        if (ok) rows.push_back(i);
    }
    MatrixXd x = complete_continuous(data);
    if (x.cols() == 0 || x.rows() < 10) return res;
    std::vector<int> group;
    for (Index i : rows) group.push_back(ids[dom(i)]);
    const int g = static_cast<int>(ids.size());

    double min_p = 1.0;
    for (Index j = 0; j < x.cols(); ++j) {
        VectorXd r;
        if (x.cols() == 1) {
            r = x.col(0).array() - x.col(0).mean();
        } else {
            MatrixXd others(x.rows(), x.cols() - 1);
            for (Index c = 0, k = 0; c < x.cols(); ++c)
                if (c != j) others.col(k++) = x.col(c);
            r = ols(others, x.col(j)).residuals;
        }
        std::vector<std::vector<double>> per(static_cast<std::size_t>(g));
        for (Index i = 0; i < r.size(); ++i) per[static_cast<std::size_t>(group[static_cast<std::size_t>(i)])].push_back(r(i));
        std::vector<double> med;
        for (auto& v : per) med.push_back(v.empty() ? 0.0 : median(v));
        VectorXd dev(r.size());
        for (Index i = 0; i < r.size(); ++i) dev(i) = std::abs(r(i) - med[static_cast<std::size_t>(group[static_cast<std::size_t>(i)])]);
        double p_loc = one_way_anova_p(r, group, g);
        double p_scale = one_way_anova_p(dev, group, g);
        min_p = std::min(min_p, std::min(1.0, 2.0 * std::min(p_loc, p_scale)));
    }
    res.min_p_value = std::min(1.0, min_p * static_cast<double>(x.cols()));
    res.heterogeneous = res.min_p_value < 0.05;
    return res;
}

std::optional<double> estimate_density(const Dataset& data) {
    MatrixXd x = complete_continuous(data);
    const Index p = x.cols(), n = x.rows();
    if (p < 2 || n <= p + 3) return std::nullopt;
    MatrixXd c = correlation_matrix(x);
    if (!c.allFinite()) return std::nullopt;
    Eigen::LDLT<MatrixXd> ldlt(c);
    if (ldlt.info() != Eigen::Success) return std::nullopt;
    MatrixXd prec = ldlt.solve(MatrixXd::Identity(p, p));
    int hits = 0, pairs = 0;
    for (Index a = 0; a < p; ++a)
        for (Index b = a + 1; b < p; ++b) {
            double r = -prec(a, b) / std::sqrt(prec(a, a) * prec(b, b));
            ++pairs;
            hits += fisher_z_from_r(r, n, static_cast<int>(p - 2)).p_value < 0.01;
        }
    return static_cast<double>(hits) / pairs;
}

// ---- profile ------------------------------------------------------------

DatasetProfile profile_dataset(const Dataset& data, const ProfileHints& hints, std::uint64_t seed) {
    DatasetProfile prof;
    prof.n_samples = data.n_samples();
    prof.n_vars = data.n_columns();
    prof.data_kind = hints.data_kind.value_or(data.is_time_series() ? DataKind::time_series : DataKind::tabular);
    prof.discrete_ratio = data.discrete_ratio();
    prof.missing_rate = data.missing_rate();
    if (hints.runtime_budget_seconds) prof.runtime_budget_seconds = *hints.runtime_budget_seconds;

    if (prof.data_kind == DataKind::tabular) {
        LinearityResult lin = test_linearity(data, seed);
        prof.linearity = lin.verdict;
        prof.notes.push_back("linearity: median cubic R^2 gain " + std::to_string(lin.median_gain) + " over " +
                             std::to_string(lin.pairs_tested) + " pairs");
        GaussianityResult g = test_gaussian_noise(data);
        prof.gaussian_noise = g.verdict;
        prof.notes.push_back("gaussianity: " + std::to_string(g.rejected) + " of " + std::to_string(g.tested) +
                             " residuals reject normality");
        HeterogeneityResult het = test_heterogeneity(data);
        prof.heterogeneous = het.heterogeneous;
        prof.density = estimate_density(data);
        if (prof.density) prof.dense = *prof.density > kDenseThreshold;
    } else {
        Dataset clean = data.has_missing() ? impute(data) : data;
        try {
            std::vector<AdfResult> adf = test_stationarity(clean);
            prof.stationary = std::all_of(adf.begin(), adf.end(), [](const AdfResult& a) { return a.stationary; });
        } catch (const Error& e) {
            prof.notes.push_back(std::string("stationarity not tested: ") + e.what());
        }
        if (clean.n_samples() > 2) {
            const Index t = clean.n_samples(), p = clean.n_columns();
            MatrixXd pairs(t - 1, 2 * p);
            pairs << clean.values().bottomRows(t - 1), clean.values().topRows(t - 1);
            LinearityResult lin = test_linearity(Dataset(pairs), seed);
            prof.linearity = lin.verdict;
            prof.notes.push_back("linearity: median cubic R^2 gain " + std::to_string(lin.median_gain) +
                                 " over current/lag-1 pairs");
        }
        int max_lag = hints.max_lag.value_or(kDefaultMaxLag);
        while (max_lag > 1 && clean.n_samples() <= (max_lag + 1) * clean.n_columns() + 1) --max_lag;
        try {
            prof.suggested_lag = estimate_lag(clean, max_lag);
            VarFit var = fit_var(clean, *prof.suggested_lag);
            int rejected = 0;
            for (Index j = 0; j < var.residuals.cols(); ++j) rejected += jarque_bera(var.residuals.col(j)).p_value < 0.05;
            prof.gaussian_noise = 2 * rejected > var.residuals.cols() ? NoiseVerdict::non_gaussian : NoiseVerdict::gaussian;
            prof.notes.push_back("gaussianity: " + std::to_string(rejected) + " of " +
                                 std::to_string(var.residuals.cols()) + " VAR residuals reject normality");
        } catch (const Error& e) {
            prof.notes.push_back(std::string("lag not estimated: ") + e.what());
        }
    }

    auto override_note = [&](const std::string& field, const std::string& tested, const std::string& hinted) {
        if (tested != hinted) prof.notes.push_back("hint sets " + field + " to " + hinted + " (test said " + tested + ")");
    };
    if (hints.linearity) {
        override_note("linearity", to_string(prof.linearity), to_string(*hints.linearity));
        prof.linearity = *hints.linearity;
    }
    if (hints.gaussian_noise) {
        override_note("gaussian_noise", to_string(prof.gaussian_noise), to_string(*hints.gaussian_noise));
        prof.gaussian_noise = *hints.gaussian_noise;
    }
    if (hints.heterogeneous) prof.heterogeneous = hints.heterogeneous;
    if (hints.dense) prof.dense = hints.dense;
    return prof;
}

// ---- json ---------------------------------------------------------------

namespace {

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

}  // namespace

nlohmann::json to_json(const DatasetProfile& p) {
    return {{"n_samples", p.n_samples},
            {"n_vars", p.n_vars},
            {"data_kind", to_string(p.data_kind)},
            {"discrete_ratio", p.discrete_ratio},
            {"missing_rate", p.missing_rate},
            {"linearity", to_string(p.linearity)},
            {"gaussian_noise", to_string(p.gaussian_noise)},
            {"heterogeneous", opt_json(p.heterogeneous)},
            {"stationary", opt_json(p.stationary)},
            {"suggested_lag", opt_json(p.suggested_lag)},
            {"density", opt_json(p.density)},
            {"dense", opt_json(p.dense)},
            {"runtime_budget_seconds", p.runtime_budget_seconds},
            {"notes", p.notes}};
}

DatasetProfile profile_from_json(const nlohmann::json& j) {
    DatasetProfile p;
    p.n_samples = j.value("n_samples", Index{0});
    p.n_vars = j.value("n_vars", Index{0});
    if (j.contains("data_kind")) p.data_kind = parse_data_kind(j["data_kind"].get<std::string>());
    p.discrete_ratio = j.value("discrete_ratio", 0.0);
    p.missing_rate = j.value("missing_rate", 0.0);
    if (j.contains("linearity")) p.linearity = parse_linearity(j["linearity"].get<std::string>());
    if (j.contains("gaussian_noise")) p.gaussian_noise = parse_noise_verdict(j["gaussian_noise"].get<std::string>());
    p.heterogeneous = opt_from<bool>(j, "heterogeneous");
    p.stationary = opt_from<bool>(j, "stationary");
    p.suggested_lag = opt_from<int>(j, "suggested_lag");
    p.density = opt_from<double>(j, "density");
    p.dense = opt_from<bool>(j, "dense");
    p.runtime_budget_seconds = j.value("runtime_budget_seconds", p.runtime_budget_seconds);
    p.notes = j.value("notes", std::vector<std::string>{});
    return p;
}

nlohmann::json to_json(const ProfileHints& h) {
    nlohmann::json j = nlohmann::json::object();
    if (h.data_kind) j["data_kind"] = to_string(*h.data_kind);
    if (h.linearity) j["linearity"] = to_string(*h.linearity);
    if (h.gaussian_noise) j["gaussian_noise"] = to_string(*h.gaussian_noise);
    if (h.heterogeneous) j["heterogeneous"] = *h.heterogeneous;
    if (h.dense) j["dense"] = *h.dense;
    if (h.max_lag) j["max_lag"] = *h.max_lag;
    if (h.runtime_budget_seconds) j["runtime_budget_seconds"] = *h.runtime_budget_seconds;
    return j;
}

ProfileHints hints_from_json(const nlohmann::json& j) {
    ProfileHints h;
    if (auto s = opt_from<std::string>(j, "data_kind")) h.data_kind = parse_data_kind(*s);
    if (auto s = opt_from<std::string>(j, "linearity")) h.linearity = parse_linearity(*s);
    if (auto s = opt_from<std::string>(j, "gaussian_noise")) h.gaussian_noise = parse_noise_verdict(*s);
    h.heterogeneous = opt_from<bool>(j, "heterogeneous");
    h.dense = opt_from<bool>(j, "dense");
    h.max_lag = opt_from<int>(j, "max_lag");
    h.runtime_budget_seconds = opt_from<double>(j, "runtime_budget_seconds");
    return h;
}

}  // namespace causal_atlas
