#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "causal_atlas/discovery_ts.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

namespace {

void check_series(const Dataset& series, int lag, Index n_vars) {
    if (lag < 1) throw Error(ErrorCode::InvalidArgument, "lag must be at least 1");
    if (series.has_missing()) throw Error(ErrorCode::DataContainsMissing, "series contains missing values; impute first");
    const Index need = (lag + 1) * n_vars + 1;
    if (series.n_samples() <= need)
        throw Error(ErrorCode::InsufficientLength, "series has " + std::to_string(series.n_samples()) +
                                                       " steps, need more than " + std::to_string(need));
}

MatrixXd take_columns(const MatrixXd& z, const std::vector<Index>& cols) {
    MatrixXd out(z.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = z.col(cols[c]);
    return out;
}

std::vector<Index> lag_columns(Index var, Index p, int lag) {
    std::vector<Index> cols;
    for (int k = 0; k < lag; ++k) cols.push_back(k * p + var);
    return cols;
}

GrangerResult finish(const Dataset& series, MatrixXd f, MatrixXd pv, const GrangerConfig& cfg) {
    const Index p = series.n_columns();
    BoolMatrix edges = BoolMatrix::Constant(p, p, false);
    if (cfg.benjamini_hochberg) {
        std::vector<double> ps;
        for (Index i = 0; i < p; ++i)
            for (Index j = 0; j < p; ++j)
                if (i != j) ps.push_back(pv(i, j));
        std::vector<bool> reject = benjamini_hochberg(ps, cfg.alpha);
        std::size_t k = 0;
        for (Index i = 0; i < p; ++i)
            for (Index j = 0; j < p; ++j)
                if (i != j) edges(i, j) = reject[k++];
    } else {
        for (Index i = 0; i < p; ++i)
            for (Index j = 0; j < p; ++j)
                if (i != j) edges(i, j) = pv(i, j) < cfg.alpha;
    }
    return {Digraph(edges, series.names()), std::move(f), std::move(pv)};
}

}  // namespace

MatrixXd lag_design(const MatrixXd& series, int lag) {
    const Index t = series.rows(), p = series.cols();
    MatrixXd z(t - lag, p * lag);
    for (int k = 1; k <= lag; ++k) z.middleCols((k - 1) * p, p) = series.middleRows(lag - k, t - lag);
    return z;
}

VarFit fit_var(const Dataset& series, int lag) {
    const Index p = series.n_columns();
    check_series(series, lag, p);
    const MatrixXd& x = series.values();
    MatrixXd z = lag_design(x, lag);
    MatrixXd y = x.bottomRows(x.rows() - lag);

    VarFit fit;
    fit.lag_order = lag;
    fit.intercept.resize(p);
    fit.coefficients.assign(static_cast<std::size_t>(lag), MatrixXd::Zero(p, p));
    fit.residuals.resize(y.rows(), p);
    fit.rss_per_equation.resize(p);
    for (Index j = 0; j < p; ++j) {
        OlsFit eq = ols(z, y.col(j));
        fit.intercept(j) = eq.coef(0);
        for (int k = 0; k < lag; ++k)
            for (Index i = 0; i < p; ++i) fit.coefficients[static_cast<std::size_t>(k)](j, i) = eq.coef(1 + k * p + i);
        fit.residuals.col(j) = eq.residuals;
        fit.rss_per_equation(j) = eq.rss;
    }
    return fit;
}

double granger_f_statistic(double rss_restricted, double rss_full, int df_num, int df_den) {
    if (df_num <= 0 || df_den <= 0) throw Error(ErrorCode::InvalidArgument, "F test needs positive degrees of freedom");
    if (rss_full <= 0.0) return rss_restricted > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return std::max(0.0, (rss_restricted - rss_full) / df_num) / (rss_full / df_den);
}

GrangerResult granger_pairwise(const Dataset& series, const GrangerConfig& cfg, const CancelToken& cancel) {
    const Index p = series.n_columns();
    const int lag = cfg.max_lag;
    check_series(series, lag, 2);
    const MatrixXd& x = series.values();
    MatrixXd z = lag_design(x, lag);
    const Index t_eff = z.rows();
    const int df_den = static_cast<int>(t_eff) - 2 * lag - 1;

    MatrixXd f = MatrixXd::Constant(p, p, std::nan(""));
    MatrixXd pv = MatrixXd::Constant(p, p, std::nan(""));
    for (Index j = 0; j < p; ++j) {
        VectorXd y = x.col(j).tail(t_eff);
        std::vector<Index> own = lag_columns(j, p, lag);
        double rss_r = ols_rss(take_columns(z, own), y);
        for (Index i = 0; i < p; ++i) {
            if (i == j) continue;
            cancel.check();
            std::vector<Index> both = own;
            for (Index c : lag_columns(i, p, lag)) both.push_back(c);
            double rss_f = ols_rss(take_columns(z, both), y);
            f(i, j) = granger_f_statistic(rss_r, rss_f, lag, df_den);
            pv(i, j) = f_sf(f(i, j), lag, df_den);
        }
    }
    return finish(series, std::move(f), std::move(pv), cfg);
}

GrangerResult granger_multivariate(const Dataset& series, const GrangerConfig& cfg, const CancelToken& cancel) {
    const Index p = series.n_columns();
    const int lag = cfg.max_lag;
    check_series(series, lag, p);
    const MatrixXd& x = series.values();
    MatrixXd z = lag_design(x, lag);
    const Index t_eff = z.rows();
    const int df_den = static_cast<int>(t_eff - p * lag - 1);

    MatrixXd f = MatrixXd::Constant(p, p, std::nan(""));
    MatrixXd pv = MatrixXd::Constant(p, p, std::nan(""));
    for (Index j = 0; j < p; ++j) {
        VectorXd y = x.col(j).tail(t_eff);
        double rss_f = ols_rss(z, y);
        for (Index i = 0; i < p; ++i) {
            if (i == j) continue;
            cancel.check();
            std::vector<Index> keep;
            for (Index c = 0; c < z.cols(); ++c)
                if (c % p != i) keep.push_back(c);
            double rss_r = ols_rss(take_columns(z, keep), y);
            f(i, j) = granger_f_statistic(rss_r, rss_f, lag, df_den);
            pv(i, j) = f_sf(f(i, j), lag, df_den);
        }
    }
    return finish(series, std::move(f), std::move(pv), cfg);
}

}  // namespace causal_atlas
