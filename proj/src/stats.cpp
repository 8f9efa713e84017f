#include "causal_atlas/stats.hpp"

#include <algorithm>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace causal_atlas {

MatrixXd correlation_matrix(const MatrixXd& x) {
    MatrixXd c = covariance(x);
    VectorXd sd = c.diagonal().cwiseSqrt();
    for (Index i = 0; i < c.rows(); ++i)
        for (Index j = 0; j < c.cols(); ++j) {
            double d = sd(i) * sd(j);
            c(i, j) = d > 0 ? c(i, j) / d : (i == j ? 1.0 : 0.0);
        }
    c.diagonal().setOnes();
    return c;
}

double mean(const VectorXd& v) { return v.mean(); }

double variance(const VectorXd& v) {
    return (v.array() - v.mean()).square().mean();
}

double skewness(const VectorXd& v) {
    Eigen::ArrayXd c = v.array() - v.mean();
    double m2 = c.square().mean();
    return m2 > 0 ? c.cube().mean() / std::pow(m2, 1.5) : 0.0;
}

double excess_kurtosis(const VectorXd& v) {
    Eigen::ArrayXd c = v.array() - v.mean();
    double m2 = c.square().mean();
    return m2 > 0 ? c.square().square().mean() / (m2 * m2) - 3.0 : 0.0;
}

namespace {

MatrixXd with_ones(const MatrixXd& design) {
    MatrixXd x(design.rows(), design.cols() + 1);
    x.col(0).setOnes();
    x.rightCols(design.cols()) = design;
    return x;
}

}  // namespace

OlsFit ols(const MatrixXd& design, const VectorXd& y, bool with_intercept) {
    MatrixXd x = with_intercept ? with_ones(design) : design;
    OlsFit fit;
    const Index k = x.cols();
    fit.dof = static_cast<int>(x.rows() - k);
    if (k == 0) {
        fit.residuals = y;
    } else {
        Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
        fit.coef = qr.solve(y);
        fit.residuals = y - x * fit.coef;
    }
    fit.rss = fit.residuals.squaredNorm();
    fit.std_errors = VectorXd::Constant(k, std::nan(""));
    if (k > 0 && fit.dof > 0) {
        double sigma2 = fit.rss / fit.dof;
        MatrixXd xtx = x.transpose() * x;
        Eigen::LDLT<MatrixXd> ldlt(xtx);
        if (ldlt.info() == Eigen::Success) {
            MatrixXd inv = ldlt.solve(MatrixXd::Identity(k, k));
            fit.std_errors = (sigma2 * inv.diagonal().array()).cwiseMax(0.0).sqrt();
        }
    }
    return fit;
}

double ols_rss(const MatrixXd& design, const VectorXd& y, bool with_intercept) {
    if (design.cols() == 0) {
        return with_intercept ? (y.array() - y.mean()).square().sum() : y.squaredNorm();
    }
    MatrixXd x = with_intercept ? with_ones(design) : design;
    Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
    return (y - x * qr.solve(y)).squaredNorm();
}

JbResult jarque_bera(const VectorXd& v) {
    const double n = static_cast<double>(v.size());
    double s = skewness(v), k = excess_kurtosis(v);
    JbResult r;
    r.statistic = n / 6.0 * (s * s + k * k / 4.0);
    r.p_value = chi_squared_sf(r.statistic, 2.0);
    return r;
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal_distribution<>(), p); }

double chi_squared_sf(double x, double df) {
    if (!(x > 0)) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<>(df), x));
}

double f_sf(double x, double df1, double df2) {
    if (!(x > 0)) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::fisher_f_distribution<>(df1, df2), x));
}

double t_two_sided_p(double t, double dof) {
    if (!std::isfinite(t)) return std::isnan(t) ? 1.0 : 0.0;
    double tail = boost::math::cdf(boost::math::complement(boost::math::students_t_distribution<>(dof), std::abs(t)));
    return std::min(1.0, 2.0 * tail);
}

std::vector<bool> benjamini_hochberg(const std::vector<double>& p_values, double q) {
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
    std::size_t cutoff = 0;
    for (std::size_t r = 0; r < m; ++r)
        if (p_values[order[r]] <= q * static_cast<double>(r + 1) / static_cast<double>(m)) cutoff = r + 1;
    std::vector<bool> reject(m, false);
    for (std::size_t r = 0; r < cutoff; ++r) reject[order[r]] = true;
    return reject;
}

}  // namespace causal_atlas
