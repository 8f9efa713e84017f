#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "causal_atlas/types.hpp"

namespace causal_atlas {

template <typename Derived>
MatrixXd center_columns(const Eigen::MatrixBase<Derived>& x) {
    return x.rowwise() - x.colwise().mean();
}

/// Columns scaled to zero mean and unit (population) variance. Constant
/// columns are left centered.
template <typename Derived>
MatrixXd standardize_columns(const Eigen::MatrixBase<Derived>& x) {
    MatrixXd c = center_columns(x);
    for (Index j = 0; j < c.cols(); ++j) {
        double sd = std::sqrt(c.col(j).squaredNorm() / static_cast<double>(c.rows()));
        if (sd > 0) c.col(j) /= sd;
    }
    return c;
}

/// Population covariance (divides by n).
template <typename Derived>
MatrixXd covariance(const Eigen::MatrixBase<Derived>& x) {
    MatrixXd c = center_columns(x);
    return (c.transpose() * c) / static_cast<double>(x.rows());
}

MatrixXd correlation_matrix(const MatrixXd& x);

double mean(const VectorXd& v);
double variance(const VectorXd& v);  // population
double skewness(const VectorXd& v);
double excess_kurtosis(const VectorXd& v);

struct OlsFit {
    VectorXd coef;  // intercept first when fitted with one
    VectorXd residuals;
    double rss = 0.0;
    int dof = 0;  // n - number of coefficients
    VectorXd std_errors;
};

/// Least squares via column-pivoted QR. `with_intercept` prepends a ones
/// column. Standard errors assume homoscedastic noise.
OlsFit ols(const MatrixXd& design, const VectorXd& y, bool with_intercept = true);

/// Residual sum of squares only; cheaper when the coefficients are not needed.
double ols_rss(const MatrixXd& design, const VectorXd& y, bool with_intercept = true);

/// Jarque-Bera statistic and p-value (chi-squared, 2 df).
struct JbResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
JbResult jarque_bera(const VectorXd& v);

/// Two-sided normal p-value for a z statistic.
double normal_two_sided_p(double z);
double normal_quantile(double p);
double chi_squared_sf(double x, double df);
double f_sf(double x, double df1, double df2);
double t_two_sided_p(double t, double dof);

/// Benjamini-Hochberg rejection mask at level q.
std::vector<bool> benjamini_hochberg(const std::vector<double>& p_values, double q);

}  // namespace causal_atlas
