#pragma once

#include <vector>

#include "causal_atlas/cancel.hpp"
#include "causal_atlas/dataset.hpp"
#include "causal_atlas/discovery.hpp"
#include "causal_atlas/graph.hpp"
#include "causal_atlas/types.hpp"

namespace causal_atlas {

/// Rows t = lag..T-1 of x_{t-k}, k = 1..lag; column (k-1)*p + i holds variable i at lag k.
MatrixXd lag_design(const MatrixXd& series, int lag);

/// x_t = c + sum_k M_k x_{t-k} + u_t, regression convention: M_k(j, i) is i's lag-k effect on j.
struct VarFit {
    int lag_order = 0;
    VectorXd intercept;
    std::vector<MatrixXd> coefficients;  // M_1..M_L
    MatrixXd residuals;                  // (T - lag) x p
    VectorXd rss_per_equation;
};

VarFit fit_var(const Dataset& series, int lag);

/// ((rss_r - rss_f) / df_num) / (rss_f / df_den)
double granger_f_statistic(double rss_restricted, double rss_full, int df_num, int df_den);

struct GrangerConfig {
    int max_lag = 3;
    double alpha = 0.05;
    bool benjamini_hochberg = false;
};

struct GrangerResult {
    Digraph graph;  // summary graph, row = cause
    MatrixXd f_statistic;
    MatrixXd p_value;  // diagonal NaN
};

GrangerResult granger_pairwise(const Dataset& series, const GrangerConfig& cfg = {},
                               const CancelToken& cancel = CancelToken::none());
GrangerResult granger_multivariate(const Dataset& series, const GrangerConfig& cfg = {},
                                   const CancelToken& cancel = CancelToken::none());

struct VarLingamResult {
    TemporalGraph graph;
    VarFit var;
    MatrixXd b0;  // instantaneous matrix, regression convention
    std::vector<int> order;
    VectorXd residual_jb_p;
    /// Fewer than p-1 residual columns look non-Gaussian at the 5% level.
    bool low_confidence = false;
};

VarLingamResult var_lingam_full(const Dataset& series, int lag, double prune_threshold = 0.05,
                                const CancelToken& cancel = CancelToken::none());
TemporalGraph var_lingam(const Dataset& series, int lag, const CancelToken& cancel = CancelToken::none());

struct DynotearsConfig {
    int lag = 3;
    double lambda_w = 0.05;
    double lambda_a = 0.05;
    NotearsConfig notears{0.0, 0.1, 1e-8, 1e16, 100};
};

/// (1/2n)||X - XW - ZA||^2 + lambda_w |W|_1 + lambda_a |A|_1 + rho/2 h(W)^2 + alpha h(W)
/// over x = [W+; W-; A+; A-], using the Gram matrix of [X Z].
struct DynotearsObjective {
    MatrixXd gram;   // [X Z]^T [X Z] / n
    Index p = 0;
    Index lag = 0;
    double lambda_w = 0.0;
    double lambda_a = 0.0;
    double rho = 1.0;
    double alpha = 0.0;

    double operator()(const VectorXd& x, VectorXd& grad) const;
    MatrixXd unpack_w(const VectorXd& x) const;
    MatrixXd unpack_a(const VectorXd& x) const;  // (p*lag) x p, stacked A_1..A_L
};

struct DynotearsResult {
    TemporalGraph graph;
    MatrixXd raw_w;
    MatrixXd raw_a;
    double h = 0.0;
    bool converged = true;
};

DynotearsResult dynotears_full(const Dataset& series, const DynotearsConfig& cfg = {},
                               const CancelToken& cancel = CancelToken::none());
TemporalGraph dynotears(const Dataset& series, const DynotearsConfig& cfg = {},
                        const CancelToken& cancel = CancelToken::none());

}  // namespace causal_atlas
