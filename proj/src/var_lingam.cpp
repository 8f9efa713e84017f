#include "causal_atlas/discovery_ts.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

VarLingamResult var_lingam_full(const Dataset& series, int lag, double prune_threshold, const CancelToken& cancel) {
    VarLingamResult res;
    res.var = fit_var(series, lag);
    const Index p = series.n_columns();
    cancel.check();

    LingamResult inst = direct_lingam_full(Dataset(res.var.residuals), 0.05, cancel);
    res.order = inst.order;
    res.b0 = inst.dag.weights()->transpose();

    int non_gaussian = 0;
    res.residual_jb_p.resize(p);
    for (Index j = 0; j < p; ++j) {
        res.residual_jb_p(j) = jarque_bera(res.var.residuals.col(j)).p_value;
        non_gaussian += res.residual_jb_p(j) < 0.05;
    }
    res.low_confidence = non_gaussian < p - 1;

    auto prune = [&](MatrixXd m) { return (m.array().abs() < prune_threshold).select(0.0, m).eval(); };
    MatrixXd i_minus_b0 = MatrixXd::Identity(p, p) - res.b0;
    std::vector<MatrixXd> lagged;
    for (const MatrixXd& m : res.var.coefficients) lagged.push_back(prune((i_minus_b0 * m).transpose()));
    res.graph = TemporalGraph(prune(res.b0.transpose()), std::move(lagged), series.names());
    return res;
}

TemporalGraph var_lingam(const Dataset& series, int lag, const CancelToken& cancel) {
    return var_lingam_full(series, lag, 0.05, cancel).graph;
}

}  // namespace causal_atlas
