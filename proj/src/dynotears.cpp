#include <cmath>
#include <limits>
#include <string>

#include "causal_atlas/discovery_ts.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/optimize.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

MatrixXd DynotearsObjective::unpack_w(const VectorXd& x) const {
    const Index pp = p * p;
    return Eigen::Map<const MatrixXd>(x.data(), p, p) - Eigen::Map<const MatrixXd>(x.data() + pp, p, p);
}

MatrixXd DynotearsObjective::unpack_a(const VectorXd& x) const {
    const Index pp = p * p, q = p * lag;
    const double* base = x.data() + 2 * pp;
    return Eigen::Map<const MatrixXd>(base, q, p) - Eigen::Map<const MatrixXd>(base + q * p, q, p);
}

double DynotearsObjective::operator()(const VectorXd& x, VectorXd& grad) const {
    const Index pp = p * p, q = p * lag, m = p + q;
    MatrixXd w = unpack_w(x);
    MatrixXd r(m, p);  // E - B with E = [I; 0], B = [W; A]
    r.topRows(p) = MatrixXd::Identity(p, p) - w;
    r.bottomRows(q) = -unpack_a(x);
    MatrixXd gr = gram * r;
    double loss = 0.5 * (r.transpose() * gr).trace();
    MatrixXd gh;
    double h = notears_h(w, &gh);
    const double l1 = lambda_w * x.head(2 * pp).sum() + lambda_a * x.tail(2 * q * p).sum();
    double f = loss + 0.5 * rho * h * h + alpha * h + l1;

    MatrixXd gw = -gr.topRows(p) + (rho * h + alpha) * gh;
    MatrixXd ga = -gr.bottomRows(q);
    grad.resize(x.size());
    Eigen::Map<MatrixXd>(grad.data(), p, p) = gw.array() + lambda_w;
    Eigen::Map<MatrixXd>(grad.data() + pp, p, p) = -gw.array() + lambda_w;
    Eigen::Map<MatrixXd>(grad.data() + 2 * pp, q, p) = ga.array() + lambda_a;
    Eigen::Map<MatrixXd>(grad.data() + 2 * pp + q * p, q, p) = -ga.array() + lambda_a;
    return f;
}

DynotearsResult dynotears_full(const Dataset& series, const DynotearsConfig& cfg, const CancelToken& cancel) {
    const Index p = series.n_columns();
    const int lag = cfg.lag;
    if (lag < 1) throw Error(ErrorCode::InvalidArgument, "lag must be at least 1");
    if (series.has_missing()) throw Error(ErrorCode::DataContainsMissing, "series contains missing values; impute first");
    if (series.n_samples() <= (lag + 1) * p + 1)
        throw Error(ErrorCode::InsufficientLength, "series too short for lag " + std::to_string(lag));

    const MatrixXd& x = series.values();
    const Index n = x.rows() - lag;
    MatrixXd y(n, p + p * lag);
    y.leftCols(p) = x.bottomRows(n);
    y.rightCols(p * lag) = lag_design(x, lag);
    y = center_columns(y);

    DynotearsObjective obj;
    obj.gram = y.transpose() * y / static_cast<double>(n);
    obj.p = p;
    obj.lag = lag;
    obj.lambda_w = cfg.lambda_w;
    obj.lambda_a = cfg.lambda_a;

    const Index pp = p * p, dim = 2 * pp + 2 * p * lag * p;
    VectorXd lower = VectorXd::Zero(dim);
    VectorXd upper = VectorXd::Constant(dim, std::numeric_limits<double>::infinity());
    for (Index i = 0; i < p; ++i) upper(i * p + i) = upper(pp + i * p + i) = 0.0;

    const NotearsConfig& nc = cfg.notears;
    VectorXd v = VectorXd::Zero(dim);
    double h = std::numeric_limits<double>::infinity();
    BoundedLbfgsOptions opt;
    opt.max_iter = 500;
    for (int outer = 0; outer < nc.max_outer; ++outer) {
        VectorXd v_new;
        double h_new = 0.0;
        while (obj.rho < nc.rho_max) {
            cancel.check();
            v_new = minimize_bounded(obj, v, lower, upper, opt, cancel).x;
            h_new = notears_h(obj.unpack_w(v_new));
            if (h_new > 0.25 * h)
                obj.rho *= 10.0;
            else
                break;
        }
        if (v_new.size() == 0) break;
        v = v_new;
        h = h_new;
        obj.alpha += obj.rho * h;
        if (h <= nc.h_tol || obj.rho >= nc.rho_max) break;
    }

    DynotearsResult res;
    res.raw_w = obj.unpack_w(v);
    res.raw_a = obj.unpack_a(v);
    res.h = notears_h(res.raw_w);
    res.converged = res.h <= nc.h_tol;
    auto cut = [&](const MatrixXd& m) { return (m.array().abs() < nc.w_threshold).select(0.0, m).eval(); };
    MatrixXd w = cut(res.raw_w);
    if (break_cycles_by_weight(w) > 0) res.converged = false;
    std::vector<MatrixXd> lagged;
    for (int k = 0; k < lag; ++k) lagged.push_back(cut(res.raw_a.middleRows(k * p, p)));
    res.graph = TemporalGraph(w, std::move(lagged), series.names());
    return res;
}

TemporalGraph dynotears(const Dataset& series, const DynotearsConfig& cfg, const CancelToken& cancel) {
    return dynotears_full(series, cfg, cancel).graph;
}

}  // namespace causal_atlas
