#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "causal_atlas/discovery.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/optimize.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

double notears_h(const MatrixXd& w, MatrixXd* grad) {
    const Index d = w.rows();
    MatrixXd e = w.cwiseProduct(w).exp();
    if (grad) *grad = e.transpose().cwiseProduct(2.0 * w);
    return e.trace() - static_cast<double>(d);
}

MatrixXd NotearsObjective::unpack(const VectorXd& x, Index d) {
    const Index dd = d * d;
    return Eigen::Map<const MatrixXd>(x.data(), d, d) - Eigen::Map<const MatrixXd>(x.data() + dd, d, d);
}

double NotearsObjective::operator()(const VectorXd& x, VectorXd& grad) const {
    const Index d = cov.rows();
    const Index dd = d * d;
    MatrixXd w = unpack(x, d);
    MatrixXd r = MatrixXd::Identity(d, d) - w;
    MatrixXd cr = cov * r;
    double loss = 0.5 * (r.transpose() * cr).trace();
    MatrixXd gh;
    double h = notears_h(w, &gh);
    double f = loss + 0.5 * rho * h * h + alpha * h + lambda1 * x.sum();
    MatrixXd g = -cr + (rho * h + alpha) * gh;
    grad.resize(2 * dd);
    Eigen::Map<MatrixXd>(grad.data(), d, d) = g.array() + lambda1;
    Eigen::Map<MatrixXd>(grad.data() + dd, d, d) = -g.array() + lambda1;
    return f;
}

int break_cycles_by_weight(MatrixXd& w) {
    int removed = 0;
    while (true) {
        BoolMatrix support = w.array() != 0.0;
        std::vector<int> cycle = find_cycle(support);
        if (cycle.empty()) return removed;
        int bi = -1, bj = -1;
        double weakest = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            int a = cycle[k], b = cycle[(k + 1) % cycle.size()];
            if (std::abs(w(a, b)) < weakest) weakest = std::abs(w(a, b)), bi = a, bj = b;
        }
        w(bi, bj) = 0.0;
        ++removed;
    }
}

NotearsResult notears_linear_full(const Dataset& data, const NotearsConfig& cfg, const CancelToken& cancel) {
    if (data.has_missing()) throw Error(ErrorCode::DataContainsMissing, "data contains missing values; impute first");
    const Index d = data.n_columns();
    NotearsObjective obj;
    obj.cov = covariance(data.values());
    obj.lambda1 = cfg.lambda1;

    const Index dd = d * d;
    VectorXd lower = VectorXd::Zero(2 * dd);
    VectorXd upper = VectorXd::Constant(2 * dd, std::numeric_limits<double>::infinity());
    for (Index i = 0; i < d; ++i) upper(i * d + i) = upper(dd + i * d + i) = 0.0;

    VectorXd x = VectorXd::Zero(2 * dd);
    double h = std::numeric_limits<double>::infinity();
    NotearsResult res;
    BoundedLbfgsOptions opt;
    opt.max_iter = 500;
    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        res.outer_iterations = outer + 1;
        VectorXd x_new;
        double h_new = 0.0;
        while (obj.rho < cfg.rho_max) {
            cancel.check();
            auto sol = minimize_bounded(obj, x, lower, upper, opt, cancel);
            x_new = sol.x;
            h_new = notears_h(NotearsObjective::unpack(x_new, d));
            if (h_new > 0.25 * h)
                obj.rho *= 10.0;
            else
                break;
        }
        if (x_new.size() == 0) break;
        x = x_new;
        h = h_new;
        obj.alpha += obj.rho * h;
        if (h <= cfg.h_tol || obj.rho >= cfg.rho_max) break;
    }
    res.raw = NotearsObjective::unpack(x, d);
    res.h = notears_h(res.raw);
    res.converged = res.h <= cfg.h_tol;
    MatrixXd w = res.raw;
    w = (w.array().abs() < cfg.w_threshold).select(0.0, w);
    if (break_cycles_by_weight(w) > 0) res.converged = false;
    res.dag = Dag(w.array() != 0.0, w, data.names());
    return res;
}

Dag notears_linear(const Dataset& data, const NotearsConfig& cfg, const CancelToken& cancel) {
    return notears_linear_full(data, cfg, cancel).dag;
}

}  // namespace causal_atlas
