#include "causal_atlas/optimize.hpp"

#include <cmath>
#include <deque>

namespace causal_atlas {

namespace {

struct Pair {
    VectorXd s;
    VectorXd y;
    double rho;
};

VectorXd project(const VectorXd& x, const VectorXd& lo, const VectorXd& hi) { return x.cwiseMax(lo).cwiseMin(hi); }

// 1 for variables free to move, 0 for those pinned at an active bound.
VectorXd free_mask(const VectorXd& x, const VectorXd& g, const VectorXd& lo, const VectorXd& hi) {
    VectorXd m(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        bool fixed = lo(i) >= hi(i) || (x(i) <= lo(i) && g(i) > 0) || (x(i) >= hi(i) && g(i) < 0);
        m(i) = fixed ? 0.0 : 1.0;
    }
    return m;
}

VectorXd two_loop(const std::deque<Pair>& mem, const VectorXd& g, const VectorXd& mask) {
    VectorXd q = g.cwiseProduct(mask);
    std::vector<double> alpha(mem.size());
    for (std::size_t k = mem.size(); k-- > 0;) {
        const Pair& p = mem[k];
        alpha[k] = p.rho * p.s.cwiseProduct(mask).dot(q);
        q -= alpha[k] * p.y.cwiseProduct(mask);
    }
    if (!mem.empty()) {
        const Pair& last = mem.back();
        VectorXd ym = last.y.cwiseProduct(mask);
        double yy = ym.squaredNorm();
        double sy = last.s.cwiseProduct(mask).dot(ym);
        if (yy > 0 && sy > 0) q *= sy / yy;
    }
    for (std::size_t k = 0; k < mem.size(); ++k) {
        const Pair& p = mem[k];
        double beta = p.rho * p.y.cwiseProduct(mask).dot(q);
        q += (alpha[k] - beta) * p.s.cwiseProduct(mask);
    }
    return -q.cwiseProduct(mask);
}

}  // namespace

BoundedLbfgsResult minimize_bounded(const Objective& fun, VectorXd x0, const VectorXd& lower, const VectorXd& upper,
                                    const BoundedLbfgsOptions& opt, const CancelToken& cancel) {
    BoundedLbfgsResult res;
    VectorXd x = project(x0, lower, upper);
    VectorXd g(x.size());
    double f = fun(x, g);
    std::deque<Pair> mem;
    VectorXd xn(x.size()), gn(x.size());

    for (int it = 0; it < opt.max_iter; ++it) {
        cancel.check();
        res.iterations = it;
        VectorXd pg = project(x - g, lower, upper) - x;
        if (pg.size() == 0 || pg.lpNorm<Eigen::Infinity>() <= opt.pg_tol) {
            res.converged = true;
            break;
        }
        VectorXd mask = free_mask(x, g, lower, upper);
        VectorXd d = two_loop(mem, g, mask);
        if (d.dot(g) >= 0) {
            mem.clear();
            d = -g.cwiseProduct(mask);
        }
        double t = mem.empty() ? std::min(1.0, 1.0 / std::max(d.lpNorm<Eigen::Infinity>(), 1e-300)) : 1.0;
        double fn = f;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            xn = project(x + t * d, lower, upper);
            fn = fun(xn, gn);
            if (std::isfinite(fn) && fn <= f + 1e-4 * g.dot(xn - x)) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (!mem.empty()) {
                mem.clear();
                continue;
            }
            res.converged = true;  // no further decrease is attainable at this precision
            break;
        }
        VectorXd s = xn - x, y = gn - g;
        double sy = s.dot(y);
        if (sy > 1e-10 * y.squaredNorm()) {
            mem.push_back({s, y, 1.0 / sy});
            if (static_cast<int>(mem.size()) > opt.memory) mem.pop_front();
        }
        double decrease = f - fn;
        x = xn;
        g = gn;
        f = fn;
        if (decrease <= opt.f_tol * std::max({std::abs(f), std::abs(fn), 1.0})) {
            res.converged = true;
            break;
        }
    }
    res.x = std::move(x);
    res.f = f;
    return res;
}

VectorXd numeric_gradient(const Objective& fun, const VectorXd& x, double step) {
    VectorXd grad(x.size()), scratch(x.size());
    VectorXd xp = x;
    for (Index i = 0; i < x.size(); ++i) {
        double orig = xp(i);
        xp(i) = orig + step;
        double fp = fun(xp, scratch);
        xp(i) = orig - step;
        double fm = fun(xp, scratch);
        xp(i) = orig;
        grad(i) = (fp - fm) / (2 * step);
    }
    return grad;
}

}  // namespace causal_atlas
