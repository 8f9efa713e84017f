#include <cmath>
#include <numbers>

#include "causal_atlas/discovery.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

namespace {

constexpr double kK1 = 79.047;
constexpr double kK2 = 7.4129;
constexpr double kGamma = 0.37457;

VectorXd standardized(const VectorXd& v) {
    VectorXd c = v.array() - v.mean();
    double sd = std::sqrt(c.squaredNorm() / static_cast<double>(c.size()));
    return sd > 0 ? VectorXd(c / sd) : c;
}

// residual of xi after regressing on xj (both centered)
VectorXd residual(const VectorXd& xi, const VectorXd& xj) {
    double vj = xj.squaredNorm();
    return vj > 0 ? VectorXd(xi - (xi.dot(xj) / vj) * xj) : xi;
}

double diff_mutual_info(const VectorXd& xi, const VectorXd& xj, const VectorXd& ri_j, const VectorXd& rj_i) {
    return (lingam_entropy(xj) + lingam_entropy(standardized(ri_j))) -
           (lingam_entropy(xi) + lingam_entropy(standardized(rj_i)));
}

}  // namespace

double lingam_entropy(const VectorXd& u) {
    // log(cosh(u)) evaluated stably for large |u|
    Eigen::ArrayXd a = u.array().abs();
    double lc = (a + (-2.0 * a).exp().log1p() - std::numbers::ln2).mean();
    double ue = (u.array() * (-0.5 * u.array().square()).exp()).mean();
    return (1.0 + std::log(2.0 * std::numbers::pi)) / 2.0 - kK1 * (lc - kGamma) * (lc - kGamma) - kK2 * ue * ue;
}

std::vector<int> lingam_causal_order(const MatrixXd& x_in, const CancelToken& cancel) {
    const int p = static_cast<int>(x_in.cols());
    MatrixXd x = center_columns(x_in);
    std::vector<int> remaining(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) remaining[static_cast<std::size_t>(j)] = j;
    std::vector<int> order;
    while (!remaining.empty()) {
        cancel.check();
        if (remaining.size() == 1) {
            order.push_back(remaining.front());
            break;
        }
        std::vector<VectorXd> z;
        for (int j : remaining) z.push_back(standardized(x.col(j)));
        const std::size_t m = remaining.size();
        int best = -1;
        double best_score = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < m; ++a) {
            double score = 0.0;
            for (std::size_t b = 0; b < m; ++b) {
                if (a == b) continue;
                VectorXd ri_j = residual(z[a], z[b]);
                VectorXd rj_i = residual(z[b], z[a]);
                double dmi = diff_mutual_info(z[a], z[b], ri_j, rj_i);
                double neg = std::min(0.0, dmi);
                score += neg * neg;
            }
            if (score < best_score) best_score = score, best = static_cast<int>(a);
        }
        int root = remaining[static_cast<std::size_t>(best)];
        order.push_back(root);
        remaining.erase(remaining.begin() + best);
        for (int j : remaining) x.col(j) = residual(x.col(j), x.col(root));
    }
    return order;
}

LingamResult direct_lingam_full(const Dataset& data, double prune_alpha, const CancelToken& cancel) {
    if (data.has_missing()) throw Error(ErrorCode::DataContainsMissing, "data contains missing values; impute first");
    if (data.n_samples() < 100) throw Error(ErrorCode::InsufficientSamples, "direct_lingam needs at least 100 samples");
    const int p = static_cast<int>(data.n_columns());
    for (int j = 0; j < p; ++j)
        if (data.values().col(j).maxCoeff() == data.values().col(j).minCoeff())
            throw Error(ErrorCode::ConstantColumn, "column " + data.column(j).name + " is constant");
    MatrixXd x = standardize_columns(data.values());
    LingamResult res;
    res.order = lingam_causal_order(x, cancel);

    MatrixXd xc = center_columns(data.values());
    MatrixXd w = MatrixXd::Zero(p, p);
    for (std::size_t k = 1; k < res.order.size(); ++k) {
        cancel.check();
        int target = res.order[k];
        MatrixXd design(xc.rows(), static_cast<Index>(k));
        for (std::size_t a = 0; a < k; ++a) design.col(static_cast<Index>(a)) = xc.col(res.order[a]);
        OlsFit fit = ols(design, xc.col(target), false);
        for (std::size_t a = 0; a < k; ++a) {
            double coef = fit.coef(static_cast<Index>(a));
            double se = fit.std_errors(static_cast<Index>(a));
            double pv = se > 0 ? t_two_sided_p(coef / se, fit.dof) : (coef != 0 ? 0.0 : 1.0);
            if (pv <= prune_alpha && coef != 0.0) w(res.order[a], target) = coef;
        }
    }
    res.dag = Dag(w.array() != 0.0, w, data.names());
    return res;
}

Dag direct_lingam(const Dataset& data, double prune_alpha, const CancelToken& cancel) {
    return direct_lingam_full(data, prune_alpha, cancel).dag;
}

}  // namespace causal_atlas
