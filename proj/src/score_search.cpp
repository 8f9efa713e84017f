#include <algorithm>
#include <cmath>
#include <map>

#include "causal_atlas/discovery.hpp"
#include "causal_atlas/error.hpp"
#include "causal_atlas/stats.hpp"

namespace causal_atlas {

namespace {

constexpr double kVarianceFloor = 1e-12;
constexpr double kMinImprovement = 1e-9;

class LocalScores {
public:
    LocalScores(MatrixXd cov, Index n, double pm) : cov_(std::move(cov)), n_(n), pm_(pm) {}

    double get(int node, const std::vector<int>& parents) {
        auto key = std::make_pair(node, parents);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        double s = bic_local_score(cov_, n_, node, parents, pm_);
        cache_.emplace(std::move(key), s);
        return s;
    }

private:
    MatrixXd cov_;
    Index n_;
    double pm_;
    std::map<std::pair<int, std::vector<int>>, double> cache_;
};

std::vector<int> parents_of(const BoolMatrix& g, int j) {
    std::vector<int> out;
    for (int i = 0; i < g.rows(); ++i)
        if (g(i, j)) out.push_back(i);
    return out;
}

// reach(a, b): a directed path a ~> b exists (length >= 1)
BoolMatrix reachability(const BoolMatrix& g) {
    const int p = static_cast<int>(g.rows());
    BoolMatrix r = g;
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < p; ++i)
            if (r(i, k))
                for (int j = 0; j < p; ++j)
                    if (r(k, j)) r(i, j) = true;
    return r;
}

// Would adding a -> b to g (optionally after removing `skip`) close a cycle?
bool creates_cycle(const BoolMatrix& g, int a, int b) {
    // path b ~> a in g
    const int p = static_cast<int>(g.rows());
    std::vector<int> stack = {b};
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == a) return true;
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = true;
        for (int u = 0; u < p; ++u)
            if (g(v, u)) stack.push_back(u);
    }
    return false;
}

std::vector<int> with(std::vector<int> v, int x) {
    v.insert(std::upper_bound(v.begin(), v.end(), x), x);
    return v;
}

std::vector<int> without(std::vector<int> v, int x) {
    v.erase(std::find(v.begin(), v.end(), x));
    return v;
}

}  // namespace

double bic_local_score(const MatrixXd& cov, Index n, int node, const std::vector<int>& parents, double pm) {
    double var = cov(node, node);
    if (!parents.empty()) {
        const Index k = static_cast<Index>(parents.size());
        MatrixXd s(k, k);
        VectorXd c(k);
        for (Index a = 0; a < k; ++a) {
            c(a) = cov(parents[static_cast<std::size_t>(a)], node);
            for (Index b = 0; b < k; ++b)
                s(a, b) = cov(parents[static_cast<std::size_t>(a)], parents[static_cast<std::size_t>(b)]);
        }
        Eigen::LDLT<MatrixXd> ldlt(s);
        var -= c.dot(ldlt.solve(c));
    }
    var = std::max(var, kVarianceFloor);
    const double dn = static_cast<double>(n);
    return -0.5 * dn * std::log(var) - pm * 0.5 * std::log(dn) * static_cast<double>(parents.size() + 1);
}

double bic_total_score(const MatrixXd& cov, Index n, const BoolMatrix& dag, double pm) {
    double total = 0.0;
    for (int j = 0; j < dag.rows(); ++j) total += bic_local_score(cov, n, j, parents_of(dag, j), pm);
    return total;
}

ScoreSearchResult score_search_full(const Dataset& data, const ScoreConfig& cfg, const CancelToken& cancel) {
    if (data.has_missing()) throw Error(ErrorCode::DataContainsMissing, "data contains missing values; impute first");
    if (!(cfg.penalty_multiplier > 0)) throw Error(ErrorCode::InvalidArgument, "penalty_multiplier must be positive");
    const int p = static_cast<int>(data.n_columns());
    LocalScores scores(covariance(data.values()), data.n_samples(), cfg.penalty_multiplier);
    BoolMatrix g = BoolMatrix::Constant(p, p, false);
    std::vector<double> local(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) local[static_cast<std::size_t>(j)] = scores.get(j, {});
    auto total = [&] {
        double t = 0;
        for (double v : local) t += v;
        return t;
    };
    ScoreSearchResult res;
    res.score_trace.push_back(total());

    // forward: best single addition
    while (true) {
        cancel.check();
        BoolMatrix reach = reachability(g);
        double best = kMinImprovement;
        int bi = -1, bj = -1;
        for (int j = 0; j < p; ++j) {
            auto pa = parents_of(g, j);
            if (cfg.max_in_degree && static_cast<int>(pa.size()) >= *cfg.max_in_degree) continue;
            for (int i = 0; i < p; ++i) {
                if (i == j || g(i, j) || g(j, i) || reach(j, i)) continue;
                double gain = scores.get(j, with(pa, i)) - local[static_cast<std::size_t>(j)];
                if (gain > best) best = gain, bi = i, bj = j;
            }
        }
        if (bi < 0) break;
        g(bi, bj) = true;
        local[static_cast<std::size_t>(bj)] = scores.get(bj, parents_of(g, bj));
        res.score_trace.push_back(total());
    }
    // backward: best deletion or reversal
    while (true) {
        cancel.check();
        double best = kMinImprovement;
        int bi = -1, bj = -1;
        bool reverse = false;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                if (!g(i, j)) continue;
                auto pa_j = parents_of(g, j);
                double del_j = scores.get(j, without(pa_j, i));
                double gain = del_j - local[static_cast<std::size_t>(j)];
                if (gain > best) best = gain, bi = i, bj = j, reverse = false;
                auto pa_i = parents_of(g, i);
                if (cfg.max_in_degree && static_cast<int>(pa_i.size()) >= *cfg.max_in_degree) continue;
                g(i, j) = false;
                bool cyc = creates_cycle(g, j, i);
                g(i, j) = true;
                if (cyc) continue;
                double rgain = gain + scores.get(i, with(pa_i, j)) - local[static_cast<std::size_t>(i)];
                if (rgain > best) best = rgain, bi = i, bj = j, reverse = true;
            }
        if (bi < 0) break;
        g(bi, bj) = false;
        if (reverse) g(bj, bi) = true;
        local[static_cast<std::size_t>(bj)] = scores.get(bj, parents_of(g, bj));
        local[static_cast<std::size_t>(bi)] = scores.get(bi, parents_of(g, bi));
        res.score_trace.push_back(total());
    }
    res.dag = Dag(g, data.names());
    res.cpdag = dag_to_cpdag(res.dag);
    return res;
}

Cpdag score_search(const Dataset& data, const ScoreConfig& cfg, const CancelToken& cancel) {
    return score_search_full(data, cfg, cancel).cpdag;
}

}  // namespace causal_atlas
