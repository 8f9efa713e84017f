#include <algorithm>
#include <numeric>

#include "causal_atlas/discovery.hpp"
#include "causal_atlas/error.hpp"

namespace causal_atlas {

namespace {

// Calls `visit` on each size-k subset of `items` in lexicographic order until it returns true.
template <typename F>
bool for_each_subset(const std::vector<int>& items, int k, F&& visit) {
    const int n = static_cast<int>(items.size());
    if (k > n) return false;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> subset(static_cast<std::size_t>(k));
    while (true) {
        for (int a = 0; a < k; ++a) subset[a] = items[idx[a]];
        if (visit(subset)) return true;
        int a = k - 1;
        while (a >= 0 && idx[a] == n - k + a) --a;
        if (a < 0) return false;
        ++idx[a];
        for (int b = a + 1; b < k; ++b) idx[b] = idx[b - 1] + 1;
    }
}

std::vector<int> neighbours(const BoolMatrix& adj, int v) {
    std::vector<int> out;
    for (int u = 0; u < adj.rows(); ++u)
        if (adj(v, u)) out.push_back(u);
    return out;
}

std::pair<int, int> key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

bool is_independent(const CiResult& r, double alpha) { return r.p_value >= alpha; }

}  // namespace

SkeletonResult pc_skeleton(const CiTest& test, double alpha, std::optional<int> max_depth, const CancelToken& cancel) {
    if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    const int p = test.n_vars();
    SkeletonResult res;
    res.adjacency = BoolMatrix::Constant(p, p, true);
    res.adjacency.diagonal().setConstant(false);
    for (int level = 0;; ++level) {
        if (max_depth && level > *max_depth) break;
        cancel.check();
        BoolMatrix frozen = res.adjacency;
        bool any_large = false;
        for (int i = 0; i < p; ++i) {
            std::vector<int> nb = neighbours(frozen, i);
            if (static_cast<int>(nb.size()) - 1 >= level) any_large = true;
            for (int j : nb) {
                if (!res.adjacency(i, j)) continue;
                std::vector<int> rest;
                for (int v : nb)
                    if (v != j) rest.push_back(v);
                if (static_cast<int>(rest.size()) < level) continue;
                for_each_subset(rest, level, [&](const std::vector<int>& s) {
                    if (!is_independent(test.test(i, j, s), alpha)) return false;
                    res.adjacency(i, j) = res.adjacency(j, i) = false;
                    res.sepsets[key(i, j)] = s;
                    return true;
                });
            }
        }
        if (!any_large) break;
    }
    return res;
}

Cpdag orient_from_sepsets(const BoolMatrix& adjacency, const SepsetMap& sepsets, std::vector<std::string> labels) {
    const int p = static_cast<int>(adjacency.rows());
    BoolMatrix directed = BoolMatrix::Constant(p, p, false);
    BoolMatrix undirected = adjacency;
    auto can_point = [&](int from, int to) {
        return (undirected(from, to) && undirected(to, from)) || directed(from, to);
    };
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) {
                if (!adjacency(i, k) || !adjacency(j, k) || adjacency(i, j)) continue;
                auto it = sepsets.find({i, j});
                if (it == sepsets.end()) continue;
                if (std::find(it->second.begin(), it->second.end(), k) != it->second.end()) continue;
                if (!can_point(i, k) || !can_point(j, k)) continue;
                for (int a : {i, j}) {
                    directed(a, k) = true;
                    undirected(a, k) = undirected(k, a) = false;
                }
            }
    return meek_closure(Cpdag(directed, undirected, std::move(labels)));
}

Cpdag pc(const CiTest& test, double alpha, std::optional<int> max_depth, std::vector<std::string> labels,
         const CancelToken& cancel) {
    SkeletonResult sk = pc_skeleton(test, alpha, max_depth, cancel);
    return orient_from_sepsets(sk.adjacency, sk.sepsets, std::move(labels));
}

Cpdag pc(const Dataset& data, const PcConfig& cfg, const CancelToken& cancel) {
    if (data.n_columns() < 2) throw Error(ErrorCode::InvalidArgument, "pc needs at least two columns");
    auto test = make_ci_test(data, cfg.test);
    return pc(*test, cfg.alpha, cfg.max_depth, data.names(), cancel);
}

// ---- IAMB ---------------------------------------------------------------

std::vector<int> iamb(const CiTest& test, int target, double alpha, const CancelToken& cancel) {
    const int p = test.n_vars();
    if (target < 0 || target >= p) throw Error(ErrorCode::InvalidArgument, "invalid IAMB target");
    std::vector<int> mb;
    auto in_mb = [&](int v) { return std::find(mb.begin(), mb.end(), v) != mb.end(); };
    for (int round = 0; round < 4 * p + 4; ++round) {
        cancel.check();
        int best = -1;
        CiResult best_r;
        for (int c = 0; c < p; ++c) {
            if (c == target || in_mb(c)) continue;
            CiResult r = test.test(target, c, mb);
            if (best < 0 || r.p_value < best_r.p_value ||
                (r.p_value == best_r.p_value && r.statistic > best_r.statistic)) {
                best = c;
                best_r = r;
            }
        }
        if (best < 0 || !(best_r.p_value < alpha)) break;
        mb.push_back(best);
        std::sort(mb.begin(), mb.end());
        bool removed = true;
        while (removed) {
            removed = false;
            for (std::size_t k = 0; k < mb.size(); ++k) {
                std::vector<int> rest;
                for (int v : mb)
                    if (v != mb[k]) rest.push_back(v);
                if (is_independent(test.test(target, mb[k], rest), alpha)) {
                    mb.erase(mb.begin() + static_cast<std::ptrdiff_t>(k));
                    removed = true;
                    break;
                }
            }
        }
    }
    return mb;
}

std::vector<int> iamb(const Dataset& data, int target, double alpha, CiTestKind kind) {
    auto test = make_ci_test(data, kind);
    return iamb(*test, target, alpha);
}

Cpdag mb_to_cpdag(const std::vector<std::vector<int>>& blankets, const CiTest& test, double alpha,
                  std::vector<std::string> labels, const CancelToken& cancel) {
    const int p = test.n_vars();
    if (static_cast<int>(blankets.size()) != p) throw Error(ErrorCode::DimensionMismatch, "one blanket per node");
    auto member = [&](int a, int b) {
        const auto& m = blankets[static_cast<std::size_t>(a)];
        return std::find(m.begin(), m.end(), b) != m.end();
    };
    BoolMatrix adj = BoolMatrix::Constant(p, p, false);
    SepsetMap sepsets;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            if (!member(i, j) || !member(j, i)) continue;
            cancel.check();
            std::vector<int> bi, bj;
            for (int v : blankets[static_cast<std::size_t>(i)])
                if (v != j) bi.push_back(v);
            for (int v : blankets[static_cast<std::size_t>(j)])
                if (v != i) bj.push_back(v);
            std::sort(bi.begin(), bi.end());
            std::sort(bj.begin(), bj.end());
            const std::vector<int>& small = bi.size() <= bj.size() ? bi : bj;
            const std::vector<int>& large = bi.size() <= bj.size() ? bj : bi;
            bool separated = false;
            const int top = static_cast<int>(large.size());
            for (int level = 0; level <= top && !separated; ++level)
                for (const auto* pool : {&small, &large}) {
                    separated = for_each_subset(*pool, level, [&](const std::vector<int>& s) {
                        if (!is_independent(test.test(i, j, s), alpha)) return false;
                        sepsets[{i, j}] = s;
                        return true;
                    });
                    if (separated) break;
                }
            if (!separated) adj(i, j) = adj(j, i) = true;
        }
    return orient_from_sepsets(adj, sepsets, std::move(labels));
}

Cpdag iamb_cpdag(const Dataset& data, double alpha, CiTestKind kind, const CancelToken& cancel) {
    auto test = make_ci_test(data, kind);
    const int p = test->n_vars();
    std::vector<std::vector<int>> blankets;
    for (int t = 0; t < p; ++t) blankets.push_back(iamb(*test, t, alpha, cancel));
    return mb_to_cpdag(blankets, *test, alpha, data.names(), cancel);
}

}  // namespace causal_atlas
