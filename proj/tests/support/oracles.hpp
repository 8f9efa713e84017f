#pragma once

// Brute-force references used only by tests. Nothing here calls into the
// library's graph algorithms, so the checks stay independent.

#include <array>
#include <functional>
#include <vector>

#include "causal_atlas/types.hpp"

namespace oracle {

using causal_atlas::BoolMatrix;

inline bool acyclic(const BoolMatrix& e) {
    const int n = static_cast<int>(e.rows());
    std::vector<int> color(n, 0);
    std::function<bool(int)> dfs = [&](int v) {
        color[v] = 1;
        for (int w = 0; w < n; ++w) {
            if (!e(v, w)) continue;
            if (color[w] == 1) return false;
            if (color[w] == 0 && !dfs(w)) return false;
        }
        color[v] = 2;
        return true;
    };
    for (int v = 0; v < n; ++v)
        if (color[v] == 0 && !dfs(v)) return false;
    return true;
}

/// Set of v-structures as (a, c, b) triples with a < b.
inline std::vector<std::array<int, 3>> v_structures(const BoolMatrix& e) {
    std::vector<std::array<int, 3>> out;
    const int n = static_cast<int>(e.rows());
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (e(a, c) && e(b, c) && !e(a, b) && !e(b, a)) out.push_back({a, c, b});
    return out;
}

/// Every DAG on n nodes (n <= 5 keeps this cheap).
inline std::vector<BoolMatrix> all_dags(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::size_t total = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
    std::vector<BoolMatrix> out;
    for (std::size_t code = 0; code < total; ++code) {
        BoolMatrix e = BoolMatrix::Constant(n, n, false);
        std::size_t c = code;
        for (auto [i, j] : pairs) {
            int s = static_cast<int>(c % 3);
            c /= 3;
            if (s == 1) e(i, j) = true;
            if (s == 2) e(j, i) = true;
        }
        if (acyclic(e)) out.push_back(e);
    }
    return out;
}

/// All DAGs Markov equivalent to `dag`: same skeleton, same v-structures.
inline std::vector<BoolMatrix> equivalence_class(const BoolMatrix& dag) {
    const int n = static_cast<int>(dag.rows());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dag(i, j) || dag(j, i)) pairs.emplace_back(i, j);
    auto target = v_structures(dag);
    std::vector<BoolMatrix> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
        BoolMatrix e = BoolMatrix::Constant(n, n, false);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            auto [i, j] = pairs[k];
            if (mask >> k & 1) e(i, j) = true; else e(j, i) = true;
        }
        if (acyclic(e) && v_structures(e) == target) out.push_back(e);
    }
    return out;
}

/// CPDAG of `dag` by enumeration: an edge is directed iff every class member agrees.
inline std::pair<BoolMatrix, BoolMatrix> cpdag_by_enumeration(const BoolMatrix& dag) {
    const int n = static_cast<int>(dag.rows());
    auto members = equivalence_class(dag);
    BoolMatrix dir = BoolMatrix::Constant(n, n, false), und = BoolMatrix::Constant(n, n, false);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!dag(i, j) && !dag(j, i)) continue;
            bool all_ij = true;
            for (const auto& m : members) all_ij = all_ij && m(i, j);
            if (all_ij) dir(i, j) = true;
            else if (!dag(i, j) || !dag(j, i)) {
                bool all_ji = true;
                for (const auto& m : members) all_ji = all_ji && m(j, i);
                if (!all_ji) und(i, j) = und(j, i) = true;
            }
        }
    return {dir, und};
}


/// d-separation by the moralized ancestral graph criterion.
inline bool d_separated(const BoolMatrix& dag, int x, int y, const std::vector<int>& z) {
    const int n = static_cast<int>(dag.rows());
    std::vector<bool> anc(n, false), given(n, false);
    std::vector<int> stack = {x, y};
    for (int v : z) stack.push_back(v), given[v] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (anc[v]) continue;
        anc[v] = true;
        for (int u = 0; u < n; ++u)
            if (dag(u, v) && !anc[u]) stack.push_back(u);
    }
    BoolMatrix moral = BoolMatrix::Constant(n, n, false);
    for (int v = 0; v < n; ++v) {
        if (!anc[v]) continue;
        std::vector<int> parents;
        for (int u = 0; u < n; ++u)
            if (anc[u] && dag(u, v)) parents.push_back(u), moral(u, v) = moral(v, u) = true;
        for (std::size_t a = 0; a < parents.size(); ++a)
            for (std::size_t b = a + 1; b < parents.size(); ++b)
                moral(parents[a], parents[b]) = moral(parents[b], parents[a]) = true;
    }
    std::vector<bool> seen(n, false);
    stack = {x};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == y) return false;
        if (seen[v]) continue;
        seen[v] = true;
        for (int u = 0; u < n; ++u)
            if (moral(v, u) && !given[u] && !seen[u]) stack.push_back(u);
    }
    return true;
}

}  // namespace oracle
