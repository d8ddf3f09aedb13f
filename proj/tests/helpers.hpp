#pragma once

#include <optional>
#include <vector>

#include "cohmms/space.hpp"

namespace cohmms::testing {

/// Brute-force optimal transport by vertex enumeration: every vertex of the
/// transportation polytope is supported on a spanning tree of the bipartite
/// cell graph, so enumerating all (R + C - 1)-subsets of cells, solving each
/// tree and keeping the feasible ones scans every vertex. Independent of the
/// network simplex by construction. Sizes up to about 4 x 4 are practical.
template <class T>
std::optional<T> enumerate_transport_cost(const Matrix<T>& cost, const std::vector<T>& a,
                                          const std::vector<T>& b) {
    const int R = static_cast<int>(a.size());
    const int C = static_cast<int>(b.size());
    const int cells = R * C;
    const int arcs = R + C - 1;
    if (arcs > cells) return std::nullopt;

    std::optional<T> best;
    std::vector<int> pick(arcs);
    for (int i = 0; i < arcs; ++i) pick[i] = i;

    auto evaluate = [&]() {
        // Union-find acyclicity check.
        std::vector<int> parent(R + C);
        for (int i = 0; i < R + C; ++i) parent[i] = i;
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int q = 0; q < arcs; ++q) {
            const int i = pick[q] / C, j = pick[q] % C;
            int ri = find(i), rj = find(R + j);
            if (ri == rj) return; // cycle
            parent[rj] = ri;
        }

        // Leaf elimination on the tree.
        std::vector<T> residual(R + C);
        for (int i = 0; i < R; ++i) residual[i] = a[i];
        for (int j = 0; j < C; ++j) residual[R + j] = b[j];
        std::vector<bool> used(arcs, false);
        std::vector<int> degree(R + C, 0);
        for (int q = 0; q < arcs; ++q) {
            ++degree[pick[q] / C];
            ++degree[R + pick[q] % C];
        }
        T total(0);
        bool feasible = true;
        for (int step = 0; step < arcs && feasible; ++step) {
            int leaf = -1;
            for (int node = 0; node < R + C; ++node)
                if (degree[node] == 1) {
                    leaf = node;
                    break;
                }
            if (leaf < 0) return;
            int chosen = -1;
            for (int q = 0; q < arcs; ++q) {
                if (used[q]) continue;
                const int i = pick[q] / C, j = pick[q] % C;
                if (i == leaf || R + j == leaf) {
                    chosen = q;
                    break;
                }
            }
            const int i = pick[chosen] / C, j = pick[chosen] % C;
            T f = residual[leaf];
            if (f < T(0)) {
                if constexpr (std::is_same_v<T, Rational>) {
                    feasible = false;
                    break;
                } else {
                    if (-f > 1e-12) {
                        feasible = false;
                        break;
                    }
                    f = T(0);
                }
            }
            total += cost(i, j) * f;
            const int other = (leaf == i) ? R + j : i;
            residual[other] -= f;
            residual[leaf] = T(0);
            used[chosen] = true;
            --degree[leaf];
            --degree[other];
        }
        if (!feasible) return;
        for (int node = 0; node < R + C; ++node) {
            bool zero;
            if constexpr (std::is_same_v<T, Rational>) {
                zero = residual[node] == T(0);
            } else {
                zero = std::abs(to_double(residual[node])) <= 1e-9;
            }
            if (!zero) return;
        }
        if (!best || total < *best) best = total;
    };

    // Enumerate all arc subsets of the right size.
    while (true) {
        evaluate();
        int pos = arcs - 1;
        while (pos >= 0 && pick[pos] == cells - arcs + pos) --pos;
        if (pos < 0) break;
        ++pick[pos];
        for (int q = pos + 1; q < arcs; ++q) pick[q] = pick[q - 1] + 1;
    }
    return best;
}

/// All maps X -> Y in lexicographic order.
inline std::vector<std::vector<int>> all_maps(int n, int m) {
    std::vector<std::vector<int>> maps;
    std::vector<int> f(n, 0);
    while (true) {
        maps.push_back(f);
        int pos = n - 1;
        while (pos >= 0 && f[pos] == m - 1) f[pos--] = 0;
        if (pos < 0) break;
        ++f[pos];
    }
    return maps;
}

} // namespace cohmms::testing
