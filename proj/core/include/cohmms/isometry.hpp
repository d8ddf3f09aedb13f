#pragma once

#include <functional>
#include <map>
#include <numeric>

#include "cohmms/space.hpp"

namespace cohmms {

/// Orbit partition of X x X under the diagonal action of the full isometry
/// group (permutations preserving d and mu exactly).
struct OrbitalPartition {
    Matrix<int> orbit_of;
    int orbit_count = 0;
    int group_order = 0;
    std::vector<std::vector<int>> group; // all automorphisms, identity first
};

namespace detail {

template <class T>
void search_isometries(const FiniteMMS<T>& space, std::vector<int>& image,
                       std::vector<bool>& used, int depth,
                       std::vector<std::vector<int>>& found) {
    const int n = space.size();
    if (depth == n) {
        found.push_back(image);
        return;
    }
    for (int c = 0; c < n; ++c) {
        if (used[c]) continue;
        if (space.mu[c] != space.mu[depth]) continue;
        bool compatible = true;
        for (int j = 0; j < depth; ++j) {
            if (space.dist(c, image[j]) != space.dist(depth, j)) {
                compatible = false;
                break;
            }
        }
        if (!compatible) continue;
        image[depth] = c;
        used[c] = true;
        search_isometries(space, image, used, depth + 1, found);
        used[c] = false;
    }
}

} // namespace detail

/// Enumerates the distance- and measure-preserving permutations by pruned
/// backtracking and returns the orbit partition of X x X. Equality is exact:
/// an isometry that only holds up to tolerance would produce orbitals the
/// closure engine may legitimately split.
template <class T>
OrbitalPartition isometry_orbitals(const FiniteMMS<T>& space, int size_guard = 9) {
    const int n = space.size();
    if (n > size_guard) {
        throw DomainError("isometry_orbitals size guard exceeded: n = " + std::to_string(n) +
                          " > " + std::to_string(size_guard));
    }

    OrbitalPartition out;
    std::vector<int> image(n);
    std::vector<bool> used(n, false);
    detail::search_isometries(space, image, used, 0, out.group);
    out.group_order = static_cast<int>(out.group.size());

    // Union-find over cells; every group element links (x, y) ~ (gx, gy).
    const int cells = n * n;
    std::vector<int> parent(cells);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    for (const auto& g : out.group)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                int a = find(x * n + y);
                int b = find(g[x] * n + g[y]);
                if (a != b) parent[b] = a;
            }

    out.orbit_of = Matrix<int>::square(n);
    std::map<int, int> canonical;
    int next = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int root = find(x * n + y);
            auto [it, inserted] = canonical.emplace(root, next);
            if (inserted) ++next;
            out.orbit_of(x, y) = it->second;
        }
    out.orbit_count = next;
    return out;
}

} // namespace cohmms
