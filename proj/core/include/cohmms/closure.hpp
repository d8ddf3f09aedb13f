#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <utility>

#include "cohmms/kernel.hpp"

namespace cohmms {

/// One cell of X x X.
struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
    auto operator<=>(const Cell&) const = default;
};

template <class T>
struct IntersectionEntry {
    int i = 0; // class of (x, y)
    int j = 0; // class of (y, z)
    T weight{}; // sum of mu(y) over admissible middle points
};

/// The stabilized partition of X x X together with its weighted intersection
/// tensor. Class ids are canonical: class k first appears before class k+1
/// in a row-major scan. The tensor is stored sparsely per class; a class has
/// at most n nonzero (i, j) slots.
template <class T>
struct CoherentPartition {
    SpacePtr<T> space;
    Matrix<int> class_of;
    int class_count = 0;
    std::vector<std::vector<IntersectionEntry<T>>> intersection;
    std::vector<std::string> warnings;
    int rounds = 0;

    int cells() const { return class_of.rows() * class_of.cols(); }
};

template <class T>
struct FullnessCertificate {
    bool full = false;
    int class_count = 0;
    int cell_count = 0;
    std::optional<std::pair<Cell, Cell>> witness;
    std::string consequence;
};

struct AxiomViolation {
    enum class Kind { Diagonal, Opposite, IntersectionConstancy };
    Kind kind;
    std::string message;
};

struct VerificationReport {
    std::vector<AxiomViolation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

/// Canonical relabeling: ids assigned by first occurrence in row-major order.
inline int canonicalize(Matrix<int>& labels) {
    const int n = labels.rows();
    std::map<int, int> remap;
    int next = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            auto [it, inserted] = remap.emplace(labels(x, y), next);
            if (inserted) ++next;
            labels(x, y) = it->second;
        }
    return next;
}

/// Initial coloring: the diagonal is its own color (d = 0 exactly, by the
/// metric axioms), off-diagonal cells are grouped by d-value per the policy.
template <class T>
Matrix<int> initial_coloring(const FiniteMMS<T>& space, const NumericPolicy& policy,
                             std::vector<GroupingWarning>* warnings) {
    const int n = space.size();
    std::vector<T> offdiag;
    offdiag.reserve(static_cast<size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y) offdiag.push_back(space.dist(x, y));

    std::vector<int> gids = group_values(offdiag, policy, warnings);
    Matrix<int> colors = Matrix<int>::square(n, 0);
    size_t k = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            colors(x, y) = (x == y) ? 0 : gids[k++] + 1;
        }
    canonicalize(colors);
    return colors;
}

template <class T>
using CellSums = std::map<std::pair<int, int>, T>;

/// The per-cell weighted profile: (i, j) -> sum of mu(y) over middle points y
/// with color(x, y) = i and color(y, z) = j.
template <class T>
CellSums<T> cell_profile(const FiniteMMS<T>& space, const Matrix<int>& colors, int x, int z) {
    CellSums<T> acc;
    const int n = space.size();
    for (int y = 0; y < n; ++y) {
        acc[{colors(x, y), colors(y, z)}] += space.mu[y];
    }
    return acc;
}

} // namespace detail

/// Weighted pair refinement. Each round recolors a cell (x, z) by the tuple
/// (old color of (x, z), old color of (z, x), its weighted profile); the flip
/// color is part of the tuple so the stable partition is closed under
/// opposites, not just under the two products. Stops at the first round that
/// produces no split.
template <class T>
CoherentPartition<T> coherent_closure(const FiniteMMS<T>& space_in, const NumericPolicy& policy) {
    SpacePtr<T> space = share(space_in);
    const int n = space->size();

    std::vector<GroupingWarning> gw;
    Matrix<int> colors = detail::initial_coloring(*space, policy, &gw);
    int count = detail::canonicalize(colors);

    int rounds = 0;
    while (true) {
        // Profiles for every cell, then one global grouping pass over all the
        // sums so float equality is decided by the same gap rule everywhere.
        std::vector<detail::CellSums<T>> profiles;
        profiles.reserve(static_cast<size_t>(n) * n);
        std::vector<T> all_sums;
        for (int x = 0; x < n; ++x)
            for (int z = 0; z < n; ++z) {
                profiles.push_back(detail::cell_profile(*space, colors, x, z));
                for (const auto& [key, sum] : profiles.back()) all_sums.push_back(sum);
            }
        std::vector<int> sum_ids = group_values(all_sums, policy, &gw);

        using Signature = std::tuple<int, int, std::vector<std::tuple<int, int, int>>>;
        std::map<Signature, int> relabel;
        Matrix<int> next = Matrix<int>::square(n, 0);
        size_t sum_cursor = 0;
        int next_count = 0;
        for (int x = 0; x < n; ++x)
            for (int z = 0; z < n; ++z) {
                const auto& profile = profiles[static_cast<size_t>(x) * n + z];
                std::vector<std::tuple<int, int, int>> keyed;
                keyed.reserve(profile.size());
                for (const auto& [key, sum] : profile) {
                    keyed.emplace_back(key.first, key.second, sum_ids[sum_cursor++]);
                }
                Signature sig{colors(x, z), colors(z, x), std::move(keyed)};
                auto [it, inserted] = relabel.emplace(std::move(sig), next_count);
                if (inserted) ++next_count;
                next(x, z) = it->second;
            }
        next_count = detail::canonicalize(next);

        if (next_count == count) break;
        if (next_count < count) {
            throw DomainError("refinement coarsened the partition; grouping is unstable");
        }
        colors = std::move(next);
        count = next_count;
        ++rounds;
    }

    CoherentPartition<T> part;
    part.space = space;
    part.class_of = std::move(colors);
    part.class_count = count;
    part.rounds = rounds;
    for (const auto& w : gw) part.warnings.push_back(w.to_string());

    // Intersection tensor from one representative per class (first cell in
    // row-major order). verify_configuration re-checks constancy across all
    // cells.
    part.intersection.assign(count, {});
    std::vector<bool> seen(count, false);
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) {
            const int k = part.class_of(x, z);
            if (seen[k]) continue;
            seen[k] = true;
            auto profile = detail::cell_profile(*space, part.class_of, x, z);
            for (const auto& [key, sum] : profile) {
                part.intersection[k].push_back({key.first, key.second, sum});
            }
        }
    return part;
}

template <class T>
CoherentPartition<T> coherent_closure(SpacePtr<T> space, const NumericPolicy& policy) {
    CoherentPartition<T> part = coherent_closure(*space, policy);
    part.space = std::move(space); // keep the caller's identity
    return part;
}

/// Exhaustive re-check of the three configuration axioms (diagonal classes,
/// opposite closure, constancy of the weighted intersection sums). Violations
/// are data, not errors.
template <class T>
VerificationReport verify_configuration(const CoherentPartition<T>& part,
                                        const NumericPolicy& policy) {
    using Kind = AxiomViolation::Kind;
    VerificationReport report;
    const int n = part.class_of.rows();
    const auto& cls = part.class_of;

    // Diagonal: every class is inside or disjoint from the diagonal.
    std::vector<int> on_diag(part.class_count, 0), off_diag(part.class_count, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            (x == y ? on_diag : off_diag)[cls(x, y)]++;
        }
    for (int k = 0; k < part.class_count; ++k) {
        if (on_diag[k] > 0 && off_diag[k] > 0) {
            report.violations.push_back({Kind::Diagonal, "class " + std::to_string(k) +
                                                             " mixes diagonal and off-diagonal cells"});
        }
    }

    // Opposites: the transpose image of each class is a single class.
    std::vector<int> opposite(part.class_count, -1);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int k = cls(x, y);
            const int flip_class = cls(y, x);
            if (opposite[k] == -1) {
                opposite[k] = flip_class;
            } else if (opposite[k] != flip_class) {
                report.violations.push_back(
                    {Kind::Opposite, "class " + std::to_string(k) + " has no single opposite class"});
                opposite[k] = flip_class;
            }
        }

    // Intersection constancy: every cell of a class must reproduce the stored
    // profile, under the same equality notion the construction used.
    double sum_scale = 1.0;
    if constexpr (!std::is_same_v<T, Rational>) {
        for (const auto& entries : part.intersection)
            for (const auto& e : entries) sum_scale = std::max(sum_scale, std::abs(e.weight));
    }
    auto sums_equal = [&](const T& a, const T& b) {
        if constexpr (std::is_same_v<T, Rational>) {
            return a == b;
        } else {
            return std::abs(a - b) <= policy.tol_group * sum_scale;
        }
    };

    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) {
            const int k = cls(x, z);
            auto profile = detail::cell_profile(*part.space, cls, x, z);
            const auto& stored = part.intersection[k];
            bool match = profile.size() == stored.size();
            if (match) {
                size_t idx = 0;
                for (const auto& [key, sum] : profile) {
                    const auto& e = stored[idx++];
                    if (key.first != e.i || key.second != e.j || !sums_equal(sum, e.weight)) {
                        match = false;
                        break;
                    }
                }
            }
            if (!match) {
                report.violations.push_back(
                    {Kind::IntersectionConstancy,
                     "cell (" + std::to_string(x) + ", " + std::to_string(z) + ") of class " +
                         std::to_string(k) + " deviates from the class intersection profile"});
            }
        }
    return report;
}

/// Rebuilds the derived data for a hand-supplied class matrix, so arbitrary
/// partitions can be pushed through verify_configuration.
template <class T>
CoherentPartition<T> partition_from_classes(SpacePtr<T> space, Matrix<int> class_of) {
    const int n = space->size();
    if (class_of.rows() != n || class_of.cols() != n) {
        throw StructuralError("class matrix does not match the space dimension");
    }
    CoherentPartition<T> part;
    part.class_count = detail::canonicalize(class_of);
    part.class_of = std::move(class_of);
    part.space = std::move(space);
    part.intersection.assign(part.class_count, {});
    std::vector<bool> seen(part.class_count, false);
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) {
            const int k = part.class_of(x, z);
            if (seen[k]) continue;
            seen[k] = true;
            auto profile = detail::cell_profile(*part.space, part.class_of, x, z);
            for (const auto& [key, sum] : profile)
                part.intersection[k].push_back({key.first, key.second, sum});
        }
    return part;
}

template <class T>
FullnessCertificate<T> fullness(const CoherentPartition<T>& part) {
    FullnessCertificate<T> cert;
    cert.class_count = part.class_count;
    cert.cell_count = part.cells();
    cert.full = (cert.class_count == cert.cell_count);
    if (cert.full) {
        cert.consequence = "every cell is its own coherence class: the space has trivial quantum "
                           "automorphism group (hence trivial classical isometry group)";
    } else {
        const int n = part.class_of.rows();
        std::vector<Cell> first(part.class_count, Cell{-1, -1});
        for (int x = 0; x < n && !cert.witness; ++x)
            for (int y = 0; y < n; ++y) {
                const int k = part.class_of(x, y);
                if (first[k].x == -1) {
                    first[k] = Cell{x, y};
                } else {
                    cert.witness = std::make_pair(first[k], Cell{x, y});
                    break;
                }
            }
        cert.consequence = "distinct cells share a coherence class; fullness-based triviality of "
                           "the (quantum) automorphism group cannot be concluded";
    }
    return cert;
}

/// d, all its convolution and Hadamard powers, and every member of the span
/// are constant on coherence classes; used all over the test surface.
template <class T>
bool constant_on_classes(const CoherentPartition<T>& part, const Matrix<T>& values,
                         const NumericPolicy& policy) {
    const int n = part.class_of.rows();
    double scale = 1.0;
    if constexpr (!std::is_same_v<T, Rational>) {
        for (const T& v : values.data()) scale = std::max(scale, std::abs(v));
    }
    std::vector<std::optional<T>> rep(part.class_count);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int k = part.class_of(x, y);
            if (!rep[k]) {
                rep[k] = values(x, y);
                continue;
            }
            if constexpr (std::is_same_v<T, Rational>) {
                if (*rep[k] != values(x, y)) return false;
            } else {
                if (std::abs(*rep[k] - values(x, y)) > policy.tol_group * scale) return false;
            }
        }
    return true;
}

} // namespace cohmms
