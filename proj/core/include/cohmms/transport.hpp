#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

#include "cohmms/rng.hpp"
#include "cohmms/space.hpp"

namespace cohmms {

/// An optimal coupling between two measures, with optimality evidence.
/// `objective` is the raw transport cost sum(c * pi); `cost` is its p-th
/// root (exact for p = 1, which is the only place exactness is promised).
template <class T>
struct TransportPlan {
    Matrix<T> pi;
    T objective{};
    T cost{};
    double dual_residual = 0.0; // max(0, -min reduced cost) over all cells
    double cs_residual = 0.0;   // max |reduced cost| over cells carrying mass
    int pivots = 0;
};

namespace detail {

/// Transportation-network simplex. Degeneracy is resolved by perturbing the
/// supplies (a_i += delta * (i + 1), absorbed by the last demand) so every
/// basic flow stays positive and the leaving arc is unique; the perturbation
/// is removed at extraction by re-solving the final tree against the
/// original marginals.
template <class T>
class TransportSimplex {
public:
    TransportSimplex(const Matrix<T>& cost, std::vector<T> supply, std::vector<T> demand)
        : cost_(cost), a_(std::move(supply)), b_(std::move(demand)),
          R_(static_cast<int>(a_.size())), C_(static_cast<int>(b_.size())) {}

    TransportPlan<T> solve() {
        perturb_supplies();
        northwest_corner();
        const long long pivot_guard = 1000LL + 200LL * (R_ + C_) * std::max(R_, C_);
        int pivots = 0;
        while (true) {
            compute_duals();
            auto entering = find_entering();
            if (!entering) break;
            if (++pivots > pivot_guard) {
                throw DomainError("transport simplex exceeded its pivot guard");
            }
            pivot(entering->first, entering->second);
        }
        compute_duals();
        return extract(pivots);
    }

private:
    static constexpr bool exact = std::is_same_v<T, Rational>;

    void perturb_supplies() {
        a0_ = a_;
        b0_ = b_;
        T delta;
        if constexpr (exact) {
            BigInt l(1);
            for (const T& v : a_) l = boost::multiprecision::lcm(l, denominator(v));
            for (const T& v : b_) l = boost::multiprecision::lcm(l, denominator(v));
            const int k = R_ + C_ + 2;
            delta = Rational(BigInt(1), l * 4 * k * k);
        } else {
            delta = 1e-12 / (R_ + C_ + 2);
        }
        T total(0);
        for (int i = 0; i < R_; ++i) {
            a_[i] += delta * T(i + 1);
            total += delta * T(i + 1);
        }
        b_[C_ - 1] += total;
    }

    void northwest_corner() {
        flow_.assign(static_cast<size_t>(R_) * C_, T(0));
        basic_.assign(static_cast<size_t>(R_) * C_, false);
        std::vector<T> a = a_, b = b_;
        int i = 0, j = 0;
        while (i < R_ && j < C_) {
            set_basic(i, j, true);
            const T f = std::min(a[i], b[j]);
            flow(i, j) = f;
            a[i] -= f;
            b[j] -= f;
            if (i == R_ - 1 && j == C_ - 1) break;
            // Perturbation rules out simultaneous exhaustion away from the
            // final cell, so exactly one side advances.
            if (a[i] == T(0) && i < R_ - 1) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    T& flow(int i, int j) { return flow_[static_cast<size_t>(i) * C_ + j]; }
    bool is_basic(int i, int j) const { return basic_[static_cast<size_t>(i) * C_ + j]; }
    void set_basic(int i, int j, bool v) { basic_[static_cast<size_t>(i) * C_ + j] = v; }

    // Nodes: rows are 0..R-1, columns are R..R+C-1.
    void compute_duals() {
        u_.assign(R_, T(0));
        v_.assign(C_, T(0));
        std::vector<bool> known(R_ + C_, false);
        std::deque<int> queue{0};
        known[0] = true;
        while (!queue.empty()) {
            const int node = queue.front();
            queue.pop_front();
            if (node < R_) {
                for (int j = 0; j < C_; ++j) {
                    if (!is_basic(node, j) || known[R_ + j]) continue;
                    v_[j] = cost_(node, j) - u_[node];
                    known[R_ + j] = true;
                    queue.push_back(R_ + j);
                }
            } else {
                const int j = node - R_;
                for (int i = 0; i < R_; ++i) {
                    if (!is_basic(i, j) || known[i]) continue;
                    u_[i] = cost_(i, j) - v_[j];
                    known[i] = true;
                    queue.push_back(i);
                }
            }
        }
    }

    std::optional<std::pair<int, int>> find_entering() const {
        std::optional<std::pair<int, int>> best;
        T best_reduced(0);
        for (int i = 0; i < R_; ++i)
            for (int j = 0; j < C_; ++j) {
                if (is_basic(i, j)) continue;
                const T reduced = cost_(i, j) - u_[i] - v_[j];
                if (reduced < best_reduced) {
                    best_reduced = reduced;
                    best = std::make_pair(i, j);
                }
            }
        return best;
    }

    /// The unique tree path between two nodes, as a node sequence.
    std::vector<int> tree_path(int from, int to) const {
        std::vector<int> parent(R_ + C_, -1);
        std::vector<bool> seen(R_ + C_, false);
        std::deque<int> queue{from};
        seen[from] = true;
        while (!queue.empty()) {
            const int node = queue.front();
            queue.pop_front();
            if (node == to) break;
            if (node < R_) {
                for (int j = 0; j < C_; ++j) {
                    if (!is_basic(node, j) || seen[R_ + j]) continue;
                    seen[R_ + j] = true;
                    parent[R_ + j] = node;
                    queue.push_back(R_ + j);
                }
            } else {
                const int j = node - R_;
                for (int i = 0; i < R_; ++i) {
                    if (!is_basic(i, j) || seen[i]) continue;
                    seen[i] = true;
                    parent[i] = node;
                    queue.push_back(i);
                }
            }
        }
        std::vector<int> path;
        for (int node = to; node != -1; node = parent[node]) path.push_back(node);
        std::reverse(path.begin(), path.end());
        return path;
    }

    void pivot(int ei, int ej) {
        // Cycle = entering arc (+) closed by the tree path from row ei to
        // column ej; signs alternate along the path starting with -.
        std::vector<int> path = tree_path(ei, R_ + ej);
        struct Arc {
            int i, j;
            bool minus;
        };
        std::vector<Arc> arcs;
        for (size_t q = 0; q + 1 < path.size(); ++q) {
            const int u = path[q], w = path[q + 1];
            const int i = (u < R_) ? u : w;
            const int j = (u < R_) ? w - R_ : u - R_;
            arcs.push_back({i, j, q % 2 == 0});
        }

        std::optional<T> theta;
        int leave = -1;
        for (size_t q = 0; q < arcs.size(); ++q) {
            if (!arcs[q].minus) continue;
            const T f = flow_[static_cast<size_t>(arcs[q].i) * C_ + arcs[q].j];
            if (!theta || f < *theta) {
                theta = f;
                leave = static_cast<int>(q);
            }
        }
        if (!theta) throw DomainError("transport simplex found no leaving arc");

        flow(ei, ej) += *theta;
        set_basic(ei, ej, true);
        for (const Arc& arc : arcs) {
            if (arc.minus) {
                flow(arc.i, arc.j) -= *theta;
            } else {
                flow(arc.i, arc.j) += *theta;
            }
        }
        set_basic(arcs[leave].i, arcs[leave].j, false);
        flow(arcs[leave].i, arcs[leave].j) = T(0);
    }

    /// Re-solves the final tree against the unperturbed marginals by leaf
    /// elimination, then certifies optimality from the duals.
    TransportPlan<T> extract(int pivots) {
        std::vector<T> residual(R_ + C_);
        for (int i = 0; i < R_; ++i) residual[i] = a0_[i];
        for (int j = 0; j < C_; ++j) residual[R_ + j] = b0_[j];

        std::vector<int> degree(R_ + C_, 0);
        for (int i = 0; i < R_; ++i)
            for (int j = 0; j < C_; ++j)
                if (is_basic(i, j)) {
                    ++degree[i];
                    ++degree[R_ + j];
                }

        Matrix<T> pi(R_, C_, T(0));
        std::vector<bool> done(static_cast<size_t>(R_) * C_, false);
        std::deque<int> leaves;
        for (int node = 0; node < R_ + C_; ++node)
            if (degree[node] == 1) leaves.push_back(node);

        while (!leaves.empty()) {
            const int node = leaves.front();
            leaves.pop_front();
            if (degree[node] != 1) continue;
            int oi = -1, oj = -1;
            if (node < R_) {
                for (int j = 0; j < C_; ++j)
                    if (is_basic(node, j) && !done[static_cast<size_t>(node) * C_ + j]) {
                        oi = node;
                        oj = j;
                        break;
                    }
            } else {
                const int j = node - R_;
                for (int i = 0; i < R_; ++i)
                    if (is_basic(i, j) && !done[static_cast<size_t>(i) * C_ + j]) {
                        oi = i;
                        oj = j;
                        break;
                    }
            }
            if (oi < 0) continue;
            T f = residual[node];
            if constexpr (!exact) {
                f = std::max(f, T(0)); // clamp perturbation residue
            }
            pi(oi, oj) = f;
            done[static_cast<size_t>(oi) * C_ + oj] = true;
            const int other = (node < R_) ? R_ + oj : oi;
            residual[other] -= f;
            residual[node] = T(0);
            if (--degree[other] == 1) leaves.push_back(other);
            --degree[node];
        }

        TransportPlan<T> plan;
        plan.pivots = pivots;
        T objective(0);
        for (int i = 0; i < R_; ++i)
            for (int j = 0; j < C_; ++j) {
                if constexpr (exact) {
                    if (pi(i, j) < T(0)) {
                        throw DomainError("transport extraction produced a negative flow; "
                                          "the degeneracy perturbation was too coarse");
                    }
                }
                objective += cost_(i, j) * pi(i, j);
            }
        plan.objective = objective;
        plan.pi = std::move(pi);

        double dual = 0.0, cs = 0.0;
        for (int i = 0; i < R_; ++i)
            for (int j = 0; j < C_; ++j) {
                const double reduced = to_double(T(cost_(i, j) - u_[i] - v_[j]));
                dual = std::min(dual, reduced);
                if (plan.pi(i, j) > T(0)) cs = std::max(cs, std::abs(reduced));
            }
        plan.dual_residual = -dual;
        plan.cs_residual = cs;
        return plan;
    }

    const Matrix<T>& cost_;
    std::vector<T> a_, b_, a0_, b0_;
    int R_, C_;
    std::vector<T> flow_;
    std::vector<bool> basic_;
    std::vector<T> u_, v_;
};

template <class T>
T pow_entry(const T& base, double p) {
    if constexpr (std::is_same_v<T, Rational>) {
        const long long k = static_cast<long long>(p);
        if (static_cast<double>(k) != p || k < 1) {
            throw DomainError("exact-rational transport supports integer p >= 1 only");
        }
        T out(1);
        for (long long t = 0; t < k; ++t) out *= base;
        return out;
    } else {
        return p == 1.0 ? base : std::pow(base, p);
    }
}

template <class T>
T root_p(const T& value, double p) {
    if (p == 1.0) return value;
    if constexpr (std::is_same_v<T, Rational>) {
        if (value == T(0)) return T(0);
        return rational_from_double(std::pow(to_double(value), 1.0 / p));
    } else {
        return std::pow(value, 1.0 / p);
    }
}

} // namespace detail

/// Exact optimal coupling between two nonnegative measures of equal mass
/// living on row/column index sets with the given cost matrix.
template <class T>
TransportPlan<T> solve_transport(const Matrix<T>& cost, const std::vector<T>& a,
                                 const std::vector<T>& b, double tol_mass = 1e-9) {
    if (cost.rows() != static_cast<int>(a.size()) || cost.cols() != static_cast<int>(b.size())) {
        throw StructuralError("cost matrix does not match the marginal lengths");
    }
    for (const T& x : a)
        if (x < T(0)) throw StructuralError("negative source mass");
    for (const T& x : b)
        if (x < T(0)) throw StructuralError("negative target mass");

    T sa(0), sb(0);
    for (const T& x : a) sa += x;
    for (const T& x : b) sb += x;
    std::vector<T> b_scaled = b;
    if constexpr (std::is_same_v<T, Rational>) {
        if (sa != sb) throw StructuralError("infeasible marginals: masses differ");
    } else {
        if (std::abs(to_double(sa) - to_double(sb)) > tol_mass) {
            throw StructuralError("infeasible marginals: masses differ beyond tolerance");
        }
        if (sb != T(0)) {
            for (T& x : b_scaled) x *= sa / sb;
        }
    }
    detail::TransportSimplex<T> simplex(cost, a, b_scaled);
    return simplex.solve();
}

/// W_p between two measures on a common space, with cost d^p; the plan's
/// `cost` is the p-th root of the optimal objective.
template <class T>
TransportPlan<T> wasserstein_between(SpacePtr<T> space, const std::vector<T>& mu,
                                     const std::vector<T>& nu, double p = 1.0,
                                     const NumericPolicy& policy = NumericPolicy::floating()) {
    if (p < 1.0) throw StructuralError("wasserstein requires p >= 1");
    const int n = space->size();
    if (static_cast<int>(mu.size()) != n || static_cast<int>(nu.size()) != n) {
        throw StructuralError("measure length does not match the space");
    }
    Matrix<T> cost = Matrix<T>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cost(i, j) = (i == j) ? T(0) : detail::pow_entry(space->dist(i, j), p);
    TransportPlan<T> plan = solve_transport(cost, mu, nu, policy.tol_mass);
    plan.cost = detail::root_p(plan.objective, p);
    return plan;
}

/// W_p between the space's own measure and nu.
template <class T>
TransportPlan<T> wasserstein(SpacePtr<T> space, const std::vector<T>& nu, double p = 1.0,
                             const NumericPolicy& policy = NumericPolicy::floating()) {
    return wasserstein_between(space, space->mu, nu, p, policy);
}

/// A candidate map X -> Y with the three components of its t-isometry score:
/// metric distortion, covering defect of the image, and the Wasserstein
/// mismatch of the pushforward measure. score = max of the three, so
/// score <= t exactly when f is a t-isometry with W_p pushforward error <= t.
template <class T>
struct MapScore {
    std::vector<int> map;
    T distortion{};
    T covering{};
    T wp{};
    T score{};
};

template <class T>
MapScore<T> score_map(const FiniteMMS<T>& x_space, SpacePtr<T> y_space,
                      const std::vector<int>& f, double p,
                      const NumericPolicy& policy = NumericPolicy::floating()) {
    const int n = x_space.size();
    const int m = y_space->size();
    MapScore<T> out;
    out.map = f;

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const T diff = scalar_abs(T(y_space->dist(f[a], f[b]) - x_space.dist(a, b)));
            out.distortion = std::max(out.distortion, diff);
        }

    for (int y = 0; y < m; ++y) {
        std::optional<T> nearest;
        for (int a = 0; a < n; ++a) {
            const T d = y_space->dist(y, f[a]);
            if (!nearest || d < *nearest) nearest = d;
        }
        out.covering = std::max(out.covering, *nearest);
    }

    std::vector<T> pushforward(m, T(0));
    for (int a = 0; a < n; ++a) pushforward[f[a]] += x_space.mu[a];
    out.wp = wasserstein_between(y_space, pushforward, y_space->mu, p, policy).cost;

    out.score = std::max({out.distortion, out.covering, out.wp});
    return out;
}

template <class T>
struct DpEstimate {
    T upper{};
    MapScore<T> best;
    bool exact = false;
    long long maps_evaluated = 0;
};

/// Upper bound on the D_p quasimetric by minimizing the map score over
/// functions X -> Y (which need be neither injective nor surjective). For
/// finite spaces the infimum is attained among point maps, so exhaustive
/// mode is exact; beyond the budget, seeded restarts with single-point
/// reassignment hill climbing give an upper bound. The candidate stream is
/// fixed by the seed schedule, so a larger budget only extends it.
template <class T>
DpEstimate<T> dp_estimate(SpacePtr<T> x_space, SpacePtr<T> y_space, double p = 1.0,
                          double budget = 1e5,
                          const NumericPolicy& policy = NumericPolicy::floating()) {
    if (p < 1.0) throw StructuralError("dp_estimate requires p >= 1");
    const int n = x_space->size();
    const int m = y_space->size();
    DpEstimate<T> result;

    auto better = [](const MapScore<T>& a, const MapScore<T>& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.map < b.map;
    };

    std::optional<MapScore<T>> best;
    auto consider = [&](const std::vector<int>& f) {
        MapScore<T> s = score_map(*x_space, y_space, f, p, policy);
        ++result.maps_evaluated;
        if (!best || better(s, *best)) best = std::move(s);
    };

    const double total_maps = std::pow(static_cast<double>(m), static_cast<double>(n));
    if (total_maps <= budget) {
        std::vector<int> f(n, 0);
        while (true) {
            consider(f);
            int pos = n - 1;
            while (pos >= 0 && f[pos] == m - 1) f[pos--] = 0;
            if (pos < 0) break;
            ++f[pos];
        }
        result.exact = true;
    } else {
        const long long cap = static_cast<long long>(budget);
        // Deterministic warm start, then seeded restarts.
        std::vector<int> f(n);
        for (int a = 0; a < n; ++a) f[a] = std::min(a, m - 1);
        consider(f);
        for (std::uint64_t restart = 0; result.maps_evaluated < cap; ++restart) {
            Rng rng(hash_seed(0x64705f31ULL, restart));
            std::vector<int> g(n);
            if (restart == 0) {
                g = f; // climb from the warm start first
            } else {
                for (int a = 0; a < n; ++a) g[a] = rng.below(m);
            }
            MapScore<T> current = score_map(*x_space, y_space, g, p, policy);
            ++result.maps_evaluated;
            if (!best || better(current, *best)) best = current;

            bool improved = true;
            while (improved && result.maps_evaluated < cap) {
                improved = false;
                for (int a = 0; a < n && result.maps_evaluated < cap; ++a) {
                    const int original = g[a];
                    for (int y = 0; y < m && result.maps_evaluated < cap; ++y) {
                        if (y == original) continue;
                        g[a] = y;
                        MapScore<T> s = score_map(*x_space, y_space, g, p, policy);
                        ++result.maps_evaluated;
                        if (better(s, current)) {
                            current = s;
                            improved = true;
                        } else {
                            g[a] = original;
                        }
                        if (improved) break;
                    }
                    if (improved) break;
                }
            }
            if (!best || better(current, *best)) best = current;
        }
        result.exact = false;
    }

    result.best = *best;
    result.upper = result.best.score;
    return result;
}

/// D_p(X, Y) + D_p(Y, X); the symmetrization that metrizes the topology.
template <class T>
T symmetrized_distance(SpacePtr<T> x_space, SpacePtr<T> y_space, double p = 1.0,
                       double budget = 1e5,
                       const NumericPolicy& policy = NumericPolicy::floating()) {
    return dp_estimate(x_space, y_space, p, budget, policy).upper +
           dp_estimate(y_space, x_space, p, budget, policy).upper;
}

} // namespace cohmms
