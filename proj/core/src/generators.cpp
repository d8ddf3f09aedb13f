#include "cohmms/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cohmms/kernel.hpp"
#include "cohmms/rng.hpp"

namespace cohmms {

namespace {

std::vector<double> sample_measure(int n, MeasureMode measure, Rng& rng) {
    if (measure == MeasureMode::Uniform) {
        return std::vector<double>(n, 1.0 / n);
    }
    // Dirichlet(1,...,1) via normalized exponentials, floored away from zero
    // before renormalization so the measure stays faithful.
    std::vector<double> mu(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        mu[i] = -std::log(1.0 - rng.uniform01());
        total += mu[i];
    }
    const double floor = 1e-6 / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        mu[i] = std::max(mu[i] / total, floor);
        sum += mu[i];
    }
    for (int i = 0; i < n; ++i) mu[i] /= sum;
    return mu;
}

} // namespace

FiniteMMS<double> random_euclidean(int n, int dim, std::uint64_t seed, MeasureMode measure) {
    if (n < 1) throw StructuralError("random_euclidean requires n >= 1");
    if (dim < 1) throw StructuralError("random_euclidean requires dim >= 1");
    Rng rng(hash_seed(seed, 0x65756331ULL));

    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < dim; ++c) pts[i][c] = rng.uniform01();

    Matrix<double> dist = Matrix<double>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < dim; ++c) {
                double diff = pts[i][c] - pts[j][c];
                s += diff * diff;
            }
            dist(i, j) = dist(j, i) = std::sqrt(s);
        }

    std::vector<double> mu = sample_measure(n, measure, rng);
    return make_space(default_labels(n), std::move(dist), std::move(mu));
}

namespace {

bool offdiag_values_distinct(const Matrix<double>& d, const NumericPolicy& policy) {
    const int n = d.rows();
    std::vector<double> vals;
    vals.reserve(n * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) vals.push_back(d(i, j));
    if (vals.empty()) return true;
    auto ids = group_values(vals, policy);
    std::set<int> distinct(ids.begin(), ids.end());
    return distinct.size() == vals.size();
}

bool diag_power2_distinct(const FiniteMMS<double>& space, const NumericPolicy& policy) {
    auto sp = share(space);
    Kernel<double> d2 = conv_power(distance_kernel(sp), 2);
    const int n = space.size();
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = d2.values(i, i);
    auto ids = group_values(diag, policy);
    std::set<int> distinct(ids.begin(), ids.end());
    return distinct.size() == diag.size();
}

/// Shortest-path closure. For weights that already satisfy the triangle
/// inequality this is the identity; otherwise it is the canonical metric
/// repair, and it can only decrease entries.
void floyd_warshall(Matrix<double>& d) {
    const int n = d.rows();
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
}

} // namespace

PerturbResult perturb(const FiniteMMS<double>& space, double epsilon, std::uint64_t seed,
                      const NumericPolicy& policy, int retry_budget) {
    if (epsilon < 0.0) throw StructuralError("perturb requires epsilon >= 0");
    const int n = space.size();

    auto generic_enough = [&](const FiniteMMS<double>& s) {
        if (!offdiag_values_distinct(s.dist, policy)) return false;
        if (n >= 3 && !diag_power2_distinct(s, policy)) return false;
        return true;
    };

    if (epsilon == 0.0) {
        if (generic_enough(space)) return {space, 0};
        throw DomainError("perturb: epsilon = 0 and the space is not generic");
    }

    double min_offdiag = epsilon;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) min_offdiag = std::min(min_offdiag, space.dist(i, j));

    // Noise of half the requested amplitude leaves room for the shortest-path
    // repair to move entries without leaving the epsilon band.
    double amplitude = std::min(epsilon / 2.0, 0.49 * min_offdiag);

    Rng rng(hash_seed(seed, 0x70657274ULL));
    for (int attempt = 0; attempt <= retry_budget; ++attempt) {
        if (attempt > 0 && attempt % 25 == 0) amplitude /= 2.0;

        Matrix<double> d = space.dist;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double noise = rng.uniform(-amplitude, amplitude);
                d(i, j) += noise;
                d(j, i) = d(i, j);
            }
        floyd_warshall(d);

        bool in_band = true;
        for (int i = 0; i < n && in_band; ++i)
            for (int j = 0; j < n && in_band; ++j)
                if (std::abs(d(i, j) - space.dist(i, j)) > epsilon) in_band = false;
        if (!in_band) continue;

        FiniteMMS<double> candidate =
            make_space(space.labels, std::move(d), space.mu, space.name);
        if (!validate(candidate, policy).ok()) continue;
        if (!generic_enough(candidate)) continue;
        return {std::move(candidate), attempt};
    }
    throw DomainError("perturb: retry budget exhausted (epsilon too large relative to the "
                      "triangle slack, or the degeneracy is mu-forced)");
}

FiniteMMS<double> equilateral_space(int n, double side) {
    Matrix<double> d = Matrix<double>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) d(i, j) = side;
    return make_space(default_labels(n), std::move(d), std::vector<double>(n, 1.0 / n),
                      "equilateral" + std::to_string(n));
}

FiniteMMS<double> bipartite_space(int a, int b) {
    const int n = a + b;
    Matrix<double> d = Matrix<double>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool same_part = (i < a) == (j < a);
            d(i, j) = same_part ? 2.0 : 1.0;
        }
    return make_space(default_labels(n), std::move(d), std::vector<double>(n, 1.0 / n),
                      "bipartite" + std::to_string(a) + "_" + std::to_string(b));
}

FiniteMMS<double> cycle_space(int n) {
    Matrix<double> d = Matrix<double>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int gap = std::abs(i - j);
            d(i, j) = std::min(gap, n - gap);
        }
    return make_space(default_labels(n), std::move(d), std::vector<double>(n, 1.0 / n),
                      "cycle" + std::to_string(n));
}

FiniteMMS<double> two_cluster_space(int a, int b, double across) {
    const int n = a + b;
    Matrix<double> d = Matrix<double>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool same_part = (i < a) == (j < a);
            d(i, j) = same_part ? 1.0 : across;
        }
    return make_space(default_labels(n), std::move(d), std::vector<double>(n, 1.0 / n),
                      "clusters" + std::to_string(a) + "_" + std::to_string(b));
}

FiniteMMS<Rational> random_rational_space(int n, std::uint64_t seed, MeasureMode measure,
                                          int denominator_bound) {
    if (n < 1) throw StructuralError("random_rational_space requires n >= 1");
    Rng rng(hash_seed(seed, 0x72617431ULL));
    const int q = std::max(2, denominator_bound);

    // Entries in [1, 2] always satisfy the triangle inequality.
    Matrix<Rational> d = Matrix<Rational>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Rational v = Rational(1) + Rational(rng.below(q) + 1, q + 1);
            d(i, j) = d(j, i) = v;
        }

    std::vector<Rational> mu(n);
    if (measure == MeasureMode::Uniform) {
        for (int i = 0; i < n; ++i) mu[i] = Rational(1, n);
    } else {
        Rational total(0);
        for (int i = 0; i < n; ++i) {
            mu[i] = Rational(rng.below(q) + 1, q);
            total += mu[i];
        }
        for (int i = 0; i < n; ++i) mu[i] /= total;
    }
    return make_space(default_labels(n), std::move(d), std::move(mu));
}

} // namespace cohmms
