#pragma once

#include "cohmms/closure.hpp"
#include "cohmms/kernel.hpp"
#include "cohmms/rng.hpp"

namespace cohmms {

/// The metric Laplacian of a finite space with the uniform measure:
/// conductances c(x, y) = 1/d(x, y) off the diagonal, degree matrix
/// T(x, x) = sum_y c(x, y), and laplacian = T - c (a global
/// factor 2 is dropped from the operator and reinstated inside the
/// variational check).
template <class T>
struct LaplacianBundle {
    SpacePtr<T> space;
    Matrix<T> conductance; // c: zero diagonal, 1/d off-diagonal
    Matrix<T> degree;      // diagonal row sums of c
    Matrix<T> laplacian;   // degree - conductance

    /// The off-diagonal part with the sign convention A = -c.
    Matrix<T> a_offdiag() const {
        Matrix<T> a = conductance;
        for (T& v : a.data()) v = -v;
        return a;
    }
};

template <class T>
bool measure_is_uniform(const FiniteMMS<T>& space, const NumericPolicy& policy) {
    const int n = space.size();
    if constexpr (std::is_same_v<T, Rational>) {
        (void)policy;
        for (int i = 0; i < n; ++i)
            if (space.mu[i] != Rational(1, n)) return false;
        return true;
    } else {
        for (int i = 0; i < n; ++i)
            if (std::abs(space.mu[i] - 1.0 / n) > policy.tol_mass) return false;
        return true;
    }
}

template <class T>
LaplacianBundle<T> build_laplacian(SpacePtr<T> space,
                                   const NumericPolicy& policy = NumericPolicy::floating()) {
    if (!measure_is_uniform(*space, policy)) {
        throw DomainError("build_laplacian: the metric Laplacian is defined for the uniform "
                          "measure only");
    }
    const int n = space->size();
    LaplacianBundle<T> bundle;
    bundle.conductance = Matrix<T>::square(n);
    bundle.degree = Matrix<T>::square(n);
    bundle.laplacian = Matrix<T>::square(n);
    for (int x = 0; x < n; ++x) {
        T row_sum(0);
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            const T c = T(1) / space->dist(x, y);
            bundle.conductance(x, y) = c;
            bundle.laplacian(x, y) = -c;
            row_sum += c;
        }
        bundle.degree(x, x) = row_sum;
        bundle.laplacian(x, x) = row_sum;
    }
    bundle.space = std::move(space);
    return bundle;
}

/// delta applied to a function on X.
template <class T>
std::vector<T> apply_laplacian(const LaplacianBundle<T>& bundle, const std::vector<T>& f) {
    const int n = bundle.laplacian.rows();
    if (static_cast<int>(f.size()) != n) throw StructuralError("function length mismatch");
    std::vector<T> out(n, T(0));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out[x] += bundle.laplacian(x, y) * f[y];
    return out;
}

/// Verifies <df, df'> = <f, 2 delta f'> on random pairs, both inner products
/// carrying the uniform 1/n weight. The identity is algebraic, so the
/// residual is rounding-level in float mode and exactly zero over rationals.
/// Returns the maximal relative residual over the trials.
template <class T>
double variational_check(const LaplacianBundle<T>& bundle, int trials, std::uint64_t seed) {
    const int n = bundle.laplacian.rows();
    Rng rng(hash_seed(seed, 0x76617243ULL));
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<T> f(n), g(n);
        for (int i = 0; i < n; ++i) {
            f[i] = scalar_from_double<T>(rng.uniform(-1.0, 1.0));
            g[i] = scalar_from_double<T>(rng.uniform(-1.0, 1.0));
        }
        T lhs(0);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                lhs += (f[x] - f[y]) * (g[x] - g[y]) * bundle.conductance(x, y);
            }
        lhs /= T(n);

        std::vector<T> dg = apply_laplacian(bundle, g);
        T rhs(0);
        for (int x = 0; x < n; ++x) rhs += f[x] * T(2) * dg[x];
        rhs /= T(n);

        const double num = to_double(scalar_abs(T(lhs - rhs)));
        const double den = std::max({std::abs(to_double(lhs)), std::abs(to_double(rhs)), 1.0});
        worst = std::max(worst, num / den);
    }
    return worst;
}

/// true iff delta, viewed as a kernel, is constant on every coherence class
/// (equivalently both its diagonal and off-diagonal parts are). Returns the
/// first violating class when false.
template <class T>
std::pair<bool, int> membership_check(const LaplacianBundle<T>& bundle,
                                      const CoherentPartition<T>& part,
                                      const NumericPolicy& policy) {
    if (bundle.laplacian.rows() != part.class_of.rows()) {
        throw DomainError("membership_check: partition and Laplacian sizes differ");
    }
    const int n = part.class_of.rows();
    double scale = 1.0;
    if constexpr (!std::is_same_v<T, Rational>) {
        for (const T& v : bundle.laplacian.data()) scale = std::max(scale, std::abs(v));
    }
    std::vector<std::optional<T>> rep(part.class_count);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int k = part.class_of(x, y);
            const T v = bundle.laplacian(x, y);
            if (!rep[k]) {
                rep[k] = v;
                continue;
            }
            bool equal;
            if constexpr (std::is_same_v<T, Rational>) {
                equal = (*rep[k] == v);
            } else {
                equal = std::abs(*rep[k] - v) <= policy.tol_group * scale;
            }
            if (!equal) return {false, k};
        }
    return {true, -1};
}

/// Residual of the Hadamard-inverse identity relating the distance matrix to
/// the conductances: the entrywise reciprocal of (I + D) equals I + c. (The
/// off-diagonal sign is adjusted: with A = -c the literal inverse picks up
/// |A|, and scalar multiples stay inside the algebra anyway.)
template <class T>
double hadamard_inverse_identity(SpacePtr<T> space,
                                 const NumericPolicy& policy = NumericPolicy::floating()) {
    auto bundle = build_laplacian(space, policy);
    const int n = space->size();
    Kernel<T> i_plus_d = add_kernels(diagonal_indicator(space), distance_kernel(space));
    Kernel<T> recip = reciprocal(i_plus_d);
    double worst = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            T expected = (x == y) ? T(1) : bundle.conductance(x, y);
            worst = std::max(worst, to_double(scalar_abs(T(recip.values(x, y) - expected))));
        }
    return worst;
}

/// M = chi_{[a,b]}(d); returns M^2 under the plain matrix product, whose
/// diagonal counts the points z with d(z, x) in [a, b]. The mu-convolution
/// variant (1/n of the count for uniform measures) is exposed as an option.
template <class T>
Kernel<T> interval_census(SpacePtr<T> space, const T& a, const T& b, bool weighted = false) {
    if (b < a) throw StructuralError("interval_census requires a <= b");
    Kernel<T> m = interval_indicator(distance_kernel(space), a, b);
    return weighted ? convolve(m, m) : matmul_unweighted(m, m);
}

/// Smallest eigenvalue and spectral norm of a symmetric double matrix;
/// implemented over a dense symmetric eigensolver.
std::pair<double, double> symmetric_eig_bounds(const Matrix<double>& m);

/// Positive-semidefiniteness margin: min eigenvalue >= -tol * ||delta||.
template <class T>
bool laplacian_psd(const LaplacianBundle<T>& bundle, double tol = 1e-9,
                   double* min_eig_out = nullptr, double* norm_out = nullptr) {
    const int n = bundle.laplacian.rows();
    Matrix<double> m = Matrix<double>::square(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) m(x, y) = to_double(bundle.laplacian(x, y));
    auto [min_eig, norm] = symmetric_eig_bounds(m);
    if (min_eig_out) *min_eig_out = min_eig;
    if (norm_out) *norm_out = norm;
    return min_eig >= -tol * std::max(norm, 1e-300);
}

} // namespace cohmms
