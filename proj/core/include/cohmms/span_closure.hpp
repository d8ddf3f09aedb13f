#pragma once

#include <cmath>

#include "cohmms/kernel.hpp"

namespace cohmms {

/// Linear span of kernels (flattened to length-n^2 vectors) with incremental
/// insertion and a membership test. Over rationals this is exact row-echelon
/// elimination; over doubles it is modified Gram-Schmidt with a
/// re-orthogonalization pass, which keeps reductions from amplifying
/// rounding error the way naive elimination does.
template <class T>
class KernelSpan {
public:
    explicit KernelSpan(int n, double independence_tol = 1e-10, double membership_tol = 1e-8)
        : n_(n), itol_(independence_tol), mtol_(membership_tol) {}

    int dimension() const { return static_cast<int>(rows_.size()); }

    bool contains(std::vector<T> v) const {
        if constexpr (exact) {
            reduce_exact(v);
            for (const T& x : v)
                if (x != T(0)) return false;
            return true;
        } else {
            const double input = norm2(v);
            const double residual = reduce_float(v);
            return residual <= mtol_ * std::max(1.0, input);
        }
    }

    /// Returns true when v was independent of the span and has been added.
    bool insert(std::vector<T> v) {
        if constexpr (exact) {
            reduce_exact(v);
            size_t pivot = v.size();
            for (size_t c = 0; c < v.size(); ++c)
                if (v[c] != T(0)) {
                    pivot = c;
                    break;
                }
            if (pivot == v.size()) return false;
            const T inv = T(1) / v[pivot];
            for (T& x : v) x *= inv;
            for (auto& row : rows_) {
                const T coeff = row[pivot];
                if (coeff == T(0)) continue;
                for (size_t c = 0; c < v.size(); ++c) row[c] -= coeff * v[c];
            }
            rows_.push_back(std::move(v));
            pivots_.push_back(pivot);
            return true;
        } else {
            const double input = norm2(v);
            const double residual = reduce_float(v);
            if (residual <= itol_ * std::max(1.0, input)) return false;
            for (T& x : v) x /= residual;
            rows_.push_back(std::move(v));
            return true;
        }
    }

    const std::vector<std::vector<T>>& basis() const { return rows_; }

private:
    static constexpr bool exact = std::is_same_v<T, Rational>;

    static double norm2(const std::vector<T>& v) {
        double s = 0.0;
        for (const T& x : v) {
            const double d = to_double(x);
            s += d * d;
        }
        return std::sqrt(s);
    }

    void reduce_exact(std::vector<T>& v) const {
        for (size_t r = 0; r < rows_.size(); ++r) {
            const T factor = v[pivots_[r]];
            if (factor == T(0)) continue;
            for (size_t c = 0; c < v.size(); ++c) v[c] -= factor * rows_[r][c];
        }
    }

    double reduce_float(std::vector<T>& v) const {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : rows_) {
                double dot = 0.0;
                for (size_t c = 0; c < v.size(); ++c) dot += v[c] * u[c];
                for (size_t c = 0; c < v.size(); ++c) v[c] -= dot * u[c];
            }
        }
        return norm2(v);
    }

    int n_;
    double itol_;
    double mtol_;
    std::vector<std::vector<T>> rows_;    // orthonormal (float) / echelon (exact)
    std::vector<size_t> pivots_;          // exact mode only
};

template <class T>
struct SpanClosure {
    SpacePtr<T> space;
    KernelSpan<T> span;
    int dimension = 0;

    bool contains(const Matrix<T>& values) const { return span.contains(values.data()); }
};

/// Independent oracle for the coherent closure: the linear span of
/// {all-ones, d} closed under convolution, Hadamard product and flip, grown
/// by alternating basis extraction with pairwise products until the
/// dimension stabilizes. Deliberately ignorant of partitions.
template <class T>
SpanClosure<T> brute_force_closure(SpacePtr<T> space, int size_guard = 6) {
    const int n = space->size();
    if (n > size_guard) {
        throw DomainError("brute_force_closure size guard exceeded: n = " + std::to_string(n) +
                          " > " + std::to_string(size_guard));
    }
    const auto& mu = space->mu;

    auto conv = [&](const std::vector<T>& a, const std::vector<T>& b) {
        std::vector<T> out(static_cast<size_t>(n) * n, T(0));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                const T fw = a[static_cast<size_t>(x) * n + y] * mu[y];
                if (fw == T(0)) continue;
                for (int z = 0; z < n; ++z)
                    out[static_cast<size_t>(x) * n + z] += fw * b[static_cast<size_t>(y) * n + z];
            }
        return out;
    };
    auto had = [&](const std::vector<T>& a, const std::vector<T>& b) {
        std::vector<T> out(a.size());
        for (size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
        return out;
    };
    auto flipped = [&](const std::vector<T>& a) {
        std::vector<T> out(a.size());
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                out[static_cast<size_t>(y) * n + x] = a[static_cast<size_t>(x) * n + y];
        return out;
    };

    KernelSpan<T> span(n);
    span.insert(std::vector<T>(static_cast<size_t>(n) * n, T(1)));
    span.insert(space->dist.data());

    bool grew = true;
    while (grew) {
        grew = false;
        // Snapshot: the basis mutates as we insert.
        std::vector<std::vector<T>> snapshot = span.basis();
        for (const auto& a : snapshot) {
            if (span.insert(flipped(a))) grew = true;
        }
        for (const auto& a : snapshot)
            for (const auto& b : snapshot) {
                if (span.insert(conv(a, b))) grew = true;
                if (span.insert(had(a, b))) grew = true;
            }
    }

    SpanClosure<T> out{std::move(space), std::move(span), 0};
    out.dimension = out.span.dimension();
    return out;
}

} // namespace cohmms
