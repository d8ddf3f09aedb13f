#pragma once

#include <functional>

#include "cohmms/space.hpp"

namespace cohmms {

/// A real-valued function on X x X bound to its space, so that mu stays
/// implicit in convolution. Binary operations require both operands bound to
/// the same space (pointer identity, falling back to structural equality).
template <class T>
struct Kernel {
    SpacePtr<T> space;
    Matrix<T> values;

    int size() const { return values.rows(); }
};

template <class T>
bool same_space(const Kernel<T>& f, const Kernel<T>& g) {
    if (f.space == g.space) return true;
    if (!f.space || !g.space) return false;
    return f.space->dist == g.space->dist && f.space->mu == g.space->mu;
}

template <class T>
void require_same_space(const Kernel<T>& f, const Kernel<T>& g, const char* op) {
    if (!same_space(f, g)) {
        throw DomainError(std::string(op) + ": kernels are bound to different spaces");
    }
}

template <class T>
Kernel<T> make_kernel(SpacePtr<T> space, Matrix<T> values) {
    if (!space) throw StructuralError("kernel needs a space");
    if (values.rows() != space->size() || values.cols() != space->size()) {
        throw StructuralError("kernel values do not match the bound space dimension");
    }
    return Kernel<T>{std::move(space), std::move(values)};
}

template <class T>
Kernel<T> distance_kernel(SpacePtr<T> space) {
    Matrix<T> values = space->dist;
    return Kernel<T>{std::move(space), std::move(values)};
}

template <class T>
Kernel<T> ones_kernel(SpacePtr<T> space) {
    const int n = space->size();
    return Kernel<T>{std::move(space), Matrix<T>::square(n, T(1))};
}

/// Indicator of the diagonal; the Hadamard-idempotent "identity pattern".
template <class T>
Kernel<T> diagonal_indicator(SpacePtr<T> space) {
    const int n = space->size();
    Matrix<T> values = Matrix<T>::square(n, T(0));
    for (int i = 0; i < n; ++i) values(i, i) = T(1);
    return Kernel<T>{std::move(space), std::move(values)};
}

/// mu-convolution: result(x, z) = sum_y f(x, y) g(y, z) mu(y).
template <class T>
Kernel<T> convolve(const Kernel<T>& f, const Kernel<T>& g) {
    require_same_space(f, g, "convolve");
    const int n = f.size();
    const auto& mu = f.space->mu;
    Matrix<T> out = Matrix<T>::square(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const T fw = f.values(x, y) * mu[y];
            if (fw == T(0)) continue;
            for (int z = 0; z < n; ++z) out(x, z) += fw * g.values(y, z);
        }
    return Kernel<T>{f.space, std::move(out)};
}

/// Hadamard (entrywise) product.
template <class T>
Kernel<T> hadamard(const Kernel<T>& f, const Kernel<T>& g) {
    require_same_space(f, g, "hadamard");
    const int n = f.size();
    Matrix<T> out = Matrix<T>::square(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out(x, y) = f.values(x, y) * g.values(x, y);
    return Kernel<T>{f.space, std::move(out)};
}

/// (x, y) -> f(y, x).
template <class T>
Kernel<T> flip(const Kernel<T>& f) {
    return Kernel<T>{f.space, f.values.transposed()};
}

/// f^{*k}, k >= 1. There is no k = 0: the convolution unit is the
/// delta kernel, which is not part of the public algebra.
template <class T>
Kernel<T> conv_power(const Kernel<T>& f, int k) {
    if (k < 1) throw DomainError("conv_power requires k >= 1");
    Kernel<T> acc = f;
    for (int i = 1; i < k; ++i) acc = convolve(acc, f);
    return acc;
}

/// Entrywise functional calculus. The function must be defined on every
/// entry; partial functions signal via their second return component.
template <class T>
Kernel<T> entrywise(const Kernel<T>& f, const std::function<std::pair<T, bool>(const T&)>& fn) {
    const int n = f.size();
    Matrix<T> out = Matrix<T>::square(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            auto [value, ok] = fn(f.values(x, y));
            if (!ok) {
                throw DomainError("entrywise function undefined at entry (" + std::to_string(x) +
                                  ", " + std::to_string(y) + ")");
            }
            out(x, y) = value;
        }
    return Kernel<T>{f.space, std::move(out)};
}

/// chi_{[a,b]} applied entrywise; the first-class indicator constructor used
/// by the closure engine and the census.
template <class T>
Kernel<T> interval_indicator(const Kernel<T>& f, const T& a, const T& b) {
    if (b < a) throw DomainError("interval_indicator requires a <= b");
    return entrywise<T>(f, [&](const T& v) {
        return std::pair<T, bool>{(a <= v && v <= b) ? T(1) : T(0), true};
    });
}

/// Entrywise reciprocal; undefined at zero entries.
template <class T>
Kernel<T> reciprocal(const Kernel<T>& f) {
    return entrywise<T>(f, [](const T& v) {
        if (v == T(0)) return std::pair<T, bool>{T(0), false};
        return std::pair<T, bool>{T(1) / v, true};
    });
}

template <class T>
Kernel<T> scale_kernel(const Kernel<T>& f, const T& c) {
    Matrix<T> out = f.values;
    for (T& v : out.data()) v = v * c;
    return Kernel<T>{f.space, std::move(out)};
}

template <class T>
Kernel<T> add_kernels(const Kernel<T>& f, const Kernel<T>& g) {
    require_same_space(f, g, "add");
    Matrix<T> out = f.values;
    const int n = f.size();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out(x, y) += g.values(x, y);
    return Kernel<T>{f.space, std::move(out)};
}

/// Plain (unweighted) matrix product; the counting product used by the
/// interval census, as opposed to the mu-convolution.
template <class T>
Kernel<T> matmul_unweighted(const Kernel<T>& f, const Kernel<T>& g) {
    require_same_space(f, g, "matmul");
    const int n = f.size();
    Matrix<T> out = Matrix<T>::square(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const T fv = f.values(x, y);
            if (fv == T(0)) continue;
            for (int z = 0; z < n; ++z) out(x, z) += fv * g.values(y, z);
        }
    return Kernel<T>{f.space, std::move(out)};
}

} // namespace cohmms
