#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cohmms/matrix.hpp"
#include "cohmms/policy.hpp"

namespace cohmms {

/// A finite metric measure space: point labels, a distance matrix and a
/// faithful probability measure. Immutable after construction; share freely.
template <class T>
struct FiniteMMS {
    std::vector<std::string> labels;
    Matrix<T> dist;
    std::vector<T> mu;
    std::string name;

    int size() const { return static_cast<int>(labels.size()); }
};

template <class T>
using SpacePtr = std::shared_ptr<const FiniteMMS<T>>;

struct InvariantViolation {
    enum class Kind {
        Asymmetry,
        NonzeroDiagonal,
        NonpositiveOffDiagonal,
        TriangleInequality,
        Faithfulness,
        MassNormalization,
    };
    Kind kind;
    int i = -1, j = -1, k = -1;
    std::string message;
};

struct ValidationReport {
    std::vector<InvariantViolation> violations;
    bool ok() const { return violations.empty(); }
};

inline std::vector<std::string> default_labels(int n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return labels;
}

/// Dimension checks happen here, not in validate(): a shape mismatch is a
/// structural error, not a metric invariant violation.
template <class T>
FiniteMMS<T> make_space(std::vector<std::string> labels, Matrix<T> dist, std::vector<T> mu,
                        std::string name = {}) {
    const int n = static_cast<int>(labels.size());
    if (n < 1) throw StructuralError("a space needs at least one point");
    if (dist.rows() != n || dist.cols() != n) {
        std::ostringstream os;
        os << "dist must be " << n << "x" << n << ", got " << dist.rows() << "x" << dist.cols();
        throw StructuralError(os.str());
    }
    if (static_cast<int>(mu.size()) != n) {
        std::ostringstream os;
        os << "mu must have length " << n << ", got " << mu.size();
        throw StructuralError(os.str());
    }
    return FiniteMMS<T>{std::move(labels), std::move(dist), std::move(mu), std::move(name)};
}

template <class T>
SpacePtr<T> share(FiniteMMS<T> space) {
    return std::make_shared<const FiniteMMS<T>>(std::move(space));
}

template <class T>
ValidationReport validate(const FiniteMMS<T>& space, const NumericPolicy& policy) {
    using Kind = InvariantViolation::Kind;
    ValidationReport report;
    const int n = space.size();
    const auto& d = space.dist;

    T scale(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, scalar_abs(d(i, j)));

    auto within_metric_tol = [&](const T& violation) {
        if constexpr (std::is_same_v<T, Rational>) {
            (void)violation;
            return false;
        } else {
            return violation <= policy.tol_metric * std::max(to_double(scale), 1.0);
        }
    };

    for (int i = 0; i < n; ++i) {
        if (d(i, i) != T(0)) {
            report.violations.push_back({Kind::NonzeroDiagonal, i, i, -1,
                                         "dist[" + std::to_string(i) + "][" + std::to_string(i) +
                                             "] must be exactly zero"});
        }
        for (int j = i + 1; j < n; ++j) {
            if (d(i, j) != d(j, i)) {
                report.violations.push_back({Kind::Asymmetry, i, j, -1,
                                             "dist[" + std::to_string(i) + "][" + std::to_string(j) +
                                                 "] != dist[" + std::to_string(j) + "][" +
                                                 std::to_string(i) + "]"});
            }
            if (!(d(i, j) > T(0))) {
                report.violations.push_back({Kind::NonpositiveOffDiagonal, i, j, -1,
                                             "dist[" + std::to_string(i) + "][" + std::to_string(j) +
                                                 "] must be strictly positive"});
            }
        }
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                T slack = d(i, k) - d(i, j) - d(j, k);
                if (slack > T(0) && !within_metric_tol(slack)) {
                    std::ostringstream os;
                    os << "triangle violated: dist[" << i << "][" << k << "] > dist[" << i << "]["
                       << j << "] + dist[" << j << "][" << k << "]";
                    report.violations.push_back({Kind::TriangleInequality, i, j, k, os.str()});
                }
            }

    T total(0);
    for (int i = 0; i < n; ++i) {
        if (!(space.mu[i] > T(0))) {
            report.violations.push_back({Kind::Faithfulness, i, -1, -1,
                                         "mu[" + std::to_string(i) + "] must be strictly positive"});
        }
        total += space.mu[i];
    }
    bool mass_ok;
    if constexpr (std::is_same_v<T, Rational>) {
        mass_ok = (total == T(1));
    } else {
        mass_ok = std::abs(to_double(total) - 1.0) <= policy.tol_mass;
    }
    if (!mass_ok) {
        report.violations.push_back(
            {Kind::MassNormalization, -1, -1, -1, "mu must sum to 1"});
    }
    return report;
}

/// Exact image of a float space: dyadic distances, measure renormalized so it
/// sums to exactly 1. Uniform measures are detected and rebuilt as exact 1/n.
FiniteMMS<Rational> rationalize(const FiniteMMS<double>& space);

/// Lossy companion of rationalize, for moving exact inputs onto float paths.
FiniteMMS<double> to_float(const FiniteMMS<Rational>& space);

} // namespace cohmms
