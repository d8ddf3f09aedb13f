#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "cohmms/rational.hpp"

namespace cohmms {

enum class NumericMode { ExactRational, Float };

/// Equality policy shared by validation, the closure engine and the
/// genericity certificates. In exact-rational mode all tolerances are
/// ignored and value grouping is exact equality.
struct NumericPolicy {
    NumericMode mode = NumericMode::Float;
    double tol_group = 1e-9;  // relative, for grouping real values
    double tol_metric = 1e-9; // relative, triangle-inequality slack
    double tol_mass = 1e-9;   // absolute, |sum(mu) - 1|

    static NumericPolicy exact() { return {NumericMode::ExactRational, 0.0, 0.0, 0.0}; }
    static NumericPolicy floating(double tol = 1e-9) { return {NumericMode::Float, tol, tol, tol}; }
};

/// Borderline gap seen while grouping floats: the split decision sits close
/// to the tolerance threshold, so the partition may be unstable.
struct GroupingWarning {
    double gap = 0.0;
    double threshold = 0.0;
    std::string to_string() const;
};

/// Assigns a group id to every value. Ids are dense, 0-based, ordered by
/// ascending value. Exact mode groups by equality; float mode sorts and
/// splits at gaps exceeding tol_group * scale, scale = max |value| of the set.
std::vector<int> group_doubles(const std::vector<double>& values, double tol_group,
                               std::vector<GroupingWarning>* warnings = nullptr);

std::vector<int> group_rationals(const std::vector<Rational>& values);

template <class T>
std::vector<int> group_values(const std::vector<T>& values, const NumericPolicy& policy,
                              std::vector<GroupingWarning>* warnings = nullptr) {
    if constexpr (std::is_same_v<T, Rational>) {
        (void)policy;
        (void)warnings;
        return group_rationals(values);
    } else {
        return group_doubles(values, policy.tol_group, warnings);
    }
}

/// The equality notion induced by the policy for two standalone scalars.
template <class T>
bool values_equal(const T& a, const T& b, const NumericPolicy& policy) {
    if constexpr (std::is_same_v<T, Rational>) {
        (void)policy;
        return a == b;
    } else {
        double scale = std::max({std::abs(a), std::abs(b), 1.0});
        return std::abs(a - b) <= policy.tol_group * scale;
    }
}

} // namespace cohmms
