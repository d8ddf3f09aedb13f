#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "cohmms/errors.hpp"

namespace cohmms {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);

/// Parses "p/q" or a plain integer/decimal string into an exact rational.
/// Decimal strings like "0.25" are read as exact decimal fractions.
Rational parse_rational(std::string_view text);

/// Renders as "p" for integers, "p/q" otherwise.
std::string rational_to_string(const Rational& q);

template <class T>
T scalar_from_double(double x);

template <>
inline double scalar_from_double<double>(double x) { return x; }

template <>
inline Rational scalar_from_double<Rational>(double x) { return rational_from_double(x); }

template <class T>
inline T scalar_abs(const T& x) { return x < T(0) ? T(-x) : x; }

} // namespace cohmms
