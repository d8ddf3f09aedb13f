#pragma once

#include <cstdint>

#include "cohmms/space.hpp"

namespace cohmms {

enum class MeasureMode { Uniform, RandomSimplex };

/// n i.i.d. uniform points in the unit cube of the given dimension, with the
/// pairwise Euclidean metric. Deterministic for a fixed seed.
FiniteMMS<double> random_euclidean(int n, int dim, std::uint64_t seed,
                                   MeasureMode measure = MeasureMode::Uniform);

struct PerturbResult {
    FiniteMMS<double> space;
    int retries = 0;
};

/// Random symmetric perturbation of the metric, at most epsilon entrywise,
/// retried until the perturbed space is a valid metric whose distance values
/// are pairwise distinct off the diagonal (unordered pairs) and, for n >= 3,
/// whose d^{*2} diagonal values are pairwise distinct. For n <= 2 the
/// diagonal condition depends only on mu, which a metric perturbation cannot
/// influence, so it is not part of the retry predicate.
PerturbResult perturb(const FiniteMMS<double>& space, double epsilon, std::uint64_t seed,
                      const NumericPolicy& policy = NumericPolicy::floating(),
                      int retry_budget = 100);

/// Structured non-full instances used by the genericity experiments.
FiniteMMS<double> equilateral_space(int n, double side = 1.0);
/// Two parts, distance 1 across and 2 within; every cross triangle is tight.
FiniteMMS<double> bipartite_space(int a, int b);
/// Cycle path metric d(i,j) = min(|i-j|, n-|i-j|).
FiniteMMS<double> cycle_space(int n);
/// Two cliques at distance `across`, unit distances inside.
FiniteMMS<double> two_cluster_space(int a, int b, double across = 3.0);

/// Random exact-rational metric space: distances drawn from [1, 2] (any such
/// matrix is a metric), measure exactly normalized. Suited to exercising the
/// exact-equality code paths, where Euclidean data would be meaningless.
FiniteMMS<Rational> random_rational_space(int n, std::uint64_t seed, MeasureMode measure,
                                          int denominator_bound = 64);

} // namespace cohmms
