#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cohmms/closure.hpp"
#include "cohmms/generators.hpp"
#include "cohmms/isometry.hpp"
#include "cohmms/span_closure.hpp"

using namespace cohmms;

namespace {

SpacePtr<double> two_point_uniform() {
    Matrix<double> dist = Matrix<double>::square(2);
    dist(0, 1) = dist(1, 0) = 1.0;
    return share(make_space(default_labels(2), std::move(dist), {0.5, 0.5}));
}

SpacePtr<double> two_point_skewed() {
    Matrix<double> dist = Matrix<double>::square(2);
    dist(0, 1) = dist(1, 0) = 1.0;
    return share(make_space(default_labels(2), std::move(dist), {0.25, 0.75}));
}

SpacePtr<double> three_point_generic() {
    Matrix<double> dist = Matrix<double>::square(3);
    dist(0, 1) = dist(1, 0) = 1.0;
    dist(0, 2) = dist(2, 0) = 1.2;
    dist(1, 2) = dist(2, 1) = 1.5;
    return share(make_space(default_labels(3), std::move(dist),
                            {1.0 / 3, 1.0 / 3, 1.0 / 3}));
}

SpacePtr<double> one_point() {
    return share(make_space(default_labels(1), Matrix<double>::square(1), {1.0}));
}

const NumericPolicy kFloat = NumericPolicy::floating();
const NumericPolicy kExact = NumericPolicy::exact();

/// Indicator matrix of one coherence class.
template <class T>
Matrix<T> class_indicator(const CoherentPartition<T>& part, int k) {
    const int n = part.class_of.rows();
    Matrix<T> out = Matrix<T>::square(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (part.class_of(x, y) == k) out(x, y) = T(1);
    return out;
}

template <class T>
void check_oracle_agreement(SpacePtr<T> sp, const NumericPolicy& policy) {
    auto part = coherent_closure(sp, policy);
    auto span = brute_force_closure(sp);
    CAPTURE(sp->size());
    CHECK(part.class_count == span.dimension);
    for (int k = 0; k < part.class_count; ++k) {
        CHECK(span.contains(class_indicator(part, k)));
    }
    CHECK(verify_configuration(part, policy).ok());
}

} // namespace

TEST_CASE("2-point uniform space: two classes, not full, flip witness") {
    auto part = coherent_closure(two_point_uniform(), kFloat);
    CHECK(part.class_count == 2);
    CHECK(part.rounds == 0); // the initial coloring is already stable
    CHECK(part.class_of(0, 0) == part.class_of(1, 1));
    CHECK(part.class_of(0, 1) == part.class_of(1, 0));
    CHECK(part.class_of(0, 0) != part.class_of(0, 1));

    auto cert = fullness(part);
    CHECK_FALSE(cert.full);
    CHECK(cert.class_count == 2);
    CHECK(cert.cell_count == 4);
    REQUIRE(cert.witness.has_value());
    auto [a, b] = *cert.witness;
    CHECK(part.class_of(a.x, a.y) == part.class_of(b.x, b.y));
    CHECK(a != b);
}

TEST_CASE("1-point space: one class and full") {
    auto part = coherent_closure(one_point(), kFloat);
    CHECK(part.class_count == 1);
    auto cert = fullness(part);
    CHECK(cert.full);
    CHECK(cert.consequence.find("trivial quantum automorphism group") != std::string::npos);
}

TEST_CASE("3-point generic space: nine classes, full, matches the span oracle") {
    auto sp = three_point_generic();
    auto part = coherent_closure(sp, kFloat);
    CHECK(part.class_count == 9);
    CHECK(fullness(part).full);

    auto span = brute_force_closure(sp);
    CHECK(span.dimension == 9);
}

TEST_CASE("2-point space with a skewed measure becomes full during refinement") {
    // The initial coloring ignores mu; the weight asymmetry splits classes
    // in the refinement rounds.
    auto part = coherent_closure(two_point_skewed(), kFloat);
    CHECK(part.class_count == 4);
    CHECK(fullness(part).full);
    auto span = brute_force_closure(two_point_skewed());
    CHECK(span.dimension == 4);
}

TEST_CASE("brute force closure examples") {
    CHECK(brute_force_closure(two_point_uniform()).dimension == 2);
    CHECK(brute_force_closure(one_point()).dimension == 1);
    CHECK_THROWS_AS(brute_force_closure(share(random_euclidean(7, 2, 1))), DomainError);
}

TEST_CASE("verify_configuration flags a diagonal-mixing partition") {
    auto sp = two_point_uniform();
    Matrix<int> classes = Matrix<int>::square(2, 0);
    classes(0, 0) = 0;
    classes(0, 1) = 0; // diagonal cell grouped with an off-diagonal cell
    classes(1, 0) = 1;
    classes(1, 1) = 1;
    auto part = partition_from_classes(sp, classes);
    auto report = verify_configuration(part, kFloat);
    bool diag = false;
    for (const auto& v : report.violations)
        if (v.kind == AxiomViolation::Kind::Diagonal) diag = true;
    CHECK(diag);
}

TEST_CASE("verify_configuration flags intersection inconstancy for {diagonal, rest}") {
    // With uniform mu the two-class partition is the complete association
    // scheme and genuinely coherent; a skewed measure breaks the constancy:
    // the middle weight seen by cell (0,1) differs from the one seen by (0,2).
    Matrix<double> dist = Matrix<double>::square(3);
    dist(0, 1) = dist(1, 0) = 1.0;
    dist(0, 2) = dist(2, 0) = 1.2;
    dist(1, 2) = dist(2, 1) = 1.5;
    auto sp = share(make_space(default_labels(3), std::move(dist), {0.2, 0.3, 0.5}));
    Matrix<int> classes = Matrix<int>::square(3, 1);
    for (int i = 0; i < 3; ++i) classes(i, i) = 0;
    auto part = partition_from_classes(sp, classes);
    auto report = verify_configuration(part, kFloat);
    bool constancy = false;
    for (const auto& v : report.violations)
        if (v.kind == AxiomViolation::Kind::IntersectionConstancy) constancy = true;
    CHECK(constancy);

    // The same two-class partition with uniform mu is a valid configuration.
    auto uniform_part = partition_from_classes(three_point_generic(), classes);
    CHECK(verify_configuration(uniform_part, kFloat).ok());
}

TEST_CASE("verify_configuration flags a partition without a single opposite class") {
    auto sp = three_point_generic();
    // {(0,1)} alone vs its flip spread across the big class.
    Matrix<int> classes = Matrix<int>::square(3, 1);
    for (int i = 0; i < 3; ++i) classes(i, i) = 0;
    classes(0, 1) = 2;
    auto part = partition_from_classes(sp, classes);
    auto report = verify_configuration(part, kFloat);
    bool opposite = false;
    for (const auto& v : report.violations)
        if (v.kind == AxiomViolation::Kind::Opposite) opposite = true;
    CHECK(opposite);
}

TEST_CASE("isometry orbitals: swap group of the uniform 2-point space") {
    auto orbitals = isometry_orbitals(*two_point_uniform());
    CHECK(orbitals.group_order == 2);
    CHECK(orbitals.orbit_count == 2);
    auto part = coherent_closure(two_point_uniform(), kFloat);
    CHECK(orbitals.orbit_of == part.class_of);
}

TEST_CASE("isometry orbitals: generic distances leave only the identity") {
    auto orbitals = isometry_orbitals(*three_point_generic());
    CHECK(orbitals.group_order == 1);
    CHECK(orbitals.orbit_count == 9);
}

TEST_CASE("distinct masses force the identity even on symmetric metrics") {
    Matrix<double> dist = Matrix<double>::square(3, 1.0);
    for (int i = 0; i < 3; ++i) dist(i, i) = 0.0;
    auto sp = make_space(default_labels(3), std::move(dist), {0.2, 0.3, 0.5});
    auto orbitals = isometry_orbitals(sp);
    CHECK(orbitals.group_order == 1);
    CHECK(orbitals.orbit_count == 9);
}

TEST_CASE("isometry search respects the size guard") {
    CHECK_THROWS_AS(isometry_orbitals(random_euclidean(10, 2, 3)), DomainError);
}

TEST_CASE("oracle agreement on random float spaces, n = 2..5") {
    for (int n = 2; n <= 5; ++n)
        for (std::uint64_t s = 0; s < 4; ++s) {
            auto measure = (s % 2 == 0) ? MeasureMode::Uniform : MeasureMode::RandomSimplex;
            check_oracle_agreement(share(random_euclidean(n, 2, 300 + 10 * n + s, measure)),
                                   kFloat);
        }
}

TEST_CASE("oracle agreement on random exact-rational spaces, n = 2..5") {
    for (int n = 2; n <= 5; ++n)
        for (std::uint64_t s = 0; s < 4; ++s) {
            auto measure = (s % 2 == 0) ? MeasureMode::Uniform : MeasureMode::RandomSimplex;
            check_oracle_agreement(share(random_rational_space(n, 400 + 10 * n + s, measure)),
                                   kExact);
        }
}

TEST_CASE("exact and float closures agree on a common rational space") {
    for (std::uint64_t s = 0; s < 6; ++s) {
        auto exact_space = random_rational_space(4, 500 + s, MeasureMode::RandomSimplex);
        auto part_exact = coherent_closure(share(exact_space), kExact);
        auto part_float = coherent_closure(share(to_float(exact_space)), kFloat);
        CHECK(part_exact.class_count == part_float.class_count);
        CHECK(part_exact.class_of == part_float.class_of);
    }
}

TEST_CASE("orbitals refine coherence classes; fullness forces a trivial group") {
    for (int n = 2; n <= 7; ++n)
        for (std::uint64_t s = 0; s < 3; ++s) {
            // Palette metrics produce repeated distances, hence symmetries.
            auto exact_space = random_rational_space(n, 600 + 10 * n + s, MeasureMode::Uniform, 3);
            auto sp = share(exact_space);
            auto part = coherent_closure(sp, kExact);
            auto orbitals = isometry_orbitals(*sp);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) {
                            if (orbitals.orbit_of(x, y) == orbitals.orbit_of(a, b)) {
                                CHECK(part.class_of(x, y) == part.class_of(a, b));
                            }
                        }
            if (fullness(part).full) CHECK(orbitals.group_order == 1);
        }
}

TEST_CASE("d, its powers, and the all-ones kernel are constant on classes") {
    for (std::uint64_t s = 0; s < 4; ++s) {
        auto sp = share(random_euclidean(4, 2, 700 + s, MeasureMode::RandomSimplex));
        auto part = coherent_closure(sp, kFloat);
        auto d = distance_kernel(sp);
        CHECK(constant_on_classes(part, d.values, kFloat));
        CHECK(constant_on_classes(part, ones_kernel(sp).values, kFloat));
        auto power = d;
        auto hpower = d;
        for (int k = 2; k <= 16; ++k) {
            power = convolve(power, d);
            hpower = hadamard(hpower, d);
            CHECK(constant_on_classes(part, power.values, kFloat));
            CHECK(constant_on_classes(part, hpower.values, kFloat));
        }
    }
}

TEST_CASE("refinement is monotone, bounded, and deterministic") {
    for (std::uint64_t s = 0; s < 6; ++s) {
        auto sp = share(random_euclidean(5, 2, 800 + s, MeasureMode::RandomSimplex));
        auto part1 = coherent_closure(sp, kFloat);
        auto part2 = coherent_closure(sp, kFloat);
        CHECK(part1.class_of == part2.class_of);
        CHECK(part1.rounds <= 5 * 5 - 1);
        CHECK(part1.class_count >= 1);
        CHECK(part1.class_count <= 25);
    }
}

TEST_CASE("class ids are canonical in row-major first-occurrence order") {
    auto part = coherent_closure(three_point_generic(), kFloat);
    int seen_max = -1;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            const int k = part.class_of(x, y);
            CHECK(k <= seen_max + 1);
            seen_max = std::max(seen_max, k);
        }
}

TEST_CASE("borderline float gaps surface as grouping warnings") {
    // Two off-diagonal values 5e-10 apart sit inside the 1e-9 gap threshold:
    // they group together, and the near-boundary gap is reported.
    Matrix<double> dist = Matrix<double>::square(3);
    dist(0, 1) = dist(1, 0) = 1.0;
    dist(0, 2) = dist(2, 0) = 1.0 + 5e-10;
    dist(1, 2) = dist(2, 1) = 1.5;
    auto sp = share(make_space(default_labels(3), std::move(dist),
                               {1.0 / 3, 1.0 / 3, 1.0 / 3}));
    auto part = coherent_closure(sp, kFloat);
    CHECK_FALSE(part.warnings.empty());
    CHECK(part.class_count < 9); // the near-equal distances were merged
}

TEST_CASE("partition export invariant: full iff class_count equals cell count") {
    for (auto sp : {two_point_uniform(), three_point_generic(), one_point()}) {
        auto part = coherent_closure(sp, kFloat);
        auto cert = fullness(part);
        CHECK(cert.full == (part.class_count == part.cells()));
    }
}
