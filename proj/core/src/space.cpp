#include "cohmms/space.hpp"

namespace cohmms {

FiniteMMS<Rational> rationalize(const FiniteMMS<double>& space) {
    const int n = space.size();
    Matrix<Rational> dist = Matrix<Rational>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dist(i, j) = rational_from_double(space.dist(i, j));

    std::vector<Rational> mu(n);
    bool uniform = true;
    for (int i = 1; i < n; ++i) uniform = uniform && space.mu[i] == space.mu[0];
    if (uniform) {
        for (int i = 0; i < n; ++i) mu[i] = Rational(1, n);
    } else {
        Rational total(0);
        for (int i = 0; i < n; ++i) {
            mu[i] = rational_from_double(space.mu[i]);
            total += mu[i];
        }
        if (total == Rational(0)) throw StructuralError("measure sums to zero");
        for (int i = 0; i < n; ++i) mu[i] /= total;
    }
    return FiniteMMS<Rational>{space.labels, std::move(dist), std::move(mu), space.name};
}

FiniteMMS<double> to_float(const FiniteMMS<Rational>& space) {
    const int n = space.size();
    Matrix<double> dist = Matrix<double>::square(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dist(i, j) = to_double(space.dist(i, j));
    std::vector<double> mu(n);
    for (int i = 0; i < n; ++i) mu[i] = to_double(space.mu[i]);
    return FiniteMMS<double>{space.labels, std::move(dist), std::move(mu), space.name};
}

} // namespace cohmms
