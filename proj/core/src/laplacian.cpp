#include "cohmms/laplacian.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace cohmms {

std::pair<double, double> symmetric_eig_bounds(const Matrix<double>& m) {
    const int n = m.rows();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw DomainError("symmetric eigensolver failed to converge");
    }
    const auto& ev = solver.eigenvalues();
    double lo = ev(0);
    double norm = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    return {lo, norm};
}

} // namespace cohmms
