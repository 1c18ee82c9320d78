#include "cslink/bell.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace cslink {

std::string to_string(HeraldLabel label) {
    switch (label) {
        case HeraldLabel::D1Even: return "d1-even";
        case HeraldLabel::D1Odd: return "d1-odd";
        case HeraldLabel::D2Even: return "d2-even";
        case HeraldLabel::D2Odd: return "d2-odd";
        case HeraldLabel::D1Click: return "d1-click";
        case HeraldLabel::D2Click: return "d2-click";
        case HeraldLabel::HelstromPlus: return "helstrom-plus";
        case HeraldLabel::HelstromMinus: return "helstrom-minus";
        case HeraldLabel::NoClick: return "no-click";
        case HeraldLabel::Ambiguous: return "ambiguous";
    }
    return "unknown";
}

const Eigen::Matrix4cd& bell_basis() {
    static const Eigen::Matrix4cd u = [] {
        const double s = 1.0 / std::sqrt(2.0);
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        // columns: Phi+, Phi-, Psi+, Psi-
        m(0, 0) = s;
        m(3, 0) = s;
        m(0, 1) = s;
        m(3, 1) = -s;
        m(1, 2) = s;
        m(2, 2) = s;
        m(1, 3) = s;
        m(2, 3) = -s;
        return m;
    }();
    return u;
}

BellDecomposition bell_diagonal_decompose(const Eigen::Matrix4cd& rho) {
    const Eigen::Matrix4cd& u = bell_basis();
    const Eigen::Matrix4cd r = u.adjoint() * rho * u;
    BellDecomposition out;
    out.diagonal = {r(0, 0).real(), r(1, 1).real(), r(2, 2).real(),
                    r(3, 3).real()};
    Eigen::Matrix4cd off = r;
    off.diagonal().setZero();
    out.residual = off.norm();
    return out;
}

Eigen::Matrix4cd bell_diagonal_state(const BellDiagonal& p) {
    const Eigen::Matrix4cd& u = bell_basis();
    Eigen::Vector4cd d;
    d << p.phi_plus, p.phi_minus, p.psi_plus, p.psi_minus;
    return u * d.asDiagonal() * u.adjoint();
}

Eigen::Matrix4cd dephased_plus_product(double t_a, double t_b) {
    Eigen::Matrix2cd a, b;
    a << 0.5, 0.5 * t_a, 0.5 * t_a, 0.5;
    b << 0.5, 0.5 * t_b, 0.5 * t_b, 0.5;
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

void validate_density_operator(const Eigen::MatrixXcd& rho, double tol) {
    if (rho.rows() != rho.cols()) {
        throw std::domain_error("density operator is not square");
    }
    if ((rho - rho.adjoint()).norm() > tol) {
        throw std::domain_error("density operator is not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > tol ||
        std::abs(rho.trace().imag()) > tol) {
        throw std::domain_error("density operator trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.eigenvalues().minCoeff() < -tol) {
        throw std::domain_error("density operator has a negative eigenvalue");
    }
}

}  // namespace cslink
