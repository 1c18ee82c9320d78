#pragma once

#include <Eigen/Dense>
#include <string>

#include "cslink/core_math.hpp"

namespace cslink {

// Measurement-outcome classes shared by the protocols. The parity labels
// belong to the two-detector PNR scheme, the click labels to on-off
// detection; Helstrom plus/minus label the binary-receiver decisions.
enum class HeraldLabel {
    D1Even,
    D1Odd,
    D2Even,
    D2Odd,
    D1Click,
    D2Click,
    HelstromPlus,
    HelstromMinus,
    NoClick,
    Ambiguous,
};

std::string to_string(HeraldLabel label);

// One measurement-outcome class: its probability and the normalized
// post-measurement state of the two memory qubits.
struct HeraldOutcome {
    HeraldLabel label;
    double probability = 0.0;
    Eigen::Matrix4cd state = Eigen::Matrix4cd::Zero();
};

// Unitary whose columns are |Phi+>, |Phi->, |Psi+>, |Psi-> in the
// computational basis |00>,|01>,|10>,|11>.
const Eigen::Matrix4cd& bell_basis();

// Diagonal of rho in the Bell basis plus the Frobenius norm of the
// off-diagonal residue; a small residual certifies Bell-diagonality.
struct BellDecomposition {
    BellDiagonal diagonal;
    double residual = 0.0;
};
BellDecomposition bell_diagonal_decompose(const Eigen::Matrix4cd& rho);

Eigen::Matrix4cd bell_diagonal_state(const BellDiagonal& p);

// Product of two single-qubit |+> states independently dephased to
// off-diagonal weights t_a and t_b. The no-click herald of both one-way and
// midpoint links has this form.
Eigen::Matrix4cd dephased_plus_product(double t_a, double t_b);

// Density-operator sanity checks (Hermiticity, unit trace, positivity).
// Throws std::domain_error on violation beyond `tol`.
void validate_density_operator(const Eigen::MatrixXcd& rho, double tol = 1e-10);

}  // namespace cslink
