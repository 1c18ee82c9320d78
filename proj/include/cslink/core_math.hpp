#pragma once

#include <array>
#include <complex>

namespace cslink {

using Complex = std::complex<double>;

// Probabilities over the Bell basis {Phi+, Phi-, Psi+, Psi-}.
struct BellDiagonal {
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    double psi_plus = 0.0;
    double psi_minus = 0.0;

    std::array<double, 4> entries() const {
        return {phi_plus, phi_minus, psi_plus, psi_minus};
    }
    double sum() const { return phi_plus + phi_minus + psi_plus + psi_minus; }
};

// Normalizations of the even/odd cat states at a given amplitude,
// N_{e,o} = sqrt(2 (1 +- exp(-2|a|^2))). Satisfies n_even^2 + n_odd^2 = 4.
struct CatNorms {
    double n_even = 0.0;
    double n_odd = 0.0;
};

// Exact parity split of a Poisson photon-count distribution with mean mu:
// probability of zero counts, of an odd count, and of a positive even count.
struct PnrParitySplit {
    double p_zero = 0.0;
    double p_odd = 0.0;
    double p_even_pos = 0.0;
};

// Validates x as a probability. Values within `tol` of [0,1] are clamped;
// larger violations throw std::domain_error.
double checked_probability(double x, double tol = 1e-12);

// Coherent-state overlap <a|b> = exp(conj(a) b - (|a|^2 + |b|^2)/2).
Complex coherent_overlap(Complex a, Complex b);

// Binary entropy in bits with the continuity convention h2(0) = h2(1) = 0.
double binary_entropy(double x);

// Hashing lower bound of a Bell-diagonal state, 1 + sum_i p_i log2 p_i.
// May be negative; callers clamp when reporting rates.
double hashing_bell_diagonal(const BellDiagonal& p);

// Cat-state norms at real amplitude a >= 0.
CatNorms cat_norms(double a);

PnrParitySplit pnr_parity_probabilities(double mu);

}  // namespace cslink
