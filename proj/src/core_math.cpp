#include "cslink/core_math.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cslink {

double checked_probability(double x, double tol) {
    if (!std::isfinite(x)) {
        throw std::domain_error("probability is not finite");
    }
    if (x < -tol || x > 1.0 + tol) {
        throw std::domain_error("value " + std::to_string(x) +
                                " is not a probability");
    }
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
}

Complex coherent_overlap(Complex a, Complex b) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) ||
        !std::isfinite(b.real()) || !std::isfinite(b.imag())) {
        throw std::domain_error("coherent_overlap: non-finite amplitude");
    }
    return std::exp(std::conj(a) * b - 0.5 * (std::norm(a) + std::norm(b)));
}

double binary_entropy(double x) {
    x = checked_probability(x);
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double hashing_bell_diagonal(const BellDiagonal& p) {
    if (std::abs(p.sum() - 1.0) > 1e-9) {
        throw std::domain_error("hashing_bell_diagonal: entries sum to " +
                                std::to_string(p.sum()) + ", expected 1");
    }
    double h = 1.0;
    for (double pi : p.entries()) {
        pi = checked_probability(pi);
        if (pi > 0.0) h += pi * std::log2(pi);
    }
    return h;
}

CatNorms cat_norms(double a) {
    if (!std::isfinite(a) || a < 0.0) {
        throw std::domain_error("cat_norms: amplitude must be finite and >= 0");
    }
    const double g = std::exp(-2.0 * a * a);
    return {std::sqrt(2.0 * (1.0 + g)), std::sqrt(2.0 * (1.0 - g))};
}

PnrParitySplit pnr_parity_probabilities(double mu) {
    if (!std::isfinite(mu) || mu < 0.0) {
        throw std::domain_error("pnr_parity_probabilities: mean must be >= 0");
    }
    // e^-mu sinh(mu) and e^-mu (cosh(mu) - 1), written to avoid overflow
    // at large mu.
    const double em = std::exp(-mu);
    const double e2m = std::exp(-2.0 * mu);
    PnrParitySplit s;
    s.p_zero = em;
    s.p_odd = 0.5 * (1.0 - e2m);
    s.p_even_pos = 0.5 * (1.0 + e2m) - em;
    return s;
}

}  // namespace cslink
