#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "cslink/core_math.hpp"

namespace cslink {

// Smallest cutoff N such that the Poisson(mu) weight beyond N is <= tail_tol.
int fock_cutoff_for_tail(double mu, double tail_tol);

// Default per-mode cutoff, N = ceil(mu + 10 sqrt(mu) + 10), where mu is the
// worst-case mean photon number routed through the mode. Keeps the Poisson
// tail below 1e-12 for amplitudes up to ~1.5.
int default_cutoff(double mu);

// Truncated coherent state, amplitudes exp(-|a|^2/2) a^n / sqrt(n!).
// Throws truncation_error if the norm deficit exceeds tail_tol.
Eigen::VectorXcd coherent_state_vector(Complex alpha, int cutoff,
                                       double tail_tol = 1e-12);

// Tensor-product layout of memory qubits and truncated bosonic modes.
// Subsystem order is [qubit 0 .. qubit n-1, mode 0 .. mode m-1], row-major
// with the last mode varying fastest.
struct SystemLayout {
    int n_qubits = 0;
    std::vector<int> mode_cutoffs;

    int n_modes() const { return static_cast<int>(mode_cutoffs.size()); }
    int n_subsystems() const { return n_qubits + n_modes(); }
    int subsystem_dim(int s) const;
    std::ptrdiff_t dimension() const;
};

// Joint pure state of the qubits and modes. Tracks a per-mode occupancy
// bound (used to skip empty photon-number blocks) and the cumulative norm
// lost to truncation.
class HybridState {
public:
    static constexpr std::size_t kDefaultAmplitudeCap = 20'000'000;

    explicit HybridState(SystemLayout layout,
                         std::size_t amplitude_cap = kDefaultAmplitudeCap);

    const SystemLayout& layout() const { return layout_; }
    std::ptrdiff_t dimension() const { return amp_.size(); }
    Eigen::VectorXcd& amplitudes() { return amp_; }
    const Eigen::VectorXcd& amplitudes() const { return amp_; }

    std::ptrdiff_t stride(int subsystem) const { return strides_[subsystem]; }
    std::ptrdiff_t qubit_stride(int q) const { return strides_[q]; }
    std::ptrdiff_t mode_stride(int m) const { return strides_[layout_.n_qubits + m]; }
    int mode_cutoff(int m) const { return layout_.mode_cutoffs[m]; }
    int mode_occupancy_bound(int m) const { return occupancy_[m]; }
    void set_mode_occupancy_bound(int m, int occ);

    double norm() const { return amp_.norm(); }
    double norm_deficit() const { return norm_deficit_; }
    void add_norm_deficit(double d) { norm_deficit_ += d; }

    // Loads a coherent state into a mode that is still in vacuum.
    void set_mode_coherent(int mode, Complex alpha, double tail_tol = 1e-12);

    // Appends a new vacuum mode at the end of the layout.
    void append_mode(int cutoff);

    // Grows or shrinks a mode's cutoff. Shrinking drops the clipped weight
    // into the norm deficit and returns it.
    double resize_mode(int mode, int new_cutoff);

private:
    void rebuild_strides();
    void check_cap(std::ptrdiff_t dim) const;

    SystemLayout layout_;
    std::vector<std::ptrdiff_t> strides_;
    std::vector<int> occupancy_;
    Eigen::VectorXcd amp_;
    double norm_deficit_ = 0.0;
    std::size_t amplitude_cap_;
};

// Single-qubit unitary.
void apply_qubit_gate(HybridState& state, int qubit, const Eigen::Matrix2cd& u);
void apply_hadamard(HybridState& state, int qubit);

// Memory-conditioned pi phase: multiplies by (-1)^n on the mode's Fock
// components when the qubit is |1>.
void apply_controlled_pi(HybridState& state, int qubit, int mode);

// Two-mode beamsplitter, photon-number conserving across the pair. Coherent
// inputs (a, b) map to (a sqrt(T) + b sqrt(1-T), -a sqrt(1-T) + b sqrt(T)).
// Requires equal cutoffs on both modes; weight clipped by partially
// representable photon-number blocks is added to the norm deficit.
void apply_beamsplitter(HybridState& state, int mode_a, int mode_b,
                        double transmissivity);

// Purified loss: beamsplitter into an explicit vacuum environment mode. A
// coherent alpha becomes alpha sqrt(eta) in-mode and alpha sqrt(1-eta) in
// env_mode; the environment is retained for a later trace.
void apply_loss(HybridState& state, int mode, double transmissivity,
                int env_mode);

// Partial trace over the given subsystems (qubit q is subsystem q, mode m is
// subsystem n_qubits + m). Returns the density operator of the rest.
Eigen::MatrixXcd trace_out(const HybridState& state,
                           const std::vector<int>& traced_subsystems);

// Complete photon-number-resolving measurement of one mode.
struct PnrOutcome {
    int count = 0;
    double probability = 0.0;
    HybridState state;
};
std::vector<PnrOutcome> measure_pnr(const HybridState& state, int mode);

// Joint photon-count distribution of two detector modes with, per count
// pair, the unnormalized operator on the two memory qubits (all other
// subsystems traced out). trace(block) is the outcome probability.
struct CountDistribution {
    int max_count_1 = 0;
    int max_count_2 = 0;
    std::vector<Eigen::Matrix4cd> blocks;

    Eigen::Matrix4cd& block(int c1, int c2) {
        return blocks[static_cast<std::size_t>(c1) * (max_count_2 + 1) + c2];
    }
    const Eigen::Matrix4cd& block(int c1, int c2) const {
        return blocks[static_cast<std::size_t>(c1) * (max_count_2 + 1) + c2];
    }
    double probability(int c1, int c2) const {
        return block(c1, c2).trace().real();
    }
    double total_probability() const;

    static CountDistribution zero(int max1, int max2);
};

CountDistribution herald_counts(const HybridState& state, int detector_mode_1,
                                int detector_mode_2);

// Same, for detectors that each sum the photon counts of several modes
// (e.g. matched and mismatched temporal modes arriving at one detector).
CountDistribution herald_counts(const HybridState& state,
                                const std::vector<int>& detector_modes_1,
                                const std::vector<int>& detector_modes_2);

// First-order dark-count model: convolves each detector's count with an
// independent Bernoulli(p_d) extra count (at most one per detector per use).
CountDistribution apply_dark_counts(const CountDistribution& counts,
                                    double p_dark);

// Minimum-error two-outcome POVM for equiprobable pure states: projectors
// onto the non-negative and negative eigenspaces of |+><+| - |-><-|, with
// the zero eigenspace assigned to "plus".
struct HelstromPovm {
    Eigen::MatrixXcd plus;
    Eigen::MatrixXcd minus;
    double error_probability = 0.0;
};
HelstromPovm helstrom_measurement(const Eigen::VectorXcd& state_plus,
                                  const Eigen::VectorXcd& state_minus);

}  // namespace cslink
