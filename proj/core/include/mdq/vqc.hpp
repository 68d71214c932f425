#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "mdq/autodiff.hpp"

namespace mdq::qc {

/// One variational quantum circuit acting as a dense layer over `qubits`
/// features: angle embedding, `depth` variational repetitions, Pauli-Y
/// readout.
struct VqcConfig {
    std::size_t qubits = 4;
    std::size_t depth = 2;

    std::size_t state_size() const { return std::size_t{1} << qubits; }

    /// Trainable angles per circuit: 3 per qubit per repetition.
    std::size_t n_params() const { return depth * qubits * 3; }

    void validate() const;
};

/// Amplitudes indexed so that qubit j is the j-th least significant bit.
using StateVector = std::vector<std::complex<double>>;

void apply_rx(StateVector& state, std::size_t qubit, double angle);
void apply_ry(StateVector& state, std::size_t qubit, double angle);
void apply_rz(StateVector& state, std::size_t qubit, double angle);

/// Rot(a, b, c) = R_z(c) R_y(b) R_z(a); a acts first.
void apply_rot(StateVector& state, std::size_t qubit, double a, double b, double c);

void apply_cnot(StateVector& state, std::size_t control, std::size_t target);

/// |psi> = (R_x(x[0]) (x) ... (x) R_x(x[q-1])) |0...0>
StateVector embed(const std::vector<double>& x);

/// `depth` repetitions of per-qubit Rot gates followed by the CNOT ring
/// 0->1, 1->2, ..., q-1->0; the ring is skipped for one qubit. angles is
/// row-major [depth][qubits][3].
void apply_variational(StateVector& state, const double* angles, const VqcConfig& cfg);

/// v[j] = <psi| Y_j |psi>, each in [-1, 1].
std::vector<double> measure_y(const StateVector& state, std::size_t qubits);

/// measure_y(apply_variational(embed(x))). x.size() must equal cfg.qubits.
std::vector<double> quantum_layer_forward(const std::vector<double>& x, const double* angles,
                                          const VqcConfig& cfg);

/// Exact parameter-shift Jacobians, (E(p + pi/2) - E(p - pi/2))/2 per
/// angle by circuit re-execution. dv_dx is row-major [q][q] with
/// dv_dx[j*q + i] = dv_j/dx_i; dv_dangles is [q][n_params].
void quantum_layer_gradient(const std::vector<double>& x, const double* angles,
                            const VqcConfig& cfg, std::vector<double>& dv_dx,
                            std::vector<double>& dv_dangles);

/// Tape op for `circuits` parallel VQCs: x [B, circuits*q] is split into
/// per-circuit blocks of q features in index order, each runs its own
/// circuit with its own angle block, and the q outputs are concatenated
/// back to [B, circuits*q]. angles is [circuits, depth, q, 3]. Backward
/// uses the parameter-shift Jacobians; per-example contributions reduce
/// in fixed example order for any thread count.
ad::Node quantum_dense(ad::Tape& tape, ad::Node x, ad::Node angles, const VqcConfig& cfg);

} // namespace mdq::qc
