#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcfd/common.hpp"

namespace qcfd {

/// Exact n-qubit state. Wire 0 carries the most significant bit of the basis
/// index (big-endian, the same convention the tensor-train encoding uses).
struct StateVector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amps;

    static StateVector zero_state(int n_qubits);
    void validate() const;
    double norm() const;
};

enum class GateKind { RX, RY, RZ, H, X, CNOT, ControlledUnitary, PauliStringGate };

/// Rotation gates are exp(-i (theta/2) G) with involutory generator G.
/// ControlledUnitary holds an arbitrary 2x2 unitary; control = -1 applies it
/// unconditionally. extra_controls are used by ancilla constructions.
struct Gate {
    GateKind kind = GateKind::X;
    int target = -1;
    int control = -1;
    double angle = 0.0;
    Eigen::Matrix2cd unitary = Eigen::Matrix2cd::Identity();
    std::string pauli_word;
    std::vector<int> extra_controls;

    static Gate rx(int target, double angle);
    static Gate ry(int target, double angle);
    static Gate rz(int target, double angle);
    static Gate h(int target);
    static Gate x(int target);
    static Gate cnot(int control, int target);
    static Gate controlled_unitary(int control, int target, const Eigen::Matrix2cd& u);
    static Gate pauli_string(const std::string& word);
};

Gate dagger(const Gate& g);
std::vector<Gate> dagger_circuit(const std::vector<Gate>& circuit);
std::vector<Gate> with_control(std::vector<Gate> circuit, int control_wire);

/// Applies each gate's unitary in order; preserves the input norm to 1e-12.
StateVector apply_circuit(const StateVector& state, const std::vector<Gate>& circuit);

/// Loads a real vector of length 2^n as amplitudes. Returns the normalized
/// state and the removed L2 norm; rejects the zero vector.
std::pair<StateVector, double> amplitude_encode(const Eigen::VectorXd& v);

struct PauliTerm {
    std::complex<double> coeff;
    std::string word;  // over {I,X,Y,Z}, length n, index = wire
};

struct PauliDecomposition {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;

    static PauliDecomposition identity(int n_qubits);
    Eigen::MatrixXcd to_dense() const;  // sum of c_j p_j (n <= 10 guard)
    void validate() const;
};

struct ShotConfig {
    long shots = 1024;
    std::uint64_t seed = 0;
    void validate() const;
};

/// <psi| A |psi>. Exact mode checks the imaginary residue (<= 1e-12) and
/// returns the real part. Sampled mode draws `shots` outcomes per Pauli term
/// from the exact +/-1 distribution; the generator for term k is seeded with
/// mix_seed(seed, k).
double expectation(const StateVector& state, const PauliDecomposition& obs,
                   const std::optional<ShotConfig>& shots = std::nullopt);

/// Hilbert-Schmidt projection onto all 4^n Pauli strings,
/// c_j = Tr(p_j^dag m) / 2^n; terms with |c_j| <= 1e-12 are dropped.
/// Dense guard: n <= 6.
PauliDecomposition pauli_decompose(const Eigen::MatrixXcd& m);

/// Re(<0| A^dag M B |0>) for M = sum c_j p_j. Exact mode contracts states
/// directly; sampled mode runs the ancilla circuit (H - controlled block - H)
/// per term, measuring only the ancilla, with the shot budget split evenly
/// across terms (terms with complex coefficients split their share between
/// the real and imaginary estimators).
double hadamard_test(const std::vector<Gate>& prep_a, const std::vector<Gate>& prep_b,
                     const PauliDecomposition& op, int n_qubits,
                     const std::optional<ShotConfig>& shots = std::nullopt);

/// M |psi> accumulated term by term.
StateVector apply_pauli_sum(const PauliDecomposition& op, const StateVector& state);

}  // namespace qcfd
