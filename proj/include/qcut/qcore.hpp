#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcut/rng.hpp"

namespace qcut {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Conventions used throughout:
//  - qubit 0 is the most significant bit of a basis-state label, so an
//    n-qubit label reads |b_0 b_1 ... b_{n-1}> with b_0 in front;
//  - tensor(a, b) puts a on the most significant qubits;
//  - superoperators use column stacking: vec(X) stacks the columns of X,
//    and vec(A X B) = (B^T kron A) vec(X).
// Dense matrices only; operations that materialize a d^2 x d^2 superoperator
// are capped at 6 qubits (4096^2 entries).

inline constexpr int kMaxQubits = 12;
inline constexpr int kMaxSuperopQubits = 6;

int qubit_count(Eigen::Index dim);  // throws unless dim is a power of two

// Normalized complex amplitude vector over 2^m basis states.
struct PureState {
    Vec amp;

    int qubits() const { return qubit_count(amp.size()); }
    Eigen::Index dim() const { return amp.size(); }
    double norm_error() const { return std::abs(amp.squaredNorm() - 1.0); }

    static PureState basis(int n_qubits, std::uint64_t label);
    static PureState from_amplitudes(Vec a);  // validates normalization
};

// Positive unit-trace Hermitian matrix.
struct DensityOperator {
    Mat m;

    int qubits() const { return qubit_count(m.rows()); }
    Eigen::Index dim() const { return m.rows(); }

    static DensityOperator from_pure(const PureState& psi);
    static DensityOperator from_matrix(Mat rho);  // validates invariants
};

struct Unitary {
    Mat m;

    int qubits() const { return qubit_count(m.rows()); }
    Eigen::Index dim() const { return m.rows(); }
    double unitarity_error() const;

    static Unitary from_matrix(Mat u);  // validates U U^dag = I
};

// Tensor-product Pauli operator, one letter per qubit, qubit 0 first.
struct PauliString {
    std::string letters;  // over {I, X, Y, Z}

    int qubits() const { return static_cast<int>(letters.size()); }
    bool identity() const { return letters.find_first_not_of('I') == std::string::npos; }
    Mat matrix() const;

    static PauliString from_code(int n_qubits, std::uint64_t base4_code);
    std::uint64_t code() const;

    auto operator<=>(const PauliString&) const = default;
};

PauliString parse_pauli(const std::string& letters);  // validates alphabet

// Measurable quantity: a Pauli string or an explicit Hermitian matrix.
// Matrix observables carry their eigendecomposition for Born sampling.
class Observable {
public:
    static Observable pauli(const std::string& letters);
    static Observable hermitian(Mat m);  // throws if not Hermitian within 1e-10

    bool is_pauli() const { return is_pauli_; }
    const PauliString& pauli_string() const { return pauli_; }
    int qubits() const { return n_; }
    Mat matrix() const;

    const Eigen::VectorXd& eigenvalues() const { return eigval_; }
    const Mat& eigenvectors() const { return eigvec_; }

private:
    Observable() = default;
    bool is_pauli_ = false;
    int n_ = 0;
    PauliString pauli_;
    Mat matrix_;
    Eigen::VectorXd eigval_;  // matrix observables only
    Mat eigvec_;
};

// Completely positive trace-preserving map in weighted-Kraus form:
// E(X) = sum_m w_m A_m X A_m^dag with w_m >= 0.
class QuantumChannel {
public:
    QuantumChannel(int n_qubits, std::vector<std::pair<double, Mat>> ops);

    static QuantumChannel identity(int n_qubits);
    static QuantumChannel from_unitary(const Unitary& u);

    int qubits() const { return n_; }
    const std::vector<std::pair<double, Mat>>& branches() const { return ops_; }

    DensityOperator apply(const DensityOperator& rho) const;
    Mat superoperator() const;  // 4^n x 4^n, column stacking
    Mat choi() const;           // sum_m w_m vec(A_m) vec(A_m)^dag

    // max |sum w A^dag A - I| entry; zero for exactly trace-preserving maps
    double trace_preservation_error() const;
    // most negative Choi eigenvalue, clamped at zero from above
    double complete_positivity_defect() const;

private:
    int n_;
    std::vector<std::pair<double, Mat>> ops_;
};

// E2 after E1 (apply E1 first).
QuantumChannel compose(const QuantumChannel& e2, const QuantumChannel& e1);

PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
Mat kron(const Mat& a, const Mat& b);

// Reduced operator over the qubits listed in `keep` (ascending, using the
// MSB-first qubit indexing above).
DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep);

// (1/sqrt(2^n)) sum_i |i>_A |i>_B with register A on the most significant
// qubits; 1 <= n <= 6.
PureState max_entangled(int n);

// Reorder qubits: new qubit q holds old qubit perm[q].
PureState permute_qubits(const PureState& psi, std::span<const int> perm);

DensityOperator apply_channel(const QuantumChannel& ch, const DensityOperator& rho);

double expectation(const Observable& o, const DensityOperator& rho);
double expectation(const Observable& o, const PureState& psi);

// One projective measurement of o: returns an eigenvalue drawn with the Born
// probabilities. Pauli strings are measured by basis rotation plus a parity
// read-out so the outcome is exactly +1 or -1.
double born_sample(const Observable& o, const PureState& psi, ShotRng& rng);
double born_sample(const Observable& o, const DensityOperator& rho, ShotRng& rng);

// Outcome values and probabilities of measuring o on psi, in a fixed order
// ({+1, -1} for Pauli strings, ascending eigenvalues otherwise).
std::pair<std::vector<double>, std::vector<double>>
born_distribution(const Observable& o, const PureState& psi);
std::pair<std::vector<double>, std::vector<double>>
born_distribution(const Observable& o, const DensityOperator& rho);

// Deterministic pseudo-random state with Gaussian amplitudes.
PureState random_pure_state(int n_qubits, std::uint64_t seed);

}  // namespace qcut
