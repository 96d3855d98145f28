#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qcut/entangle.hpp"
#include "qcut/mub.hpp"
#include "qcut/qcore.hpp"
#include "qcut/teleport.hpp"

namespace qcut {

// Probabilities Pr(k | alpha) of the corrective measure-and-prepare shift,
// indexed by the field element k; entry 0 is always zero.
struct CorrectionTable {
    std::vector<double> prob;

    double sum_error() const;
};

enum class TermKind {
    mub_measure_prepare,        // measure in basis U_j, re-prepare the outcome
    teleport_conjugated,        // U_j E_tel^{Psi_alpha}(U_j^dag . U_j) U_j^dag
    correction_measure_prepare  // measure computationally, prepare |l xor k>
};

struct QpdTerm {
    double coefficient = 0.0;
    TermKind kind = TermKind::mub_measure_prepare;
    std::uint32_t basis_index = 0;  // j, for the first two kinds
    SchmidtVector alpha;            // teleport terms
    CorrectionTable correction;     // correction terms
};

// Quasiprobability decomposition of the n-wire identity channel. The terms
// are stored symbolically and expanded to channels on demand; instances are
// immutable and safe to share across sampling workers.
struct Qpd {
    int n = 0;
    std::vector<QpdTerm> terms;
    double kappa = 0.0;
    std::vector<double> sampling_prob;  // |c_i| / kappa
    std::vector<int> signs;
    std::shared_ptr<const MubFamily> mubs;

    double coefficient_sum() const;
};

// Decomposition without entanglement: 2^n basis measure-and-prepare terms
// with coefficient +1 and one uniform correction with coefficient
// -(2^n - 1); kappa = 2^(n+1) - 1. Valid for 1 <= n <= 4.
Qpd qpd_baseline(int n);
Qpd qpd_baseline(std::shared_ptr<const MubFamily> mubs);

// Pr(k | alpha) = (sum_j (-1)^(k*j) alpha_j)^2 / (2^n - 1 - R); requires the
// resource to be short of maximal entanglement by more than 1e-9.
CorrectionTable prob_correction(const gf::Field& field, const SchmidtVector& alpha);

// Decomposition with the pure resource Psi^alpha: 2^n conjugated
// teleportations with coefficient 1/(R+1) plus one correction with
// coefficient -(2^n/(R+1) - 1); kappa = 2^(n+1)/(R+1) - 1. A maximally
// entangled alpha drops the correction term (kappa = 1).
Qpd qpd_nme(int n, const SchmidtVector& alpha);
Qpd qpd_nme(std::shared_ptr<const MubFamily> mubs, const SchmidtVector& alpha);

// Cut of n wires from a smaller resource of alpha_e.n < n qubits per side:
// alpha_e is embedded as alpha'_j = alpha_e[j] for j < 2^(n_e), zero
// elsewhere (the separable qubits sit on the most significant positions),
// and the separable single-qubit teleportations reduce to computational
// measure-and-prepare steps. kappa is unchanged since R(alpha') = R(alpha_e).
// alpha_e.n == 0 (the trivial vector) yields the fully separable cut.
Qpd qpd_streamlined(int n, const SchmidtVector& alpha_e);

// Channel realized by term i.
QuantumChannel term_channel(const Qpd& qpd, std::size_t i);

// sum_i c_i superop(F_i); term superoperators are built in parallel and
// accumulated in index order, so the result is scheduling-independent.
Mat reconstruct_superoperator(const Qpd& qpd);

struct VerifyReport {
    double max_abs_error = 0.0;
};

// Largest entry-wise deviation of the reconstructed superoperator from the
// identity superoperator.
VerifyReport verify_identity(const Qpd& qpd);

namespace reference {
// Serial oracle: assembles the superoperator column by column by applying
// each term channel to the matrix units, bypassing the Kronecker path.
Mat reconstruct_superoperator(const Qpd& qpd);
}  // namespace reference

}  // namespace qcut
