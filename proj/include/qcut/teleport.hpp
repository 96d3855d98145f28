#pragma once

#include <map>
#include <vector>

#include "qcut/entangle.hpp"
#include "qcut/gf.hpp"
#include "qcut/qcore.hpp"

namespace qcut {

// Generalized Bell state (sigma tensor I^n) |Phi_n>, sigma on the A register.
PureState generalized_bell(const PauliString& sigma);

// n-qubit teleportation with an arbitrary 2n-qubit resource state: the
// output is the Pauli-error mixture phi -> sum_sigma p_sigma sigma phi sigma
// with p_sigma the overlap of the resource with the generalized Bell basis.
class TeleportChannel {
public:
    TeleportChannel(int n, std::vector<double> probs_by_code);

    int qubits() const { return n_; }
    double error_prob(const PauliString& sigma) const;
    const std::vector<double>& probs_by_code() const { return probs_; }
    std::map<PauliString, double> error_probs() const;

    QuantumChannel channel() const;

private:
    int n_;
    std::vector<double> probs_;  // indexed by PauliString::code()
};

// Builds the channel from explicit overlaps <Phi^sigma| rho |Phi^sigma>.
TeleportChannel teleport_channel(const DensityOperator& resource, int n);

// Overlaps <Phi^{Zhat_k}| Psi^alpha |Phi^{Zhat_k}> for all k, which are the
// only nonzero error weights of a diagonal-form pure resource:
// 2^(-n) (sum_i (-1)^(k*i) alpha_i)^2. Values below 1e-14 are clamped to 0.
std::vector<double> nme_overlaps(const gf::Field& field, const SchmidtVector& alpha);

// Closed-form teleport channel for the resource Psi^alpha (Z-type errors only).
TeleportChannel teleport_channel_nme(const gf::Field& field, const SchmidtVector& alpha);

}  // namespace qcut
