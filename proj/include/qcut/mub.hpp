#pragma once

#include <cstdint>

#include "qcut/gf.hpp"
#include "qcut/qcore.hpp"

namespace qcut {

// Diagonal phase operator Zhat_k with entries (-1)^(l*k), product in GF(2^n).
Unitary phase_op(const gf::Field& field, std::uint32_t k);

// Shift operator Xhat_k = sum_l |l><l xor k|.
Unitary shift_op(const gf::Field& field, std::uint32_t k);

// Phase factor s_{j,k} = prod_{r,t} i^(j*(k_r 2^r)*(k_t 2^t)); unit modulus.
cplx phase_factor(const gf::Field& field, std::uint32_t j, std::uint32_t k);

// S_{j,k} = s_{j,k} Zhat_{j*k} Xhat_k.
Unitary s_operator(const gf::Field& field, std::uint32_t j, std::uint32_t k);

// Basis transformation U_j whose column l is
// |e_l^j> = 2^(-n/2) sum_k (-1)^(l*k) conj(s_{j,k}) |k>.
Unitary mub_unitary(const gf::Field& field, std::uint32_t j);

// The complete family: U_0 .. U_{2^n - 1} plus, implicitly, the
// computational basis as member 2^n. Immutable, shared-read safe.
class MubFamily {
public:
    explicit MubFamily(int n);

    const gf::Field& field() const { return field_; }
    int qubits() const { return field_.degree(); }
    std::uint32_t count() const { return field_.size(); }
    const Unitary& unitary(std::uint32_t j) const { return unitaries_[j]; }
    const std::vector<Unitary>& unitaries() const { return unitaries_; }

private:
    gf::Field field_;
    std::vector<Unitary> unitaries_;
};

// Largest deviation of any cross-basis fidelity |<e_l^j|e_m^j'>|^2 from
// 2^(-n), over all pairs of distinct bases including the computational one.
double unbiasedness_defect(const MubFamily& mubs);

}  // namespace qcut
