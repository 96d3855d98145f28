#pragma once

#include <cstdint>
#include <vector>

namespace qcut::gf {

// Square bit matrix over F2, stored as one row mask per row (bit t of
// rows[r] is entry (r, t)).
struct BitMatrix {
    int n = 0;
    std::vector<std::uint32_t> rows;

    bool at(int r, int t) const { return (rows[r] >> t) & 1u; }
    bool operator==(const BitMatrix&) const = default;
};

// The finite field GF(2^n) for 1 <= n <= 8, constructed from a fixed monic
// irreducible polynomial of degree n. Elements are integers in [0, 2^n);
// bit i of the integer is tuple entry a_i. Immutable after construction.
class Field {
public:
    explicit Field(int n);

    int degree() const { return n_; }
    std::uint32_t size() const { return size_; }
    std::uint32_t polynomial() const { return poly_; }

    // Field addition: component-wise XOR of the coefficient tuples.
    static std::uint32_t add(std::uint32_t a, std::uint32_t b) { return a ^ b; }

    // Field multiplication: polynomial product reduced modulo the field
    // polynomial (carry-less multiply with in-place reduction).
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;

    // Symmetric matrices M_i with (a*b)_i = a M_i b^T over F2.
    const std::vector<BitMatrix>& mult_matrices() const { return mult_; }

    // Inverse of M_0 modulo 2 (exists; checked at construction).
    const BitMatrix& m0_inverse() const { return m0_inv_; }

    // (-1)^a for a field element used as an exponent: depends on bit 0 only.
    static int sign_exp(std::uint32_t a) { return (a & 1u) ? -1 : 1; }

    // The Z-type Pauli mask a' with Zhat_a = prod_i Z^{a'_i}: a' = M_0 a.
    std::uint32_t phase_pauli_mask(std::uint32_t a) const;

private:
    int n_;
    std::uint32_t poly_;
    std::uint32_t size_;
    std::vector<BitMatrix> mult_;
    BitMatrix m0_inv_;
};

// true iff poly (bit mask, degree deduced from the top set bit) cannot be
// written as a product of two non-constant polynomials over F2.
bool is_irreducible(std::uint32_t poly);

}  // namespace qcut::gf
