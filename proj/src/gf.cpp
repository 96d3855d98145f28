#include "qcut/gf.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace qcut::gf {

namespace {

// Fixed irreducible polynomials per degree, validated at construction.
// Index by n; entry 0 unused. n = 1 uses x so that the generic reduction
// path degenerates to plain AND multiplication on {0, 1}.
constexpr std::array<std::uint32_t, 9> kPolynomials = {
    0u,
    0b10u,         // x
    0b111u,        // x^2 + x + 1
    0b1011u,       // x^3 + x + 1
    0b10011u,      // x^4 + x + 1
    0b100101u,     // x^5 + x^2 + 1
    0b1000011u,    // x^6 + x + 1
    0b10000011u,   // x^7 + x + 1
    0b100011011u,  // x^8 + x^4 + x^3 + x + 1
};

int poly_degree(std::uint32_t p) {
    return 31 - std::countl_zero(p);
}

// Remainder of a modulo b over F2[x].
std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
    int db = poly_degree(b);
    while (a != 0 && poly_degree(a) >= db) {
        a ^= b << (poly_degree(a) - db);
    }
    return a;
}

bool parity(std::uint32_t x) { return std::popcount(x) & 1; }

// Invert a bit matrix by Gauss-Jordan elimination modulo 2.
bool invert_mod2(const BitMatrix& m, BitMatrix* out) {
    int n = m.n;
    std::vector<std::uint64_t> aug(n);
    for (int r = 0; r < n; ++r) {
        aug[r] = m.rows[r] | (std::uint64_t{1} << (n + r));
    }
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if ((aug[r] >> col) & 1) { pivot = r; break; }
        }
        if (pivot < 0) return false;
        std::swap(aug[col], aug[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r != col && ((aug[r] >> col) & 1)) aug[r] ^= aug[col];
        }
    }
    out->n = n;
    out->rows.assign(n, 0);
    for (int r = 0; r < n; ++r) {
        out->rows[r] = static_cast<std::uint32_t>(aug[r] >> n);
    }
    return true;
}

}  // namespace

bool is_irreducible(std::uint32_t poly) {
    int n = poly_degree(poly);
    if (n < 1) return false;
    // A reducible polynomial has a factor of degree <= n/2.
    for (int d = 1; 2 * d <= n; ++d) {
        for (std::uint32_t q = 1u << d; q < (2u << d); ++q) {
            if (poly_mod(poly, q) == 0) return false;
        }
    }
    return true;
}

Field::Field(int n) : n_(n) {
    if (n < 1 || n > 8) {
        throw std::invalid_argument("gf::Field: n must be in [1, 8]");
    }
    poly_ = kPolynomials[static_cast<std::size_t>(n)];
    size_ = 1u << n;
    if (!is_irreducible(poly_) || poly_degree(poly_) != n) {
        throw std::logic_error("gf::Field: polynomial table entry is not irreducible");
    }

    // M_i(r, t) = bit i of (x^r * x^t); bilinearity extends this to all pairs.
    mult_.assign(static_cast<std::size_t>(n), BitMatrix{n, std::vector<std::uint32_t>(n, 0)});
    for (int r = 0; r < n; ++r) {
        for (int t = 0; t < n; ++t) {
            std::uint32_t prod = mul(1u << r, 1u << t);
            for (int i = 0; i < n; ++i) {
                if ((prod >> i) & 1u) mult_[i].rows[r] |= 1u << t;
            }
        }
    }
    for (const BitMatrix& m : mult_) {
        for (int r = 0; r < n; ++r) {
            for (int t = 0; t < r; ++t) {
                if (m.at(r, t) != m.at(t, r)) {
                    throw std::logic_error("gf::Field: multiplication matrix not symmetric");
                }
            }
        }
    }
    if (!invert_mod2(mult_[0], &m0_inv_)) {
        throw std::logic_error("gf::Field: M_0 is singular modulo 2");
    }
}

std::uint32_t Field::mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t acc = 0;
    std::uint32_t shifted = a;
    for (int i = 0; i < n_; ++i) {
        if ((b >> i) & 1u) acc ^= shifted;
        shifted <<= 1;
        if (shifted & size_) shifted ^= poly_;
    }
    return acc;
}

std::uint32_t Field::phase_pauli_mask(std::uint32_t a) const {
    // a'^T = M_0 a^T; M_0 is symmetric so row products suffice.
    std::uint32_t out = 0;
    for (int r = 0; r < n_; ++r) {
        if (parity(mult_[0].rows[r] & a)) out |= 1u << r;
    }
    return out;
}

}  // namespace qcut::gf
