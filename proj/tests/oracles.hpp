// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <cstdint>
#include <vector>

#include "qcut/qcore.hpp"
#include "qcut/rng.hpp"

namespace qcut::oracle {

// Full polynomial product over F2 followed by long-division remainder.
inline std::uint64_t gf_mul_longdiv(std::uint32_t a, std::uint32_t b,
                                    std::uint32_t poly) {
    std::uint64_t prod = 0;
    for (int i = 0; i < 32; ++i) {
        if ((b >> i) & 1u) prod ^= static_cast<std::uint64_t>(a) << i;
    }
    auto degree = [](std::uint64_t p) {
        int d = -1;
        while (p) { p >>= 1; ++d; }
        return d;
    };
    const int dp = degree(poly);
    while (prod != 0 && degree(prod) >= dp) {
        prod ^= static_cast<std::uint64_t>(poly) << (degree(prod) - dp);
    }
    return prod;
}

// Kronecker product through the direct index formula.
inline Mat kron_by_index(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            out(r, c) = a(r / b.rows(), c / b.cols()) * b(r % b.rows(), c % b.cols());
        }
    }
    return out;
}

// Partial trace as a literal double sum over full-space labels: entries of
// rho with matching traced bits accumulate into the kept-bit entry.
inline Mat partial_trace_by_scan(const Mat& rho, int n, const std::vector<int>& keep) {
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int q : keep) kept[static_cast<std::size_t>(q)] = true;
    auto split = [&](Eigen::Index label, bool want_kept) {
        std::uint64_t bits = 0;
        for (int q = 0; q < n; ++q) {
            if (kept[static_cast<std::size_t>(q)] != want_kept) continue;
            bits = (bits << 1) | ((static_cast<std::uint64_t>(label) >> (n - 1 - q)) & 1u);
        }
        return bits;
    };
    const Eigen::Index dk = Eigen::Index{1} << keep.size();
    const Eigen::Index d = rho.rows();
    Mat out = Mat::Zero(dk, dk);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            if (split(a, false) != split(b, false)) continue;
            out(static_cast<Eigen::Index>(split(a, true)),
                static_cast<Eigen::Index>(split(b, true))) += rho(a, b);
        }
    }
    return out;
}

// Random Schmidt vector with robustness at most r_cap (mixes toward the
// separable vector when a raw draw lands above the cap).
inline std::vector<double> random_schmidt_raw(int n, std::uint64_t seed, double r_cap) {
    const std::size_t d = std::size_t{1} << n;
    ShotRng rng(seed, 0xa1fau);
    std::vector<double> alpha(d);
    for (double& a : alpha) a += rng.next_double();
    auto normalized = [](std::vector<double> v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        for (double& x : v) x /= std::sqrt(s);
        return v;
    };
    auto robustness = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s * s - 1.0;
    };
    alpha = normalized(alpha);
    if (robustness(alpha) <= r_cap) return alpha;
    // Bisect the mixing weight toward (1, 0, ..., 0).
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        double t = 0.5 * (lo + hi);
        std::vector<double> mixed = alpha;
        for (std::size_t i = 0; i < d; ++i) {
            mixed[i] = (1.0 - t) * alpha[i] + (i == 0 ? t : 0.0);
        }
        mixed = normalized(mixed);
        (robustness(mixed) > r_cap * 0.98 ? lo : hi) = t;
    }
    std::vector<double> mixed = alpha;
    for (std::size_t i = 0; i < d; ++i) {
        mixed[i] = (1.0 - hi) * alpha[i] + (i == 0 ? hi : 0.0);
    }
    return normalized(mixed);
}

// Random density operator: mixture of a few pseudo-random pure states.
inline DensityOperator random_density(int n, std::uint64_t seed, int mixture = 3) {
    const Eigen::Index d = Eigen::Index{1} << n;
    ShotRng rng(seed, 0xdeu);
    Mat rho = Mat::Zero(d, d);
    double total = 0.0;
    for (int m = 0; m < mixture; ++m) {
        double w = rng.next_double() + 0.1;
        PureState psi = random_pure_state(n, seed * 131 + static_cast<std::uint64_t>(m));
        rho += w * (psi.amp * psi.amp.adjoint());
        total += w;
    }
    rho /= total;
    return DensityOperator::from_matrix(std::move(rho));
}

}  // namespace qcut::oracle
