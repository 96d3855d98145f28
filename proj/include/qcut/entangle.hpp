#pragma once

#include <span>
#include <vector>

#include "qcut/qcore.hpp"

namespace qcut {

// Schmidt coefficients of a bipartite pure state with n qubits per side:
// nonnegative, sum of squares one, sorted descending. n = 0 is the trivial
// single-coefficient vector (used for fully separable resources).
struct SchmidtVector {
    int n = 0;
    std::vector<double> alpha;  // length 2^n

    double norm_error() const;

    // Sorts descending, validates nonnegativity and normalization.
    static SchmidtVector from_coefficients(int n, std::vector<double> alpha);
    // Renormalizes first; rejects negative entries and the zero vector.
    static SchmidtVector from_unnormalized(int n, std::vector<double> alpha);

    static SchmidtVector separable(int n);  // (1, 0, ..., 0)
    static SchmidtVector maximal(int n);    // uniform 2^(-n/2)
};

struct SchmidtDecomposition {
    SchmidtVector alpha;
    Unitary u_a;
    Unitary u_b;
};

// SVD of the reshaped amplitude matrix; singular values below 1e-12 are
// clamped to zero. The bipartition keeps the first n_a qubits on side A.
SchmidtDecomposition schmidt_decompose(const PureState& psi, int n_a);

// The diagonal-form state sum_i alpha_i |i>_A |i>_B on 2n qubits.
PureState nme_state(const SchmidtVector& alpha);

// Generalized robustness of entanglement of a pure state: (sum alpha_i)^2 - 1.
double robustness_pure(const SchmidtVector& alpha);

// Optimal sampling overhead for a parallel cut of n wires with a resource
// of robustness r: 2^(n+1) / (r + 1) - 1, for 0 <= r <= 2^n - 1.
double overhead_nme(int n, double r);

// Robustness of a tensor product of pure factors, computed from the outer
// product of their Schmidt vectors; equals prod (R_i + 1) - 1.
double composite_robustness_pure(std::span<const SchmidtVector> alphas);

// Overhead saved by cutting n_e + n_s wires jointly (entangled resource of
// robustness r_e padded with a separable state) instead of separately:
// (gamma_e - 1) (2^{n_s} - 1).
double advantage_separable_augment(int n_e, int n_s, double r_e);

// A Schmidt vector of the family (a, c, c, ..., c) whose robustness is r.
SchmidtVector schmidt_from_robustness(int n, double r);

}  // namespace qcut
