#include <doctest.h>

#include <Eigen/QR>

#include "oracles.hpp"
#include "qcut/entangle.hpp"

using namespace qcut;

namespace {

double max_abs(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

Vec reconstruct(const SchmidtDecomposition& dec, Eigen::Index da, Eigen::Index db) {
    Vec out = Vec::Zero(da * db);
    const Eigen::Index rank = std::min(da, db);
    for (Eigen::Index i = 0; i < rank; ++i) {
        double a = dec.alpha.alpha[static_cast<std::size_t>(i)];
        if (a == 0.0) continue;
        for (Eigen::Index r = 0; r < da; ++r) {
            out.segment(r * db, db) += a * dec.u_a.m(r, i) * dec.u_b.m.col(i);
        }
    }
    return out;
}

Mat random_unitary(Eigen::Index d, std::uint64_t seed) {
    ShotRng rng(seed, 0x77u);
    Mat g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            g(i, j) = cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
        }
    }
    return Eigen::HouseholderQR<Mat>(g).householderQ();
}

SchmidtVector random_schmidt(int n, std::uint64_t seed, double margin = 0.05) {
    double cap = std::pow(2.0, n) - 1.0 - margin;
    return SchmidtVector::from_unnormalized(n, oracle::random_schmidt_raw(n, seed, cap));
}

}  // namespace

TEST_CASE("schmidt decomposition of the Bell state and a product state") {
    SchmidtDecomposition bell = schmidt_decompose(max_entangled(1), 1);
    CHECK(bell.alpha.alpha[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(bell.alpha.alpha[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

    SchmidtDecomposition prod = schmidt_decompose(PureState::basis(2, 0), 1);
    CHECK(prod.alpha.alpha[0] == doctest::Approx(1.0));
    CHECK(prod.alpha.alpha[1] == doctest::Approx(0.0));
}

TEST_CASE("schmidt decomposition reconstructs random states") {
    for (std::uint64_t s = 0; s < 6; ++s) {
        PureState psi = random_pure_state(4, 700 + s);
        SchmidtDecomposition dec = schmidt_decompose(psi, 2);
        CHECK(max_abs(reconstruct(dec, 4, 4) - psi.amp) < 1e-9);
        for (std::size_t i = 1; i < dec.alpha.alpha.size(); ++i) {
            CHECK(dec.alpha.alpha[i - 1] >= dec.alpha.alpha[i]);
        }
    }
    // asymmetric bipartitions on both sides
    PureState psi = random_pure_state(3, 711);
    SchmidtDecomposition dec = schmidt_decompose(psi, 1);
    CHECK(max_abs(reconstruct(dec, 2, 4) - psi.amp) < 1e-9);
    SchmidtDecomposition wide = schmidt_decompose(psi, 2);
    CHECK(max_abs(reconstruct(wide, 4, 2) - psi.amp) < 1e-9);
}

TEST_CASE("schmidt decomposition rejects unnormalized input") {
    Vec bad = Vec::Zero(4);
    bad[0] = 2.0;
    CHECK_THROWS_AS(schmidt_decompose(PureState{bad}, 1), std::invalid_argument);
}

TEST_CASE("pure-state robustness closed form") {
    CHECK(robustness_pure(SchmidtVector::separable(1)) == doctest::Approx(0.0));
    CHECK(robustness_pure(SchmidtVector::maximal(1)) == doctest::Approx(1.0));
    for (int n = 1; n <= 4; ++n) {
        CHECK(robustness_pure(SchmidtVector::maximal(n)) ==
              doctest::Approx(std::pow(2.0, n) - 1.0).epsilon(1e-12));
    }
}

TEST_CASE("robustness is invariant under local unitaries") {
    for (std::uint64_t s = 0; s < 4; ++s) {
        SchmidtVector alpha = random_schmidt(2, 720 + s);
        PureState psi = nme_state(alpha);
        Mat local = kron(random_unitary(4, 730 + s), random_unitary(4, 740 + s));
        PureState rotated{local * psi.amp};
        SchmidtDecomposition dec = schmidt_decompose(rotated, 2);
        CHECK(robustness_pure(dec.alpha) ==
              doctest::Approx(robustness_pure(alpha)).epsilon(1e-9));
    }
}

TEST_CASE("overhead formula endpoints") {
    CHECK(overhead_nme(1, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
    for (int n = 1; n <= 4; ++n) {
        CHECK(overhead_nme(n, 0.0) ==
              doctest::Approx(std::pow(2.0, n + 1) - 1.0).epsilon(1e-15));
        CHECK(overhead_nme(n, std::pow(2.0, n) - 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(overhead_nme(1, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(overhead_nme(1, 1.5), std::invalid_argument);
}

TEST_CASE("composite robustness of pure factors multiplies") {
    SchmidtVector bell = SchmidtVector::maximal(1);
    const SchmidtVector two_bells[] = {bell, bell};
    CHECK(composite_robustness_pure(two_bells) == doctest::Approx(3.0).epsilon(1e-12));

    SchmidtVector sep = SchmidtVector::separable(1);
    SchmidtVector nme = random_schmidt(2, 750);
    const SchmidtVector augmented[] = {nme, sep};
    CHECK(composite_robustness_pure(augmented) ==
          doctest::Approx(robustness_pure(nme)).epsilon(1e-12));

    // (R0, R1) = (1, 0.5) -> 2 * 1.5 - 1 = 2, cross-checked against the
    // robustness of the explicitly decomposed product state.
    // R = 2ab = 0.5 with a^2 + b^2 = 1 pins the second factor.
    double ab = 0.25;
    double a2 = (1.0 + std::sqrt(1.0 - 4.0 * ab * ab)) / 2.0;
    SchmidtVector r_half = SchmidtVector::from_coefficients(
        1, {std::sqrt(a2), std::sqrt(1.0 - a2)});
    CHECK(robustness_pure(r_half) == doctest::Approx(0.5).epsilon(1e-12));
    const SchmidtVector pair[] = {SchmidtVector::maximal(1), r_half};
    CHECK(composite_robustness_pure(pair) == doctest::Approx(2.0).epsilon(1e-12));

    PureState product = tensor(nme_state(SchmidtVector::maximal(1)), nme_state(r_half));
    // pair layout (a0 b0 a1 b1): move both A qubits in front.
    const int perm[] = {0, 2, 1, 3};
    SchmidtDecomposition dec = schmidt_decompose(permute_qubits(product, perm), 2);
    CHECK(robustness_pure(dec.alpha) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("joint cuts beat separate cuts for strict NME factors") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        int k0 = 1 + static_cast<int>(s % 2);
        int k1 = 1 + static_cast<int>((s / 2) % 2);
        SchmidtVector a0 = random_schmidt(k0, 800 + 7 * s);
        SchmidtVector a1 = random_schmidt(k1, 900 + 7 * s);
        double separate = overhead_nme(k0, robustness_pure(a0)) *
                          overhead_nme(k1, robustness_pure(a1));
        const SchmidtVector both[] = {a0, a1};
        double joint = overhead_nme(k0 + k1, composite_robustness_pure(both));
        CHECK(separate > joint + 1e-9);
    }
}

TEST_CASE("appending a maximally entangled factor leaves the overhead fixed") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        int n0 = 1 + static_cast<int>(s % 2);
        int n1 = 1 + static_cast<int>((s / 3) % 2);
        SchmidtVector rho = random_schmidt(n0, 1000 + s);
        const SchmidtVector combo[] = {rho, SchmidtVector::maximal(n1)};
        double joint = overhead_nme(n0 + n1, composite_robustness_pure(combo));
        double alone = overhead_nme(n0, robustness_pure(rho));
        CHECK(joint == doctest::Approx(alone).epsilon(1e-9));
    }
}

TEST_CASE("separable augmentation advantage identity") {
    CHECK(advantage_separable_augment(1, 1, 1.0) == doctest::Approx(0.0));
    CHECK(advantage_separable_augment(1, 1, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(advantage_separable_augment(2, 2, 1.0) == doctest::Approx(6.0).epsilon(1e-12));

    for (std::uint64_t s = 0; s < 100; ++s) {
        int ne = 1 + static_cast<int>(s % 2);
        int ns = 1 + static_cast<int>((s / 5) % 2);
        SchmidtVector rho = random_schmidt(ne, 1100 + s);
        double r = robustness_pure(rho);
        const SchmidtVector combo[] = {rho, SchmidtVector::separable(ns)};
        double joint = overhead_nme(ne + ns, composite_robustness_pure(combo));
        double separate = overhead_nme(ne, r) * overhead_nme(ns, 0.0);
        CHECK(separate - joint ==
              doctest::Approx(advantage_separable_augment(ne, ns, r)).epsilon(1e-9));
    }
}

TEST_CASE("schmidt vectors constructed for a target robustness hit it") {
    for (int n = 1; n <= 4; ++n) {
        const double r_max = std::pow(2.0, n) - 1.0;
        for (int g = 0; g <= 8; ++g) {
            double r = r_max * g / 8.0;
            SchmidtVector alpha = schmidt_from_robustness(n, r);
            CHECK(robustness_pure(alpha) == doctest::Approx(r).epsilon(1e-12));
            CHECK(alpha.norm_error() < 1e-12);
        }
    }
}

TEST_CASE("schmidt vector validation") {
    CHECK_THROWS_AS(SchmidtVector::from_coefficients(1, {0.5, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(SchmidtVector::from_coefficients(1, {1.0, -0.1, 0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SchmidtVector::from_unnormalized(1, {0.0, 0.0}), std::invalid_argument);
    SchmidtVector sorted = SchmidtVector::from_unnormalized(1, {1.0, 3.0});
    CHECK(sorted.alpha[0] > sorted.alpha[1]);
}
