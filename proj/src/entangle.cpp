#include "qcut/entangle.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qcut {

namespace {
constexpr double kSingularClamp = 1e-12;
}

double SchmidtVector::norm_error() const {
    double s = 0.0;
    for (double a : alpha) s += a * a;
    return std::abs(s - 1.0);
}

SchmidtVector SchmidtVector::from_coefficients(int n, std::vector<double> alpha) {
    if (n < 0 || alpha.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("SchmidtVector: length must be 2^n");
    }
    for (double a : alpha) {
        if (a < 0.0) throw std::invalid_argument("SchmidtVector: negative coefficient");
    }
    std::stable_sort(alpha.begin(), alpha.end(), std::greater<>());
    SchmidtVector out{n, std::move(alpha)};
    if (out.norm_error() > 1e-10) {
        throw std::invalid_argument("SchmidtVector: coefficients not normalized");
    }
    return out;
}

SchmidtVector SchmidtVector::from_unnormalized(int n, std::vector<double> alpha) {
    double s = 0.0;
    for (double a : alpha) {
        if (a < 0.0) throw std::invalid_argument("SchmidtVector: negative coefficient");
        s += a * a;
    }
    if (s <= 0.0) throw std::invalid_argument("SchmidtVector: zero vector");
    for (double& a : alpha) a /= std::sqrt(s);
    return from_coefficients(n, std::move(alpha));
}

SchmidtVector SchmidtVector::separable(int n) {
    std::vector<double> a(std::size_t{1} << n, 0.0);
    a[0] = 1.0;
    return SchmidtVector{n, std::move(a)};
}

SchmidtVector SchmidtVector::maximal(int n) {
    const std::size_t d = std::size_t{1} << n;
    std::vector<double> a(d, 1.0 / std::sqrt(static_cast<double>(d)));
    return SchmidtVector{n, std::move(a)};
}

SchmidtDecomposition schmidt_decompose(const PureState& psi, int n_a) {
    if (psi.norm_error() > 1e-10) {
        throw std::invalid_argument("schmidt_decompose: state not normalized");
    }
    const int n_total = psi.qubits();
    if (n_a < 1 || n_a >= n_total) {
        throw std::invalid_argument("schmidt_decompose: invalid bipartition");
    }
    const int n_b = n_total - n_a;
    const Eigen::Index da = Eigen::Index{1} << n_a;
    const Eigen::Index db = Eigen::Index{1} << n_b;

    // Row a, column b of the reshaped matrix is the amplitude of |a>|b>.
    Mat reshaped(da, db);
    for (Eigen::Index a = 0; a < da; ++a) {
        reshaped.row(a) = psi.amp.segment(a * db, db).transpose();
    }

    Eigen::JacobiSVD<Mat> svd(reshaped, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Index rank_dim = std::min(da, db);

    std::vector<double> alpha(static_cast<std::size_t>(da), 0.0);
    for (Eigen::Index i = 0; i < rank_dim; ++i) {
        double s = svd.singularValues()[i];
        alpha[static_cast<std::size_t>(i)] = (s < kSingularClamp) ? 0.0 : s;
    }
    double norm = std::sqrt(std::inner_product(alpha.begin(), alpha.end(),
                                               alpha.begin(), 0.0));
    for (double& a : alpha) a /= norm;

    SchmidtVector sv{n_a, std::move(alpha)};  // already descending from SVD
    if (sv.norm_error() > 1e-10) {
        throw std::logic_error("schmidt_decompose: singular values not normalized");
    }
    // u_a columns are the left Schmidt states, u_b columns the right ones
    // (psi = sum_i alpha_i u_a.col(i) tensor u_b.col(i)).
    return SchmidtDecomposition{std::move(sv), Unitary{svd.matrixU()},
                                Unitary{svd.matrixV().conjugate()}};
}

PureState nme_state(const SchmidtVector& alpha) {
    const Eigen::Index d = Eigen::Index{1} << alpha.n;
    Vec amp = Vec::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        amp[i * d + i] = alpha.alpha[static_cast<std::size_t>(i)];
    }
    return PureState{std::move(amp)};
}

double robustness_pure(const SchmidtVector& alpha) {
    double s = 0.0;
    for (double a : alpha.alpha) s += a;
    return s * s - 1.0;
}

double overhead_nme(int n, double r) {
    if (n < 1) throw std::invalid_argument("overhead_nme: n must be positive");
    const double r_max = std::pow(2.0, n) - 1.0;
    if (r < 0.0 || r > r_max + 1e-12) {
        throw std::invalid_argument("overhead_nme: robustness out of [0, 2^n - 1]");
    }
    return std::pow(2.0, n + 1) / (r + 1.0) - 1.0;
}

double composite_robustness_pure(std::span<const SchmidtVector> alphas) {
    if (alphas.empty()) {
        throw std::invalid_argument("composite_robustness_pure: no factors");
    }
    // Outer product of the factors' coefficients is the Schmidt vector of
    // the tensor-product state.
    std::vector<double> combined{1.0};
    int n_total = 0;
    for (const SchmidtVector& sv : alphas) {
        n_total += sv.n;
        std::vector<double> next;
        next.reserve(combined.size() * sv.alpha.size());
        for (double c : combined) {
            for (double a : sv.alpha) next.push_back(c * a);
        }
        combined = std::move(next);
    }
    return robustness_pure(SchmidtVector::from_unnormalized(n_total, std::move(combined)));
}

double advantage_separable_augment(int n_e, int n_s, double r_e) {
    if (n_e < 1 || n_s < 1) {
        throw std::invalid_argument("advantage_separable_augment: sizes must be >= 1");
    }
    return (overhead_nme(n_e, r_e) - 1.0) * (std::pow(2.0, n_s) - 1.0);
}

SchmidtVector schmidt_from_robustness(int n, double r) {
    if (n < 1) throw std::invalid_argument("schmidt_from_robustness: n must be >= 1");
    const double m = std::pow(2.0, n) - 1.0;
    if (r < 0.0 || r > m + 1e-12) {
        throw std::invalid_argument("schmidt_from_robustness: robustness out of range");
    }
    // alpha = (a, c, ..., c): solve a + m c = sqrt(r + 1), a^2 + m c^2 = 1.
    const double root = std::sqrt(r + 1.0);
    const double c = (m * root - std::sqrt(m * (m - std::min(r, m)))) / (m * (m + 1.0));
    const double a = root - m * c;
    std::vector<double> alpha(static_cast<std::size_t>(1) << n, c);
    alpha[0] = a;
    return SchmidtVector::from_unnormalized(n, std::move(alpha));
}

}  // namespace qcut
