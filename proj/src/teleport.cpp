#include "qcut/teleport.hpp"

#include <cmath>
#include <stdexcept>

namespace qcut {

namespace {
constexpr double kProbClamp = 1e-14;
constexpr double kProbTol = 1e-10;
}

PureState generalized_bell(const PauliString& sigma) {
    const int n = sigma.qubits();
    PureState phi = max_entangled(n);
    if (sigma.identity()) return phi;
    const Eigen::Index d = Eigen::Index{1} << n;
    Mat op = sigma.matrix();
    Vec amp = Vec::Zero(d * d);
    // (sigma tensor I) acts block-wise on the A register.
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            if (op(a, b) != 0.0) amp.segment(a * d, d) += op(a, b) * phi.amp.segment(b * d, d);
        }
    }
    return PureState{std::move(amp)};
}

TeleportChannel::TeleportChannel(int n, std::vector<double> probs_by_code)
    : n_(n), probs_(std::move(probs_by_code)) {
    if (probs_.size() != (std::size_t{1} << (2 * n))) {
        throw std::invalid_argument("TeleportChannel: need one weight per Pauli string");
    }
    double sum = 0.0;
    for (double& p : probs_) {
        if (p < -1e-12) {
            throw std::invalid_argument("TeleportChannel: negative error probability");
        }
        if (p < kProbClamp) p = 0.0;
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTol) {
        throw std::invalid_argument("TeleportChannel: error probabilities do not sum to one");
    }
}

double TeleportChannel::error_prob(const PauliString& sigma) const {
    return probs_[static_cast<std::size_t>(sigma.code())];
}

std::map<PauliString, double> TeleportChannel::error_probs() const {
    std::map<PauliString, double> out;
    for (std::size_t c = 0; c < probs_.size(); ++c) {
        out.emplace(PauliString::from_code(n_, c), probs_[c]);
    }
    return out;
}

QuantumChannel TeleportChannel::channel() const {
    std::vector<std::pair<double, Mat>> ops;
    for (std::size_t c = 0; c < probs_.size(); ++c) {
        if (probs_[c] == 0.0) continue;
        ops.emplace_back(probs_[c], PauliString::from_code(n_, c).matrix());
    }
    return QuantumChannel(n_, std::move(ops));
}

TeleportChannel teleport_channel(const DensityOperator& resource, int n) {
    if (resource.qubits() != 2 * n) {
        throw std::invalid_argument("teleport_channel: resource must hold 2n qubits");
    }
    const std::size_t count = std::size_t{1} << (2 * n);
    std::vector<double> probs(count, 0.0);
    for (std::size_t c = 0; c < count; ++c) {
        PureState bell = generalized_bell(PauliString::from_code(n, c));
        probs[c] = (bell.amp.adjoint() * resource.m * bell.amp)(0).real();
    }
    return TeleportChannel(n, std::move(probs));
}

std::vector<double> nme_overlaps(const gf::Field& field, const SchmidtVector& alpha) {
    if (field.degree() != alpha.n) {
        throw std::invalid_argument("nme_overlaps: field degree does not match alpha");
    }
    const std::uint32_t d = field.size();
    std::vector<double> out(d, 0.0);
    for (std::uint32_t k = 0; k < d; ++k) {
        double s = 0.0;
        for (std::uint32_t i = 0; i < d; ++i) {
            s += gf::Field::sign_exp(field.mul(k, i)) * alpha.alpha[i];
        }
        double w = s * s / static_cast<double>(d);
        out[k] = (w < kProbClamp) ? 0.0 : w;
    }
    return out;
}

TeleportChannel teleport_channel_nme(const gf::Field& field, const SchmidtVector& alpha) {
    const int n = field.degree();
    std::vector<double> overlaps = nme_overlaps(field, alpha);
    std::vector<double> probs(std::size_t{1} << (2 * n), 0.0);
    for (std::uint32_t k = 0; k < field.size(); ++k) {
        // Zhat_k is the Z-type string with mask M_0 k (bit i -> qubit n-1-i).
        std::uint32_t mask = field.phase_pauli_mask(k);
        std::string letters(static_cast<std::size_t>(n), 'I');
        for (int q = 0; q < n; ++q) {
            if ((mask >> (n - 1 - q)) & 1u) letters[static_cast<std::size_t>(q)] = 'Z';
        }
        probs[static_cast<std::size_t>(PauliString{letters}.code())] = overlaps[k];
    }
    return TeleportChannel(n, std::move(probs));
}

}  // namespace qcut
