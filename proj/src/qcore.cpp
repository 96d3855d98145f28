#include "qcut/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qcut {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kNormTol = 1e-10;
constexpr double kEigTol = 1e-9;

const Mat& pauli_matrix(char letter) {
    static const Mat I = Mat::Identity(2, 2);
    static const Mat X = (Mat(2, 2) << 0, 1, 1, 0).finished();
    static const Mat Y = (Mat(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    static const Mat Z = (Mat(2, 2) << 1, 0, 0, -1).finished();
    switch (letter) {
        case 'I': return I;
        case 'X': return X;
        case 'Y': return Y;
        case 'Z': return Z;
        default: throw std::invalid_argument("pauli letter must be one of IXYZ");
    }
}

// Basis rotation V with V sigma V^dag = Z for each Pauli letter.
const Mat& measurement_rotation(char letter) {
    static const Mat I = Mat::Identity(2, 2);
    static const Mat H = (Mat(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
    // H S^dag maps the Y eigenbasis onto the computational basis.
    static const Mat HSdag = [] {
        Mat sdag = (Mat(2, 2) << 1, 0, 0, cplx(0, -1)).finished();
        return Mat(H * sdag);
    }();
    switch (letter) {
        case 'I':
        case 'Z': return I;
        case 'X': return H;
        case 'Y': return HSdag;
        default: throw std::invalid_argument("pauli letter must be one of IXYZ");
    }
}

// Apply a 2x2 operator to one qubit of a state vector (MSB-first indexing).
Vec apply_single_qubit(const Mat& op, int qubit, const Vec& v) {
    const int n = qubit_count(v.size());
    const Eigen::Index stride = Eigen::Index{1} << (n - 1 - qubit);
    Vec out(v.size());
    for (Eigen::Index base = 0; base < v.size(); ++base) {
        if (base & stride) continue;
        cplx a = v[base], b = v[base + stride];
        out[base] = op(0, 0) * a + op(0, 1) * b;
        out[base + stride] = op(1, 0) * a + op(1, 1) * b;
    }
    return out;
}

int parity_eigenvalue(const PauliString& p, std::uint64_t label) {
    const int n = p.qubits();
    int sign = 1;
    for (int q = 0; q < n; ++q) {
        if (p.letters[static_cast<std::size_t>(q)] == 'I') continue;
        if ((label >> (n - 1 - q)) & 1u) sign = -sign;
    }
    return sign;
}

Vec rotate_to_measurement_basis(const PauliString& p, Vec v) {
    for (int q = 0; q < p.qubits(); ++q) {
        char letter = p.letters[static_cast<std::size_t>(q)];
        if (letter == 'I' || letter == 'Z') continue;
        v = apply_single_qubit(measurement_rotation(letter), q, v);
    }
    return v;
}

}  // namespace

int qubit_count(Eigen::Index dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("dimension is not a power of two >= 2");
    }
    return std::countr_zero(static_cast<std::uint64_t>(dim));
}

PureState PureState::basis(int n_qubits, std::uint64_t label) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("PureState::basis: qubit count out of range");
    }
    Vec a = Vec::Zero(Eigen::Index{1} << n_qubits);
    a[static_cast<Eigen::Index>(label)] = 1.0;
    return PureState{std::move(a)};
}

PureState PureState::from_amplitudes(Vec a) {
    PureState psi{std::move(a)};
    if (psi.qubits() > kMaxQubits) {
        throw std::invalid_argument("PureState: too many qubits");
    }
    if (psi.norm_error() > kNormTol) {
        throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
    return psi;
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
    return DensityOperator{psi.amp * psi.amp.adjoint()};
}

DensityOperator DensityOperator::from_matrix(Mat rho) {
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("DensityOperator: matrix not square");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
        throw std::invalid_argument("DensityOperator: matrix not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > kHermTol) {
        throw std::invalid_argument("DensityOperator: trace is not one");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kEigTol) {
        throw std::invalid_argument("DensityOperator: matrix not positive semidefinite");
    }
    return DensityOperator{std::move(rho)};
}

double Unitary::unitarity_error() const {
    return (m * m.adjoint() - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

Unitary Unitary::from_matrix(Mat u) {
    Unitary out{std::move(u)};
    if (out.unitarity_error() > kHermTol) {
        throw std::invalid_argument("Unitary: U U^dag deviates from identity");
    }
    return out;
}

Mat PauliString::matrix() const {
    Mat out = Mat::Identity(1, 1);
    for (char letter : letters) out = kron(out, pauli_matrix(letter));
    return out;
}

PauliString PauliString::from_code(int n_qubits, std::uint64_t base4_code) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::string s(static_cast<std::size_t>(n_qubits), 'I');
    for (int q = n_qubits - 1; q >= 0; --q) {
        s[static_cast<std::size_t>(q)] = kLetters[base4_code & 3u];
        base4_code >>= 2;
    }
    return PauliString{std::move(s)};
}

std::uint64_t PauliString::code() const {
    std::uint64_t c = 0;
    for (char letter : letters) {
        std::uint64_t d = 0;
        switch (letter) {
            case 'I': d = 0; break;
            case 'X': d = 1; break;
            case 'Y': d = 2; break;
            case 'Z': d = 3; break;
        }
        c = (c << 2) | d;
    }
    return c;
}

PauliString parse_pauli(const std::string& letters) {
    if (letters.empty()) throw std::invalid_argument("empty Pauli string");
    for (char c : letters) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw std::invalid_argument("Pauli string may only contain I, X, Y, Z");
        }
    }
    return PauliString{letters};
}

Observable Observable::pauli(const std::string& letters) {
    Observable o;
    o.is_pauli_ = true;
    o.pauli_ = parse_pauli(letters);
    o.n_ = o.pauli_.qubits();
    return o;
}

Observable Observable::hermitian(Mat m) {
    if (m.rows() != m.cols() || (m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
        throw std::invalid_argument("Observable: matrix not Hermitian");
    }
    Observable o;
    o.is_pauli_ = false;
    o.n_ = qubit_count(m.rows());
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    o.eigval_ = es.eigenvalues();
    o.eigvec_ = es.eigenvectors();
    o.matrix_ = std::move(m);
    return o;
}

Mat Observable::matrix() const {
    return is_pauli_ ? pauli_.matrix() : matrix_;
}

QuantumChannel::QuantumChannel(int n_qubits, std::vector<std::pair<double, Mat>> ops)
    : n_(n_qubits), ops_(std::move(ops)) {
    const Eigen::Index d = Eigen::Index{1} << n_;
    for (const auto& [w, a] : ops_) {
        if (w < 0) throw std::invalid_argument("QuantumChannel: negative branch weight");
        if (a.rows() != d || a.cols() != d) {
            throw std::invalid_argument("QuantumChannel: operator dimension mismatch");
        }
    }
}

QuantumChannel QuantumChannel::identity(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return QuantumChannel(n_qubits, {{1.0, Mat::Identity(d, d)}});
}

QuantumChannel QuantumChannel::from_unitary(const Unitary& u) {
    return QuantumChannel(u.qubits(), {{1.0, u.m}});
}

DensityOperator QuantumChannel::apply(const DensityOperator& rho) const {
    if (rho.qubits() != n_) throw std::invalid_argument("apply_channel: dimension mismatch");
    Mat out = Mat::Zero(rho.dim(), rho.dim());
    for (const auto& [w, a] : ops_) out.noalias() += w * a * rho.m * a.adjoint();
    return DensityOperator{std::move(out)};
}

Mat QuantumChannel::superoperator() const {
    if (n_ > kMaxSuperopQubits) {
        throw std::invalid_argument("superoperator: qubit count above dense cap");
    }
    const Eigen::Index d = Eigen::Index{1} << n_;
    Mat s = Mat::Zero(d * d, d * d);
    for (const auto& [w, a] : ops_) s.noalias() += w * kron(a.conjugate(), a);
    return s;
}

Mat QuantumChannel::choi() const {
    if (n_ > kMaxSuperopQubits) {
        throw std::invalid_argument("choi: qubit count above dense cap");
    }
    const Eigen::Index d = Eigen::Index{1} << n_;
    Mat c = Mat::Zero(d * d, d * d);
    for (const auto& [w, a] : ops_) {
        Vec v = Eigen::Map<const Vec>(a.data(), d * d);  // column stacking
        c.noalias() += w * v * v.adjoint();
    }
    return c;
}

double QuantumChannel::trace_preservation_error() const {
    const Eigen::Index d = Eigen::Index{1} << n_;
    Mat acc = Mat::Zero(d, d);
    for (const auto& [w, a] : ops_) acc.noalias() += w * a.adjoint() * a;
    return (acc - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
}

double QuantumChannel::complete_positivity_defect() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(choi(), Eigen::EigenvaluesOnly);
    return std::min(0.0, es.eigenvalues().minCoeff());
}

QuantumChannel compose(const QuantumChannel& e2, const QuantumChannel& e1) {
    if (e1.qubits() != e2.qubits()) {
        throw std::invalid_argument("compose: dimension mismatch");
    }
    std::vector<std::pair<double, Mat>> ops;
    ops.reserve(e1.branches().size() * e2.branches().size());
    for (const auto& [w2, a2] : e2.branches()) {
        for (const auto& [w1, a1] : e1.branches()) {
            ops.emplace_back(w1 * w2, a2 * a1);
        }
    }
    return QuantumChannel(e1.qubits(), std::move(ops));
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

PureState tensor(const PureState& a, const PureState& b) {
    if (a.qubits() + b.qubits() > kMaxQubits) {
        throw std::invalid_argument("tensor: qubit cap exceeded");
    }
    Vec out(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
        out.segment(i * b.dim(), b.dim()) = a.amp[i] * b.amp;
    }
    return PureState{std::move(out)};
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    if (a.qubits() + b.qubits() > kMaxQubits) {
        throw std::invalid_argument("tensor: qubit cap exceeded");
    }
    return DensityOperator{kron(a.m, b.m)};
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
    const int n = rho.qubits();
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int q : keep) {
        if (q < 0 || q >= n || kept[static_cast<std::size_t>(q)]) {
            throw std::invalid_argument("partial_trace: invalid keep set");
        }
        kept[static_cast<std::size_t>(q)] = true;
    }
    const int n_keep = static_cast<int>(keep.size());
    if (n_keep == 0 || n_keep == n) {
        throw std::invalid_argument("partial_trace: keep set must be a proper subset");
    }

    // Bit positions (from the MSB) of kept and traced qubits.
    std::vector<int> keep_shift, trace_shift;
    for (int q = 0; q < n; ++q) {
        (kept[static_cast<std::size_t>(q)] ? keep_shift : trace_shift).push_back(n - 1 - q);
    }

    auto assemble = [&](std::uint64_t kept_label, std::uint64_t traced_label) {
        std::uint64_t full = 0;
        for (std::size_t i = 0; i < keep_shift.size(); ++i) {
            full |= ((kept_label >> (keep_shift.size() - 1 - i)) & 1u) << keep_shift[i];
        }
        for (std::size_t i = 0; i < trace_shift.size(); ++i) {
            full |= ((traced_label >> (trace_shift.size() - 1 - i)) & 1u) << trace_shift[i];
        }
        return static_cast<Eigen::Index>(full);
    };

    const Eigen::Index dk = Eigen::Index{1} << n_keep;
    const Eigen::Index dt = Eigen::Index{1} << (n - n_keep);
    Mat out = Mat::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i) {
        for (Eigen::Index j = 0; j < dk; ++j) {
            cplx acc = 0;
            for (Eigen::Index t = 0; t < dt; ++t) {
                acc += rho.m(assemble(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(t)),
                             assemble(static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(t)));
            }
            out(i, j) = acc;
        }
    }
    return DensityOperator{std::move(out)};
}

PureState max_entangled(int n) {
    if (n < 1 || n > kMaxSuperopQubits) {
        throw std::invalid_argument("max_entangled: n must be in [1, 6]");
    }
    const Eigen::Index d = Eigen::Index{1} << n;
    Vec amp = Vec::Zero(d * d);
    const double c = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i < d; ++i) amp[i * d + i] = c;
    return PureState{std::move(amp)};
}

PureState permute_qubits(const PureState& psi, std::span<const int> perm) {
    const int n = psi.qubits();
    if (static_cast<int>(perm.size()) != n) {
        throw std::invalid_argument("permute_qubits: permutation size mismatch");
    }
    Vec out(psi.dim());
    for (Eigen::Index label = 0; label < psi.dim(); ++label) {
        std::uint64_t src = 0;
        for (int q = 0; q < n; ++q) {
            std::uint64_t bit = (static_cast<std::uint64_t>(label) >> (n - 1 - q)) & 1u;
            src |= bit << (n - 1 - perm[static_cast<std::size_t>(q)]);
        }
        out[label] = psi.amp[static_cast<Eigen::Index>(src)];
    }
    return PureState{std::move(out)};
}

DensityOperator apply_channel(const QuantumChannel& ch, const DensityOperator& rho) {
    return ch.apply(rho);
}

double expectation(const Observable& o, const DensityOperator& rho) {
    if ((Eigen::Index{1} << o.qubits()) != rho.dim()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    return (o.matrix() * rho.m).trace().real();
}

double expectation(const Observable& o, const PureState& psi) {
    if ((Eigen::Index{1} << o.qubits()) != psi.dim()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    return (psi.amp.adjoint() * o.matrix() * psi.amp)(0).real();
}

std::pair<std::vector<double>, std::vector<double>>
born_distribution(const Observable& o, const PureState& psi) {
    if (o.is_pauli()) {
        Vec rotated = rotate_to_measurement_basis(o.pauli_string(), psi.amp);
        double p_plus = 0.0;
        for (Eigen::Index l = 0; l < rotated.size(); ++l) {
            if (parity_eigenvalue(o.pauli_string(), static_cast<std::uint64_t>(l)) > 0) {
                p_plus += std::norm(rotated[l]);
            }
        }
        return {{1.0, -1.0}, {p_plus, 1.0 - p_plus}};
    }
    std::vector<double> values(o.eigenvalues().data(),
                               o.eigenvalues().data() + o.eigenvalues().size());
    std::vector<double> probs(values.size());
    for (Eigen::Index m = 0; m < o.eigenvectors().cols(); ++m) {
        probs[static_cast<std::size_t>(m)] = std::norm(o.eigenvectors().col(m).dot(psi.amp));
    }
    return {std::move(values), std::move(probs)};
}

std::pair<std::vector<double>, std::vector<double>>
born_distribution(const Observable& o, const DensityOperator& rho) {
    if (o.is_pauli()) {
        Mat r = rho.m;
        for (int q = 0; q < o.qubits(); ++q) {
            char letter = o.pauli_string().letters[static_cast<std::size_t>(q)];
            if (letter == 'I' || letter == 'Z') continue;
            const Mat& v = measurement_rotation(letter);
            for (Eigen::Index col = 0; col < r.cols(); ++col) {
                r.col(col) = apply_single_qubit(v, q, r.col(col));
            }
            for (Eigen::Index row = 0; row < r.rows(); ++row) {
                r.row(row) = apply_single_qubit(v.conjugate(), q, r.row(row).transpose()).transpose();
            }
        }
        double p_plus = 0.0;
        for (Eigen::Index l = 0; l < r.rows(); ++l) {
            if (parity_eigenvalue(o.pauli_string(), static_cast<std::uint64_t>(l)) > 0) {
                p_plus += r(l, l).real();
            }
        }
        p_plus = std::clamp(p_plus, 0.0, 1.0);
        return {{1.0, -1.0}, {p_plus, 1.0 - p_plus}};
    }
    std::vector<double> values(o.eigenvalues().data(),
                               o.eigenvalues().data() + o.eigenvalues().size());
    std::vector<double> probs(values.size());
    for (Eigen::Index m = 0; m < o.eigenvectors().cols(); ++m) {
        const Vec v = o.eigenvectors().col(m);
        probs[static_cast<std::size_t>(m)] = std::max(0.0, (v.adjoint() * rho.m * v)(0).real());
    }
    return {std::move(values), std::move(probs)};
}

namespace {

double sample_from_distribution(
    const std::pair<std::vector<double>, std::vector<double>>& dist, ShotRng& rng) {
    std::size_t idx = sample_index(dist.second, rng.next_double());
    return dist.first[idx];
}

}  // namespace

double born_sample(const Observable& o, const PureState& psi, ShotRng& rng) {
    return sample_from_distribution(born_distribution(o, psi), rng);
}

double born_sample(const Observable& o, const DensityOperator& rho, ShotRng& rng) {
    return sample_from_distribution(born_distribution(o, rho), rng);
}

PureState random_pure_state(int n_qubits, std::uint64_t seed) {
    ShotRng rng(seed, 0x5157u);
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    Vec amp(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        // Box-Muller; both components of one draw feed one amplitude.
        double u1 = rng.next_double(), u2 = rng.next_double();
        while (u1 <= 0.0) u1 = rng.next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        amp[i] = cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    }
    amp /= amp.norm();
    return PureState{std::move(amp)};
}

}  // namespace qcut
