#include "qcut/qpd.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qcut {

namespace {

constexpr double kDegenerateEps = 1e-9;

void finalize(Qpd* qpd) {
    qpd->kappa = 0.0;
    double csum = 0.0;
    for (const QpdTerm& t : qpd->terms) {
        qpd->kappa += std::abs(t.coefficient);
        csum += t.coefficient;
    }
    if (std::abs(csum - 1.0) > 1e-10) {
        throw std::logic_error("Qpd: coefficients do not sum to one");
    }
    qpd->sampling_prob.clear();
    qpd->signs.clear();
    double psum = 0.0;
    for (const QpdTerm& t : qpd->terms) {
        qpd->sampling_prob.push_back(std::abs(t.coefficient) / qpd->kappa);
        qpd->signs.push_back(t.coefficient < 0 ? -1 : 1);
        psum += qpd->sampling_prob.back();
    }
    if (std::abs(psum - 1.0) > 1e-12) {
        throw std::logic_error("Qpd: sampling probabilities do not sum to one");
    }
}

SchmidtVector embed_alpha(int n, const SchmidtVector& alpha_e) {
    std::vector<double> padded(std::size_t{1} << n, 0.0);
    for (std::size_t j = 0; j < alpha_e.alpha.size(); ++j) {
        padded[j] = alpha_e.alpha[j];
    }
    return SchmidtVector{n, std::move(padded)};  // order preserved: still descending
}

}  // namespace

double CorrectionTable::sum_error() const {
    double s = std::accumulate(prob.begin(), prob.end(), 0.0);
    return std::abs(s - 1.0);
}

double Qpd::coefficient_sum() const {
    double s = 0.0;
    for (const QpdTerm& t : terms) s += t.coefficient;
    return s;
}

Qpd qpd_baseline(int n) {
    return qpd_baseline(std::make_shared<const MubFamily>(n));
}

Qpd qpd_baseline(std::shared_ptr<const MubFamily> mubs) {
    const int n = mubs->qubits();
    if (n < 1 || n > 4) throw std::invalid_argument("qpd_baseline: n must be in [1, 4]");
    const std::uint32_t d = mubs->count();

    Qpd qpd;
    qpd.n = n;
    qpd.mubs = std::move(mubs);
    for (std::uint32_t j = 0; j < d; ++j) {
        QpdTerm t;
        t.coefficient = 1.0;
        t.kind = TermKind::mub_measure_prepare;
        t.basis_index = j;
        qpd.terms.push_back(std::move(t));
    }
    QpdTerm corr;
    corr.coefficient = -(static_cast<double>(d) - 1.0);
    corr.kind = TermKind::correction_measure_prepare;
    corr.correction.prob.assign(d, 1.0 / (static_cast<double>(d) - 1.0));
    corr.correction.prob[0] = 0.0;
    qpd.terms.push_back(std::move(corr));
    finalize(&qpd);
    return qpd;
}

CorrectionTable prob_correction(const gf::Field& field, const SchmidtVector& alpha) {
    if (field.degree() != alpha.n) {
        throw std::invalid_argument("prob_correction: field degree does not match alpha");
    }
    const double d = static_cast<double>(field.size());
    const double r = robustness_pure(alpha);
    const double denom = d - 1.0 - r;
    if (denom <= kDegenerateEps) {
        throw std::invalid_argument(
            "prob_correction: resource is maximally entangled (degenerate correction)");
    }
    CorrectionTable table;
    table.prob.assign(field.size(), 0.0);
    for (std::uint32_t k = 1; k < field.size(); ++k) {
        double s = 0.0;
        for (std::uint32_t j = 0; j < field.size(); ++j) {
            s += gf::Field::sign_exp(field.mul(k, j)) * alpha.alpha[j];
        }
        table.prob[k] = s * s / denom;
    }
    if (table.sum_error() > 1e-10) {
        throw std::logic_error("prob_correction: probabilities do not sum to one");
    }
    return table;
}

Qpd qpd_nme(int n, const SchmidtVector& alpha) {
    return qpd_nme(std::make_shared<const MubFamily>(n), alpha);
}

Qpd qpd_nme(std::shared_ptr<const MubFamily> mubs, const SchmidtVector& alpha) {
    const int n = mubs->qubits();
    if (n < 1 || n > 4) throw std::invalid_argument("qpd_nme: n must be in [1, 4]");
    if (alpha.n != n) throw std::invalid_argument("qpd_nme: alpha must have length 2^n");
    if (alpha.norm_error() > 1e-10) {
        throw std::invalid_argument("qpd_nme: alpha not normalized");
    }
    const std::uint32_t d = mubs->count();
    const double r = robustness_pure(alpha);
    const bool degenerate = (static_cast<double>(d) - 1.0 - r) <= kDegenerateEps;

    Qpd qpd;
    qpd.n = n;
    qpd.mubs = std::move(mubs);
    const double tele_coeff = 1.0 / (r + 1.0);
    for (std::uint32_t j = 0; j < d; ++j) {
        QpdTerm t;
        t.coefficient = tele_coeff;
        t.kind = TermKind::teleport_conjugated;
        t.basis_index = j;
        t.alpha = alpha;
        qpd.terms.push_back(std::move(t));
    }
    if (!degenerate) {
        QpdTerm corr;
        corr.coefficient = -(static_cast<double>(d) / (r + 1.0) - 1.0);
        corr.kind = TermKind::correction_measure_prepare;
        corr.correction = prob_correction(qpd.mubs->field(), alpha);
        qpd.terms.push_back(std::move(corr));
    }
    finalize(&qpd);
    return qpd;
}

Qpd qpd_streamlined(int n, const SchmidtVector& alpha_e) {
    if (alpha_e.n >= n) {
        throw std::invalid_argument("qpd_streamlined: resource must be smaller than the cut");
    }
    if (alpha_e.n < 0) throw std::invalid_argument("qpd_streamlined: invalid resource size");
    return qpd_nme(n, embed_alpha(n, alpha_e));
}

QuantumChannel term_channel(const Qpd& qpd, std::size_t i) {
    if (i >= qpd.terms.size()) throw std::invalid_argument("term_channel: index out of range");
    const QpdTerm& t = qpd.terms[i];
    const MubFamily& mubs = *qpd.mubs;
    const Eigen::Index d = mubs.field().size();

    std::vector<std::pair<double, Mat>> ops;
    switch (t.kind) {
        case TermKind::mub_measure_prepare: {
            const Mat& u = mubs.unitary(t.basis_index).m;
            for (Eigen::Index l = 0; l < d; ++l) {
                ops.emplace_back(1.0, u.col(l) * u.col(l).adjoint());
            }
            break;
        }
        case TermKind::teleport_conjugated: {
            const Mat& u = mubs.unitary(t.basis_index).m;
            std::vector<double> w = nme_overlaps(mubs.field(), t.alpha);
            for (std::uint32_t k = 0; k < mubs.field().size(); ++k) {
                if (w[k] == 0.0) continue;
                ops.emplace_back(w[k], u * phase_op(mubs.field(), k).m * u.adjoint());
            }
            break;
        }
        case TermKind::correction_measure_prepare: {
            for (std::uint32_t l = 0; l < mubs.field().size(); ++l) {
                for (std::uint32_t k = 1; k < mubs.field().size(); ++k) {
                    double p = t.correction.prob[k];
                    if (p == 0.0) continue;
                    Mat a = Mat::Zero(d, d);
                    a(l ^ k, l) = 1.0;
                    ops.emplace_back(p, std::move(a));
                }
            }
            break;
        }
    }
    return QuantumChannel(qpd.n, std::move(ops));
}

Mat reconstruct_superoperator(const Qpd& qpd) {
    const Eigen::Index d2 = Eigen::Index{1} << (2 * qpd.n);
    const int m = static_cast<int>(qpd.terms.size());
    std::vector<Mat> partials(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) {
        partials[static_cast<std::size_t>(i)] =
            qpd.terms[static_cast<std::size_t>(i)].coefficient *
            term_channel(qpd, static_cast<std::size_t>(i)).superoperator();
    }
    Mat sum = Mat::Zero(d2, d2);
    for (const Mat& p : partials) sum += p;
    return sum;
}

VerifyReport verify_identity(const Qpd& qpd) {
    const Eigen::Index d2 = Eigen::Index{1} << (2 * qpd.n);
    Mat deviation = reconstruct_superoperator(qpd) - Mat::Identity(d2, d2);
    return VerifyReport{deviation.cwiseAbs().maxCoeff()};
}

namespace reference {

Mat reconstruct_superoperator(const Qpd& qpd) {
    const Eigen::Index d = Eigen::Index{1} << qpd.n;
    Mat sum = Mat::Zero(d * d, d * d);
    for (std::size_t i = 0; i < qpd.terms.size(); ++i) {
        QuantumChannel ch = term_channel(qpd, i);
        for (Eigen::Index col_i = 0; col_i < d; ++col_i) {
            for (Eigen::Index col_j = 0; col_j < d; ++col_j) {
                Mat unit = Mat::Zero(d, d);
                unit(col_i, col_j) = 1.0;
                Mat image = Mat::Zero(d, d);
                for (const auto& [w, a] : ch.branches()) {
                    image.noalias() += w * a * unit * a.adjoint();
                }
                sum.col(col_i + d * col_j) +=
                    qpd.terms[i].coefficient *
                    Eigen::Map<const Vec>(image.data(), d * d);
            }
        }
    }
    return sum;
}

}  // namespace reference

}  // namespace qcut
