#include "qcut/estimator.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcut {

namespace {

constexpr std::int64_t kBlockShots = 4096;

std::vector<double> mub_outcome_probs(const Mat& u, const PureState& input) {
    Vec rotated = u.adjoint() * input.amp;
    std::vector<double> probs(static_cast<std::size_t>(rotated.size()));
    for (Eigen::Index l = 0; l < rotated.size(); ++l) {
        probs[static_cast<std::size_t>(l)] = std::norm(rotated[l]);
    }
    return probs;
}

std::vector<double> computational_probs(const PureState& input) {
    std::vector<double> probs(static_cast<std::size_t>(input.dim()));
    for (Eigen::Index l = 0; l < input.dim(); ++l) {
        probs[static_cast<std::size_t>(l)] = std::norm(input.amp[l]);
    }
    return probs;
}

PureState teleport_post_state(const MubFamily& mubs, std::uint32_t j,
                              std::uint32_t k, const PureState& input) {
    const Mat& u = mubs.unitary(j).m;
    Vec v = u.adjoint() * input.amp;
    for (std::uint32_t l = 0; l < mubs.field().size(); ++l) {
        if (gf::Field::sign_exp(mubs.field().mul(l, k)) < 0) v[l] = -v[l];
    }
    return PureState{u * v};
}

using BornDist = std::pair<std::vector<double>, std::vector<double>>;

double draw_value(const BornDist& dist, ShotRng& rng) {
    return dist.first[sample_index(dist.second, rng.next_double())];
}

// Branch layout and cached Born distributions for one term, mirroring the
// uniform-consumption order of run_shot exactly.
struct PreparedTerm {
    TermKind kind;
    std::vector<double> branch_probs;       // l (mub, correction) or k (teleport)
    const std::vector<double>* shift_probs = nullptr;  // correction second stage
    std::vector<BornDist> dists;            // per branch / per final label
    BornDist density_dist;                  // density mode
};

struct Prepared {
    double kappa = 0.0;
    std::vector<PreparedTerm> terms;
};

Prepared prepare(const Qpd& qpd, const PureState& input, const Observable& obs,
                 SampleMode mode) {
    Prepared prep;
    prep.kappa = qpd.kappa;
    const MubFamily& mubs = *qpd.mubs;
    const std::uint32_t d = mubs.field().size();
    DensityOperator input_rho =
        mode == SampleMode::density ? DensityOperator::from_pure(input) : DensityOperator{};

    for (std::size_t i = 0; i < qpd.terms.size(); ++i) {
        const QpdTerm& t = qpd.terms[i];
        PreparedTerm pt;
        pt.kind = t.kind;
        if (mode == SampleMode::density) {
            pt.density_dist = born_distribution(obs, term_channel(qpd, i).apply(input_rho));
            prep.terms.push_back(std::move(pt));
            continue;
        }
        switch (t.kind) {
            case TermKind::mub_measure_prepare: {
                const Mat& u = mubs.unitary(t.basis_index).m;
                pt.branch_probs = mub_outcome_probs(u, input);
                for (std::uint32_t l = 0; l < d; ++l) {
                    pt.dists.push_back(born_distribution(obs, PureState{u.col(l)}));
                }
                break;
            }
            case TermKind::teleport_conjugated: {
                pt.branch_probs = nme_overlaps(mubs.field(), t.alpha);
                for (std::uint32_t k = 0; k < d; ++k) {
                    pt.dists.push_back(born_distribution(
                        obs, teleport_post_state(mubs, t.basis_index, k, input)));
                }
                break;
            }
            case TermKind::correction_measure_prepare: {
                pt.branch_probs = computational_probs(input);
                pt.shift_probs = &t.correction.prob;
                for (std::uint32_t m = 0; m < d; ++m) {
                    pt.dists.push_back(born_distribution(obs, PureState::basis(qpd.n, m)));
                }
                break;
            }
        }
        prep.terms.push_back(std::move(pt));
    }
    return prep;
}

// Consumes the stream exactly like run_shot does for the same term and mode.
double prepared_shot(const Prepared& prep, std::size_t term, int sign, ShotRng& rng,
                     SampleMode mode) {
    const PreparedTerm& pt = prep.terms[term];
    double eig = 0.0;
    if (mode == SampleMode::density) {
        eig = draw_value(pt.density_dist, rng);
    } else {
        switch (pt.kind) {
            case TermKind::mub_measure_prepare:
            case TermKind::teleport_conjugated: {
                std::size_t branch = sample_index(pt.branch_probs, rng.next_double());
                eig = draw_value(pt.dists[branch], rng);
                break;
            }
            case TermKind::correction_measure_prepare: {
                std::size_t l = sample_index(pt.branch_probs, rng.next_double());
                std::size_t k = sample_index(*pt.shift_probs, rng.next_double());
                eig = draw_value(pt.dists[l ^ k], rng);
                break;
            }
        }
    }
    return sign * prep.kappa * eig;
}

void check_estimate_args(const Qpd& qpd, const PureState& input,
                         const Observable& obs, const EstimatorConfig& cfg) {
    if (input.qubits() != qpd.n || obs.qubits() != qpd.n) {
        throw std::invalid_argument("estimate: dimension mismatch");
    }
    if (cfg.shots < 1) throw std::invalid_argument("estimate: shots must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("estimate: workers must be >= 1");
}

EstimateResult finalize_moments(double sum, double sumsq, std::int64_t shots,
                                double kappa, std::vector<std::int64_t> counts) {
    EstimateResult res;
    res.kappa = kappa;
    res.shots_used = shots;
    res.per_term_shots = std::move(counts);
    res.estimate = sum / static_cast<double>(shots);
    res.second_moment = sumsq / static_cast<double>(shots);
    if (shots > 1) {
        double var = (sumsq - static_cast<double>(shots) * res.estimate * res.estimate) /
                     static_cast<double>(shots - 1);
        res.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(shots));
    }
    return res;
}

}  // namespace

std::pair<std::size_t, int> sample_term(const Qpd& qpd, ShotRng& rng) {
    std::size_t i = sample_index(qpd.sampling_prob, rng.next_double());
    return {i, qpd.signs[i]};
}

double run_shot(const Qpd& qpd, std::size_t term, const PureState& input,
                const Observable& obs, ShotRng& rng, SampleMode mode) {
    if (term >= qpd.terms.size()) throw std::invalid_argument("run_shot: bad term index");
    const QpdTerm& t = qpd.terms[term];
    const MubFamily& mubs = *qpd.mubs;
    const int sign = qpd.signs[term];

    if (mode == SampleMode::density) {
        DensityOperator out = term_channel(qpd, term).apply(DensityOperator::from_pure(input));
        return sign * qpd.kappa * draw_value(born_distribution(obs, out), rng);
    }

    PureState post{Vec{}};
    switch (t.kind) {
        case TermKind::mub_measure_prepare: {
            const Mat& u = mubs.unitary(t.basis_index).m;
            std::vector<double> probs = mub_outcome_probs(u, input);
            std::size_t l = sample_index(probs, rng.next_double());
            post = PureState{u.col(static_cast<Eigen::Index>(l))};
            break;
        }
        case TermKind::teleport_conjugated: {
            std::vector<double> w = nme_overlaps(mubs.field(), t.alpha);
            std::size_t k = sample_index(w, rng.next_double());
            post = teleport_post_state(mubs, t.basis_index,
                                       static_cast<std::uint32_t>(k), input);
            break;
        }
        case TermKind::correction_measure_prepare: {
            std::vector<double> probs = computational_probs(input);
            std::size_t l = sample_index(probs, rng.next_double());
            std::size_t k = sample_index(t.correction.prob, rng.next_double());
            post = PureState::basis(qpd.n, static_cast<std::uint64_t>(l ^ k));
            break;
        }
    }
    return sign * qpd.kappa * draw_value(born_distribution(obs, post), rng);
}

EstimateResult estimate(const Qpd& qpd, const PureState& input,
                        const Observable& obs, const EstimatorConfig& cfg) {
    check_estimate_args(qpd, input, obs, cfg);
    const Prepared prep = prepare(qpd, input, obs, cfg.mode);
    const std::size_t n_terms = qpd.terms.size();
    const std::int64_t n_blocks = (cfg.shots + kBlockShots - 1) / kBlockShots;

    std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);
    std::vector<double> block_sumsq(static_cast<std::size_t>(n_blocks), 0.0);
    std::vector<std::int64_t> block_counts(static_cast<std::size_t>(n_blocks) * n_terms, 0);

    const int workers = cfg.workers;
#pragma omp parallel for schedule(dynamic) num_threads(workers) if (workers > 1)
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const std::int64_t begin = b * kBlockShots;
        const std::int64_t end = std::min(cfg.shots, begin + kBlockShots);
        double sum = 0.0, sumsq = 0.0;
        std::int64_t* counts = &block_counts[static_cast<std::size_t>(b) * n_terms];
        for (std::int64_t s = begin; s < end; ++s) {
            ShotRng rng(cfg.seed, static_cast<std::uint64_t>(s));
            auto [term, sign] = sample_term(qpd, rng);
            double value = prepared_shot(prep, term, sign, rng, cfg.mode);
            sum += value;
            sumsq += value * value;
            ++counts[term];
        }
        block_sum[static_cast<std::size_t>(b)] = sum;
        block_sumsq[static_cast<std::size_t>(b)] = sumsq;
    }

    double sum = 0.0, sumsq = 0.0;
    std::vector<std::int64_t> counts(n_terms, 0);
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        sum += block_sum[static_cast<std::size_t>(b)];
        sumsq += block_sumsq[static_cast<std::size_t>(b)];
        for (std::size_t t = 0; t < n_terms; ++t) {
            counts[t] += block_counts[static_cast<std::size_t>(b) * n_terms + t];
        }
    }
    return finalize_moments(sum, sumsq, cfg.shots, qpd.kappa, std::move(counts));
}

double empirical_overhead(const Qpd& qpd, const PureState& input,
                          const Observable& obs, const EstimatorConfig& cfg,
                          std::int64_t baseline_shots) {
    if (baseline_shots < 1) {
        throw std::invalid_argument("empirical_overhead: baseline_shots must be >= 1");
    }
    EstimateResult cut = estimate(qpd, input, obs, cfg);
    double base_sumsq = 0.0;
    for (std::int64_t s = 0; s < baseline_shots; ++s) {
        ShotRng rng(cfg.seed ^ 0xb5a5e1e5u, static_cast<std::uint64_t>(s));
        double v = born_sample(obs, input, rng);
        base_sumsq += v * v;
    }
    double base_m2 = base_sumsq / static_cast<double>(baseline_shots);
    if (base_m2 <= 0.0) {
        throw std::domain_error("empirical_overhead: uncut second moment vanishes");
    }
    return cut.second_moment / base_m2;
}

namespace reference {

EstimateResult estimate(const Qpd& qpd, const PureState& input,
                        const Observable& obs, const EstimatorConfig& cfg) {
    check_estimate_args(qpd, input, obs, cfg);
    double sum = 0.0, sumsq = 0.0;
    std::vector<std::int64_t> counts(qpd.terms.size(), 0);
    for (std::int64_t s = 0; s < cfg.shots; ++s) {
        ShotRng rng(cfg.seed, static_cast<std::uint64_t>(s));
        auto [term, sign] = sample_term(qpd, rng);
        double value = run_shot(qpd, term, input, obs, rng, cfg.mode);
        sum += value;
        sumsq += value * value;
        ++counts[term];
    }
    return finalize_moments(sum, sumsq, cfg.shots, qpd.kappa, std::move(counts));
}

}  // namespace reference

}  // namespace qcut
