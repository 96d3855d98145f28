#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qcut/qpd.hpp"

namespace qcut {

enum class SampleMode { trajectory, density };

struct EstimatorConfig {
    std::int64_t shots = 100000;
    std::uint64_t seed = 0;
    SampleMode mode = SampleMode::trajectory;
    int workers = 1;
};

struct EstimateResult {
    double estimate = 0.0;
    double std_error = 0.0;
    double kappa = 0.0;
    double second_moment = 0.0;  // mean of squared per-shot values
    std::int64_t shots_used = 0;
    std::vector<std::int64_t> per_term_shots;
};

// Draws a term index with probability |c_i| / kappa; returns (index, sign).
std::pair<std::size_t, int> sample_term(const Qpd& qpd, ShotRng& rng);

// One Monte Carlo shot of term `term`: runs the term's trajectory rule (or
// applies its channel in density mode), measures the observable, and returns
// sign(c) * kappa * eigenvalue.
double run_shot(const Qpd& qpd, std::size_t term, const PureState& input,
                const Observable& obs, ShotRng& rng,
                SampleMode mode = SampleMode::trajectory);

// Full estimator of tr[O phi] through the decomposed identity channel.
// Shot i always consumes the random stream (seed, i), and partial sums are
// accumulated over fixed-size blocks merged in block order, so the result is
// bit-identical for any worker count.
EstimateResult estimate(const Qpd& qpd, const PureState& input,
                        const Observable& obs, const EstimatorConfig& cfg);

// Ratio of the estimator's per-shot second moment to the second moment of
// directly measuring the observable on the input (kappa^2 for an ideal
// decomposition of a Pauli measurement).
double empirical_overhead(const Qpd& qpd, const PureState& input,
                          const Observable& obs, const EstimatorConfig& cfg,
                          std::int64_t baseline_shots);

namespace reference {
// Plain sequential loop over sample_term + run_shot; shot values match the
// production estimator's exactly, only the summation order differs.
EstimateResult estimate(const Qpd& qpd, const PureState& input,
                        const Observable& obs, const EstimatorConfig& cfg);
}  // namespace reference

}  // namespace qcut
