#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcut/estimator.hpp"

using namespace qcut;

namespace {

SchmidtVector random_schmidt(int n, std::uint64_t seed, double margin = 0.05) {
    double cap = std::pow(2.0, n) - 1.0 - margin;
    return SchmidtVector::from_unnormalized(n, oracle::random_schmidt_raw(n, seed, cap));
}

PureState plus_state(int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    return PureState{Vec::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)))};
}

// One-term decomposition built by hand (identity teleportation in basis 0).
Qpd single_term_qpd(int n) {
    Qpd qpd;
    qpd.n = n;
    qpd.mubs = std::make_shared<const MubFamily>(n);
    QpdTerm t;
    t.coefficient = 1.0;
    t.kind = TermKind::teleport_conjugated;
    t.basis_index = 0;
    t.alpha = SchmidtVector::maximal(n);
    qpd.terms.push_back(std::move(t));
    qpd.kappa = 1.0;
    qpd.sampling_prob = {1.0};
    qpd.signs = {1};
    return qpd;
}

}  // namespace

TEST_CASE("term sampling follows the quasiprobability weights") {
    Qpd single = single_term_qpd(1);
    for (std::uint64_t s = 0; s < 20; ++s) {
        ShotRng rng(3, s);
        auto [idx, sign] = sample_term(single, rng);
        CHECK(idx == 0);
        CHECK(sign == 1);
    }

    Qpd base = qpd_baseline(1);
    const int shots = 100000;
    std::vector<int> counts(base.terms.size(), 0);
    for (int s = 0; s < shots; ++s) {
        ShotRng rng(5, static_cast<std::uint64_t>(s));
        ++counts[sample_term(base, rng).first];
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double expected = base.sampling_prob[i];
        double sigma = std::sqrt(expected * (1 - expected) / shots);
        CHECK(std::abs(counts[i] / static_cast<double>(shots) - expected) < 3 * sigma);
    }

    Qpd nme = qpd_nme(2, random_schmidt(2, 42));
    std::vector<int> nme_counts(nme.terms.size(), 0);
    for (int s = 0; s < shots; ++s) {
        ShotRng rng(6, static_cast<std::uint64_t>(s));
        ++nme_counts[sample_term(nme, rng).first];
    }
    for (std::size_t i = 0; i < nme_counts.size(); ++i) {
        double expected = nme.sampling_prob[i];
        double sigma = std::sqrt(expected * (1 - expected) / shots);
        CHECK(std::abs(nme_counts[i] / static_cast<double>(shots) - expected) <
              5 * sigma + 1e-12);
    }
}

TEST_CASE("identity-like shots are deterministic") {
    Qpd single = single_term_qpd(1);
    Observable z = Observable::pauli("Z");
    PureState zero = PureState::basis(1, 0);
    for (std::uint64_t s = 0; s < 30; ++s) {
        ShotRng rng(7, s);
        CHECK(run_shot(single, 0, zero, z, rng) == single.kappa);
    }
}

TEST_CASE("per-shot outputs are exactly plus or minus kappa for Pauli observables") {
    Qpd qpd = qpd_nme(1, random_schmidt(1, 11));
    PureState input = plus_state(1);
    Observable x = Observable::pauli("X");
    for (std::uint64_t s = 0; s < 500; ++s) {
        ShotRng rng(13, s);
        auto [term, sign] = sample_term(qpd, rng);
        double v = run_shot(qpd, term, input, x, rng);
        CHECK((v == qpd.kappa || v == -qpd.kappa));
        (void)sign;
    }
}

TEST_CASE("estimator is unbiased on the baseline single-wire cut") {
    Qpd qpd = qpd_baseline(1);
    PureState input = plus_state(1);
    Observable x = Observable::pauli("X");
    EstimatorConfig cfg{100000, 21, SampleMode::trajectory, 1};
    EstimateResult res = estimate(qpd, input, x, cfg);
    CHECK(res.shots_used == cfg.shots);
    CHECK(std::abs(res.estimate - 1.0) <
          5.0 * qpd.kappa / std::sqrt(static_cast<double>(cfg.shots)));
    std::int64_t total = 0;
    for (std::int64_t c : res.per_term_shots) total += c;
    CHECK(total == cfg.shots);
}

TEST_CASE("maximally entangled resources estimate deterministic outcomes exactly") {
    Qpd qpd = qpd_nme(2, SchmidtVector::maximal(2));
    CHECK(qpd.kappa == doctest::Approx(1.0));
    PureState input = PureState::basis(2, 0);
    Observable zz = Observable::pauli("ZZ");
    EstimatorConfig cfg{2000, 23, SampleMode::trajectory, 1};
    EstimateResult res = estimate(qpd, input, zz, cfg);
    CHECK(res.estimate == doctest::Approx(1.0));
    CHECK(res.std_error == doctest::Approx(0.0));
}

TEST_CASE("worked single-wire NME estimate") {
    SchmidtVector alpha =
        SchmidtVector::from_coefficients(1, {std::sqrt(0.9), std::sqrt(0.1)});
    Qpd qpd = qpd_nme(1, alpha);
    CHECK(qpd.kappa == doctest::Approx(1.5).epsilon(1e-12));
    EstimatorConfig cfg{100000, 29, SampleMode::trajectory, 1};
    EstimateResult res = estimate(qpd, plus_state(1), Observable::pauli("X"), cfg);
    CHECK(std::abs(res.estimate - 1.0) <
          5.0 * qpd.kappa / std::sqrt(static_cast<double>(cfg.shots)));
}

TEST_CASE("results are identical for any worker count") {
    Qpd qpd = qpd_nme(2, random_schmidt(2, 31));
    PureState input = random_pure_state(2, 32);
    Observable obs = Observable::pauli("XZ");
    EstimatorConfig serial{100000, 37, SampleMode::trajectory, 1};
    EstimatorConfig parallel = serial;
    parallel.workers = 4;
    EstimateResult a = estimate(qpd, input, obs, serial);
    EstimateResult b = estimate(qpd, input, obs, parallel);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.second_moment == b.second_moment);
    CHECK(a.per_term_shots == b.per_term_shots);
}

TEST_CASE("prepared path agrees with the plain reference loop") {
    for (int n = 1; n <= 2; ++n) {
        Qpd qpd = qpd_nme(n, random_schmidt(n, 41 + static_cast<std::uint64_t>(n)));
        PureState input = random_pure_state(n, 43);
        Observable obs = Observable::pauli(n == 1 ? "X" : "ZX");
        EstimatorConfig cfg{20000, 47, SampleMode::trajectory, 1};
        EstimateResult fast = estimate(qpd, input, obs, cfg);
        EstimateResult ref = reference::estimate(qpd, input, obs, cfg);
        CHECK(fast.per_term_shots == ref.per_term_shots);
        CHECK(fast.estimate == doctest::Approx(ref.estimate).epsilon(1e-12));
        CHECK(fast.second_moment == doctest::Approx(ref.second_moment).epsilon(1e-12));
    }
}

TEST_CASE("trajectory and density modes agree statistically") {
    Qpd qpd = qpd_baseline(1);
    PureState input = plus_state(1);
    Observable x = Observable::pauli("X");
    EstimatorConfig traj{100000, 51, SampleMode::trajectory, 1};
    EstimatorConfig dens{100000, 53, SampleMode::density, 1};
    EstimateResult a = estimate(qpd, input, x, traj);
    EstimateResult b = estimate(qpd, input, x, dens);
    double combined = std::hypot(a.std_error, b.std_error);
    CHECK(std::abs(a.estimate - b.estimate) < 5 * combined);
}

TEST_CASE("estimator is unbiased across seeds, builders, and modes") {
    struct Config {
        int n;
        Qpd qpd;
    };
    std::vector<Config> configs;
    configs.push_back({1, qpd_baseline(1)});
    configs.push_back({1, qpd_nme(1, random_schmidt(1, 61))});
    configs.push_back({2, qpd_baseline(2)});
    configs.push_back({2, qpd_nme(2, random_schmidt(2, 62))});
    configs.push_back({2, qpd_streamlined(2, random_schmidt(1, 63))});

    const char* paulis[] = {"X", "Z", "XZ", "ZY", "YX"};
    int config_index = 0;
    for (const Config& c : configs) {
        PureState input = random_pure_state(c.n, 70 + static_cast<std::uint64_t>(config_index));
        std::string letters(paulis[config_index % 5]);
        letters.resize(static_cast<std::size_t>(c.n), 'Z');
        Observable obs = Observable::pauli(letters);
        double exact = expectation(obs, input);

        const int reps = 50;
        const std::int64_t shots = 10000;
        double mean_of_estimates = 0.0, var_acc = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            EstimatorConfig cfg{shots, static_cast<std::uint64_t>(rep), SampleMode::trajectory, 2};
            EstimateResult res = estimate(c.qpd, input, obs, cfg);
            mean_of_estimates += res.estimate;
            var_acc += res.std_error * res.std_error;
        }
        mean_of_estimates /= reps;
        double combined_se = std::sqrt(var_acc) / reps;
        CHECK(std::abs(mean_of_estimates - exact) < 5 * combined_se + 1e-12);
        ++config_index;
    }
}

TEST_CASE("empirical overhead reports the kappa-squared inflation") {
    Qpd single = single_term_qpd(1);
    PureState plus = plus_state(1);
    Observable x = Observable::pauli("X");
    EstimatorConfig cfg{50000, 81, SampleMode::trajectory, 1};
    CHECK(empirical_overhead(single, plus, x, cfg, 50000) == doctest::Approx(1.0));

    Qpd base = qpd_baseline(1);
    EstimatorConfig big{200000, 83, SampleMode::trajectory, 2};
    double ratio = empirical_overhead(base, plus, x, big, 50000);
    CHECK(std::abs(ratio - base.kappa * base.kappa) < 0.05 * base.kappa * base.kappa);

    // The variance inflation shrinks monotonically as entanglement grows.
    double previous = std::numeric_limits<double>::infinity();
    for (int g = 0; g <= 4; ++g) {
        double r = 1.0 * g / 4.0;
        Qpd qpd = qpd_nme(1, schmidt_from_robustness(1, r));
        EstimatorConfig small{20000, 85, SampleMode::trajectory, 1};
        double m2 = empirical_overhead(qpd, plus, x, small, 20000);
        CHECK(m2 < previous + 1e-9);
        previous = m2;
    }
}

TEST_CASE("argument validation") {
    Qpd qpd = qpd_baseline(1);
    EstimatorConfig cfg{0, 1, SampleMode::trajectory, 1};
    CHECK_THROWS_AS(estimate(qpd, plus_state(1), Observable::pauli("X"), cfg),
                    std::invalid_argument);
    EstimatorConfig ok{10, 1, SampleMode::trajectory, 1};
    CHECK_THROWS_AS(estimate(qpd, plus_state(2), Observable::pauli("XX"), ok),
                    std::invalid_argument);
}
