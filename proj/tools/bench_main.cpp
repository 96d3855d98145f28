// Compares the OpenMP sampling and reconstruction kernels against their
// serial reference implementations, reporting wall times and checking that
// the results agree.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qcut/estimator.hpp"
#include "qcut/experiment.hpp"

using namespace qcut;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename F>
double timed(F&& f) {
    auto start = std::chrono::steady_clock::now();
    f();
    return seconds_since(start);
}

}  // namespace

int main(int argc, char** argv) {
    std::int64_t shots = (argc > 1) ? std::atoll(argv[1]) : 2000000;
    int threads = 4;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif

    SchmidtVector alpha = schmidt_from_robustness(2, 1.2);
    Qpd qpd = qpd_nme(2, alpha);
    PureState input = parse_input_state("random:7", 2);
    Observable obs = Observable::pauli("XZ");

    std::printf("estimator: n=2, kappa=%.6f, shots=%lld\n", qpd.kappa,
                static_cast<long long>(shots));

    EstimatorConfig serial_cfg{shots, 11, SampleMode::trajectory, 1};
    EstimatorConfig parallel_cfg{shots, 11, SampleMode::trajectory, threads};

    EstimateResult ref, fast_serial, fast_parallel;
    double t_ref = timed([&] { ref = reference::estimate(qpd, input, obs, serial_cfg); });
    double t_serial = timed([&] { fast_serial = estimate(qpd, input, obs, serial_cfg); });
    double t_parallel = timed([&] { fast_parallel = estimate(qpd, input, obs, parallel_cfg); });

    std::printf("  reference serial      %8.3f s  estimate % .6f\n", t_ref, ref.estimate);
    std::printf("  prepared serial       %8.3f s  estimate % .6f\n", t_serial,
                fast_serial.estimate);
    std::printf("  prepared %2d workers   %8.3f s  estimate % .6f  (speedup %.2fx)\n",
                threads, t_parallel, fast_parallel.estimate,
                t_serial / std::max(1e-9, t_parallel));

    bool identical = fast_serial.estimate == fast_parallel.estimate &&
                     fast_serial.per_term_shots == fast_parallel.per_term_shots;
    std::printf("  serial/parallel results identical: %s\n", identical ? "yes" : "NO");

    Qpd big = qpd_baseline(4);
    Mat a, b;
    double t_rec_ref = timed([&] { a = reference::reconstruct_superoperator(big); });
    double t_rec = timed([&] { b = reconstruct_superoperator(big); });
    std::printf("superoperator reconstruction: n=4, %zu terms\n", big.terms.size());
    std::printf("  reference serial      %8.3f s\n", t_rec_ref);
    std::printf("  parallel              %8.3f s  max deviation %.3e\n", t_rec,
                (a - b).cwiseAbs().maxCoeff());

    return identical ? 0 : 1;
}
