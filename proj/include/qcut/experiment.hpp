#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcut/estimator.hpp"

namespace qcut {

// Fully resolved description of one command invocation. Every field that
// affects the output is echoed into the result record, so a record plus the
// binary reproduces itself.
struct ExperimentSpec {
    std::string command;  // overhead | verify | mub-check | estimate | sweep
    int n = 1;

    bool table = false;                         // overhead --table
    std::optional<double> robustness;           // overhead --robustness
    std::optional<std::vector<double>> schmidt; // raw list; renormalized + sorted
    std::string schmidt_name;                   // "", "maximal", "separable"
    bool baseline = false;                      // verify/estimate --baseline
    std::optional<int> streamlined_ne;          // verify/estimate --streamlined

    double tol = 1e-10;
    std::string input = "plus^n";
    std::string observable;  // Pauli letters; empty -> all Z
    std::int64_t shots = 100000;
    std::uint64_t seed = 0;
    std::string mode = "trajectory";
    int workers = 1;
    int grid = 9;

    std::string output;        // file path; empty writes to the console stream
    std::string format = "json";  // json | csv (table/sweep are always csv)
};

// Executes the command. Result records go to `spec.output` (resolved against
// the QCUT_OUTPUT_DIR environment variable when relative) or to `console`.
// Returns 0 on success, 1 on usage/configuration errors, 2 when a
// verification check fails its tolerance.
int run_experiment(const ExperimentSpec& spec, std::ostream& console);

// Helpers shared with tests.
PureState parse_input_state(const std::string& text, int n);
SchmidtVector resolve_schmidt(const ExperimentSpec& spec, int n_side);

}  // namespace qcut
