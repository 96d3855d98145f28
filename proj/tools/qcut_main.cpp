#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "qcut/experiment.hpp"

namespace {

void add_common(CLI::App* cmd, qcut::ExperimentSpec* spec) {
    cmd->add_option("--n", spec->n, "number of cut wires");
    cmd->add_option("--seed", spec->seed, "random seed");
    cmd->add_option("--output", spec->output,
                    "output file (relative paths resolve against QCUT_OUTPUT_DIR)");
}

void add_schmidt(CLI::App* cmd, qcut::ExperimentSpec* spec, std::string* raw) {
    cmd->add_option("--schmidt", *raw,
                    "Schmidt coefficients: comma list (renormalized) or "
                    "'maximal'/'separable'");
}

void resolve_schmidt_text(const std::string& raw, qcut::ExperimentSpec* spec) {
    if (raw.empty()) return;
    if (raw == "maximal" || raw == "separable") {
        spec->schmidt_name = raw;
        return;
    }
    std::vector<double> values;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    spec->schmidt = std::move(values);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint wire cutting with non-maximally entangled resource states"};
    app.require_subcommand(1);

    qcut::ExperimentSpec spec;
    std::string schmidt_raw;

    CLI::App* overhead = app.add_subcommand("overhead", "optimal sampling overheads");
    add_common(overhead, &spec);
    add_schmidt(overhead, &spec, &schmidt_raw);
    double robustness = 0.0;
    CLI::Option* robustness_opt =
        overhead->add_option("--robustness", robustness, "resource robustness R");
    overhead->add_flag("--table", spec.table, "emit the overhead table as CSV");

    CLI::App* verify = app.add_subcommand("verify", "check a QPD reconstructs the identity");
    add_common(verify, &spec);
    add_schmidt(verify, &spec, &schmidt_raw);
    verify->add_flag("--baseline", spec.baseline, "use the decomposition without entanglement");
    int streamlined_ne = 0;
    CLI::Option* streamlined_opt =
        verify->add_option("--streamlined", streamlined_ne,
                           "embed a 2^n_e-coefficient resource into an n-wire cut");
    verify->add_option("--tol", spec.tol, "acceptance tolerance");

    CLI::App* mub = app.add_subcommand("mub-check", "audit the mutually unbiased bases");
    add_common(mub, &spec);

    CLI::App* estimate = app.add_subcommand("estimate", "Monte Carlo expectation estimate");
    add_common(estimate, &spec);
    add_schmidt(estimate, &spec, &schmidt_raw);
    estimate->add_flag("--baseline", spec.baseline, "use the decomposition without entanglement");
    CLI::Option* estimate_streamlined_opt =
        estimate->add_option("--streamlined", streamlined_ne, "resource size n_e");
    estimate->add_option("--input", spec.input,
                         "input state: plus^n, zero^n, random:<seed>, or amplitude list");
    estimate->add_option("--observable", spec.observable, "Pauli string, e.g. ZZ");
    estimate->add_option("--shots", spec.shots, "number of shots");
    estimate->add_option("--mode", spec.mode, "trajectory or density");
    estimate->add_option("--workers", spec.workers, "parallel sampling workers");

    CLI::App* sweep = app.add_subcommand("sweep", "overhead and accuracy over a robustness grid");
    add_common(sweep, &spec);
    sweep->add_option("--grid", spec.grid, "number of grid points (<= 64)");
    sweep->add_option("--input", spec.input, "input state spec");
    sweep->add_option("--observable", spec.observable, "Pauli string");
    sweep->add_option("--shots", spec.shots, "shots per grid point");
    sweep->add_option("--mode", spec.mode, "trajectory or density");
    sweep->add_option("--workers", spec.workers, "parallel sampling workers");

    CLI11_PARSE(app, argc, argv);

    try {
        resolve_schmidt_text(schmidt_raw, &spec);
    } catch (const std::exception& e) {
        std::cerr << "error: bad --schmidt value: " << e.what() << "\n";
        return 1;
    }
    if (robustness_opt->count() > 0) spec.robustness = robustness;
    if (streamlined_opt->count() > 0 || estimate_streamlined_opt->count() > 0) {
        spec.streamlined_ne = streamlined_ne;
    }
    spec.command = app.get_subcommands().front()->get_name();

    return qcut::run_experiment(spec, std::cout);
}
