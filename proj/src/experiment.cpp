#include "qcut/experiment.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

using nlohmann::json;

namespace qcut {

namespace {

constexpr int kSchemaVersion = 1;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad number: " + item);
        values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("empty numeric list");
    return values;
}

json spec_to_json(const ExperimentSpec& spec) {
    json j{{"command", spec.command},
           {"n", spec.n},
           {"tol", spec.tol},
           {"input", spec.input},
           {"observable", spec.observable},
           {"shots", spec.shots},
           {"seed", spec.seed},
           {"mode", spec.mode},
           {"workers", spec.workers},
           {"grid", spec.grid},
           {"format", spec.format},
           {"table", spec.table},
           {"baseline", spec.baseline}};
    if (spec.robustness) j["robustness"] = *spec.robustness;
    if (spec.schmidt) j["schmidt"] = *spec.schmidt;
    if (!spec.schmidt_name.empty()) j["schmidt_name"] = spec.schmidt_name;
    if (spec.streamlined_ne) j["streamlined_ne"] = *spec.streamlined_ne;
    if (!spec.output.empty()) j["output"] = spec.output;
    return j;
}

class RecordSink {
public:
    RecordSink(const ExperimentSpec& spec, std::ostream& console) : console_(console) {
        if (!spec.output.empty()) {
            std::filesystem::path path(spec.output);
            if (path.is_relative()) {
                if (const char* dir = std::getenv("QCUT_OUTPUT_DIR")) {
                    path = std::filesystem::path(dir) / path;
                }
            }
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path.string());
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : console_; }

private:
    std::ostream& console_;
    std::ofstream file_;
};

void emit_json(const ExperimentSpec& spec, const json& result, std::ostream& out) {
    json record{{"schema_version", kSchemaVersion},
                {"command", spec.command},
                {"spec", spec_to_json(spec)},
                {"result", result}};
    out << record.dump(2) << "\n";
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Observable resolve_observable(const ExperimentSpec& spec) {
    std::string letters = spec.observable;
    if (letters.empty()) letters.assign(static_cast<std::size_t>(spec.n), 'Z');
    Observable o = Observable::pauli(letters);
    if (o.qubits() != spec.n) {
        throw std::invalid_argument("observable length does not match --n");
    }
    return o;
}

SampleMode resolve_mode(const ExperimentSpec& spec) {
    if (spec.mode == "trajectory") return SampleMode::trajectory;
    if (spec.mode == "density") return SampleMode::density;
    throw std::invalid_argument("mode must be trajectory or density");
}

enum class Builder { baseline, nme, streamlined };

Builder resolve_builder(const ExperimentSpec& spec) {
    if (spec.streamlined_ne) return Builder::streamlined;
    if (spec.baseline || (!spec.schmidt && spec.schmidt_name.empty())) {
        return Builder::baseline;
    }
    return Builder::nme;
}

Qpd build_qpd(const ExperimentSpec& spec) {
    switch (resolve_builder(spec)) {
        case Builder::baseline:
            return qpd_baseline(spec.n);
        case Builder::nme:
            return qpd_nme(spec.n, resolve_schmidt(spec, spec.n));
        case Builder::streamlined: {
            int ne = *spec.streamlined_ne;
            if (ne < 0 || ne >= spec.n) {
                throw std::invalid_argument("--streamlined must be in [0, n)");
            }
            return qpd_streamlined(spec.n, resolve_schmidt(spec, ne));
        }
    }
    throw std::logic_error("unreachable");
}

int run_overhead(const ExperimentSpec& spec, std::ostream& out) {
    if (spec.table) {
        out << "n,robustness,gamma_separable,gamma_nme\n";
        for (int n = 1; n <= 3; ++n) {
            const double r_max = std::pow(2.0, n) - 1.0;
            const double gamma_sep = std::pow(2.0, n + 1) - 1.0;
            for (int step = 0; step <= 4; ++step) {
                double r = r_max * static_cast<double>(step) / 4.0;
                out << n << ',' << fmt(r) << ',' << fmt(gamma_sep) << ','
                    << fmt(overhead_nme(n, r)) << "\n";
            }
        }
        return 0;
    }
    double r = 0.0;
    if (spec.robustness) {
        r = *spec.robustness;
    } else if (spec.schmidt || !spec.schmidt_name.empty()) {
        r = robustness_pure(resolve_schmidt(spec, spec.n));
    }
    json result{{"n", spec.n}, {"robustness", r}, {"gamma", overhead_nme(spec.n, r)}};
    emit_json(spec, result, out);
    return 0;
}

int run_verify(const ExperimentSpec& spec, std::ostream& out) {
    Qpd qpd = build_qpd(spec);
    VerifyReport report = verify_identity(qpd);
    bool ok = report.max_abs_error <= spec.tol;
    json result{{"n", qpd.n},
                {"kappa", qpd.kappa},
                {"terms", qpd.terms.size()},
                {"max_abs_error", report.max_abs_error},
                {"tol", spec.tol},
                {"status", ok ? "ok" : "fail"}};
    emit_json(spec, result, out);
    return ok ? 0 : 2;
}

int run_mub_check(const ExperimentSpec& spec, std::ostream& out) {
    if (spec.n < 1 || spec.n > 6) {
        throw std::invalid_argument("mub-check: n must be in [1, 6]");
    }
    MubFamily mubs(spec.n);
    const gf::Field& field = mubs.field();
    const std::uint32_t d = field.size();
    bool all_ok = true;
    auto report = [&](const std::string& name, double defect, double tol) {
        bool ok = defect <= tol;
        all_ok = all_ok && ok;
        out << (ok ? "PASS " : "FAIL ") << name << " (defect " << fmt(defect)
            << ", tol " << fmt(tol) << ")\n";
    };

    double unitarity = 0.0;
    for (const Unitary& u : mubs.unitaries()) {
        unitarity = std::max(unitarity, u.unitarity_error());
    }
    report("basis transforms unitary", unitarity, 1e-10);
    report("all bases pairwise unbiased", unbiasedness_defect(mubs), 1e-10);

    double commutation = 0.0;
    for (std::uint32_t a = 0; a < d; ++a) {
        for (std::uint32_t b = 0; b < d; ++b) {
            Mat lhs = phase_op(field, a).m * shift_op(field, b).m;
            Mat rhs = static_cast<double>(gf::Field::sign_exp(field.mul(a, b))) *
                      shift_op(field, b).m * phase_op(field, a).m;
            commutation = std::max(commutation, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }
    report("phase/shift commutation relation", commutation, 1e-12);

    double identity_s = 0.0;
    for (std::uint32_t j = 0; j < d; ++j) {
        identity_s = std::max(identity_s,
                              (s_operator(field, j, 0).m -
                               Mat::Identity(d, d)).cwiseAbs().maxCoeff());
    }
    report("S_{j,0} is the identity", identity_s, 1e-12);

    double lemma = 0.0;
    for (std::uint32_t j = 0; j < d; ++j) {
        const Mat& u = mubs.unitary(j).m;
        for (std::uint32_t k = 0; k < d; ++k) {
            Mat lhs = u * phase_op(field, k).m * u.adjoint();
            lemma = std::max(lemma,
                             (lhs - s_operator(field, j, k).m).cwiseAbs().maxCoeff());
        }
    }
    report("conjugated phase operators match S_{j,k}", lemma, 1e-10);

    double eigform = 0.0;
    for (std::uint32_t j = 0; j < d; ++j) {
        const Mat& u = mubs.unitary(j).m;
        for (std::uint32_t k = 0; k < d; ++k) {
            Mat sum = Mat::Zero(d, d);
            for (std::uint32_t l = 0; l < d; ++l) {
                sum += static_cast<double>(gf::Field::sign_exp(field.mul(l, k))) *
                       u.col(l) * u.col(l).adjoint();
            }
            eigform = std::max(eigform,
                               (sum - s_operator(field, j, k).m).cwiseAbs().maxCoeff());
        }
    }
    report("S_{j,k} eigen-decomposition over basis j", eigform, 1e-10);

    // Dephasing: averaging S_{j,k} rho S_{j,k} over j equals a computational
    // measurement followed by a shifted re-preparation, for k != 0.
    PureState probe = random_pure_state(spec.n, spec.seed);
    DensityOperator rho = DensityOperator::from_pure(probe);
    double dephasing = 0.0;
    for (std::uint32_t k = 1; k < d; ++k) {
        Mat avg = Mat::Zero(d, d);
        for (std::uint32_t j = 0; j < d; ++j) {
            const Mat s = s_operator(field, j, k).m;
            avg += s * rho.m * s;
        }
        avg /= static_cast<double>(d);
        Mat expected = Mat::Zero(d, d);
        for (std::uint32_t l = 0; l < d; ++l) {
            expected(l ^ k, l ^ k) += rho.m(l, l);
        }
        dephasing = std::max(dephasing, (avg - expected).cwiseAbs().maxCoeff());
    }
    report("uniform S_{j,k} average dephases and shifts", dephasing, 1e-10);

    double pauli_phase = 0.0;
    for (std::uint32_t a = 0; a < d; ++a) {
        std::uint32_t mask = field.phase_pauli_mask(a);
        std::string letters(static_cast<std::size_t>(spec.n), 'I');
        for (int q = 0; q < spec.n; ++q) {
            if ((mask >> (spec.n - 1 - q)) & 1u) letters[static_cast<std::size_t>(q)] = 'Z';
        }
        pauli_phase = std::max(pauli_phase,
                               (phase_op(field, a).m -
                                PauliString{letters}.matrix()).cwiseAbs().maxCoeff());
    }
    report("phase operators factor into Pauli Z products", pauli_phase, 1e-12);

    return all_ok ? 0 : 2;
}

int run_estimate(const ExperimentSpec& spec, std::ostream& out) {
    Qpd qpd = build_qpd(spec);
    PureState input = parse_input_state(spec.input, spec.n);
    Observable obs = resolve_observable(spec);
    EstimatorConfig cfg{spec.shots, spec.seed, resolve_mode(spec), spec.workers};
    EstimateResult res = estimate(qpd, input, obs, cfg);
    double truth = expectation(obs, input);
    if (spec.format == "csv") {
        out << "estimate,std_error,kappa,second_moment,shots,true_value,abs_error\n"
            << fmt(res.estimate) << ',' << fmt(res.std_error) << ',' << fmt(res.kappa)
            << ',' << fmt(res.second_moment) << ',' << res.shots_used << ','
            << fmt(truth) << ',' << fmt(std::abs(res.estimate - truth)) << "\n";
        return 0;
    }
    json result{{"estimate", res.estimate},
                {"std_error", res.std_error},
                {"kappa", res.kappa},
                {"kappa_squared", res.kappa * res.kappa},
                {"second_moment", res.second_moment},
                {"shots", res.shots_used},
                {"per_term_shots", res.per_term_shots},
                {"true_value", truth},
                {"abs_error", std::abs(res.estimate - truth)}};
    emit_json(spec, result, out);
    return 0;
}

int run_sweep(const ExperimentSpec& spec, std::ostream& out) {
    if (spec.grid < 2 || spec.grid > 64) {
        throw std::invalid_argument("sweep: grid size must be in [2, 64]");
    }
    PureState input = parse_input_state(spec.input, spec.n);
    Observable obs = resolve_observable(spec);
    const double truth = expectation(obs, input);
    const double r_max = std::pow(2.0, spec.n) - 1.0;
    auto mubs = std::make_shared<const MubFamily>(spec.n);

    out << "robustness,kappa_theory,kappa_empirical,estimate,true_value,abs_error\n";
    for (int g = 0; g < spec.grid; ++g) {
        double r = r_max * static_cast<double>(g) / static_cast<double>(spec.grid - 1);
        SchmidtVector alpha = schmidt_from_robustness(spec.n, r);
        Qpd qpd = qpd_nme(mubs, alpha);
        EstimatorConfig cfg{spec.shots, spec.seed + static_cast<std::uint64_t>(g),
                            resolve_mode(spec), spec.workers};
        EstimateResult res = estimate(qpd, input, obs, cfg);
        double kappa_emp = std::sqrt(std::max(0.0, res.second_moment));
        out << fmt(robustness_pure(alpha)) << ',' << fmt(qpd.kappa) << ','
            << fmt(kappa_emp) << ',' << fmt(res.estimate) << ',' << fmt(truth)
            << ',' << fmt(std::abs(res.estimate - truth)) << "\n";
    }
    return 0;
}

}  // namespace

PureState parse_input_state(const std::string& text, int n) {
    if (text == "plus^n" || text == "plus") {
        const Eigen::Index d = Eigen::Index{1} << n;
        Vec amp = Vec::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
        return PureState{std::move(amp)};
    }
    if (text == "zero^n" || text == "zero") {
        return PureState::basis(n, 0);
    }
    if (text.rfind("random:", 0) == 0) {
        return random_pure_state(n, std::stoull(text.substr(7)));
    }
    std::vector<double> values = parse_double_list(text);
    if (values.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("input amplitude list must have 2^n entries");
    }
    Vec amp(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) amp[static_cast<Eigen::Index>(i)] = values[i];
    double norm = amp.norm();
    if (norm <= 0.0) throw std::invalid_argument("input state must be nonzero");
    amp /= norm;
    return PureState{std::move(amp)};
}

SchmidtVector resolve_schmidt(const ExperimentSpec& spec, int n_side) {
    if (spec.schmidt_name == "maximal") return SchmidtVector::maximal(n_side);
    if (spec.schmidt_name == "separable") return SchmidtVector::separable(n_side);
    if (!spec.schmidt_name.empty()) {
        throw std::invalid_argument("schmidt shorthand must be maximal or separable");
    }
    if (!spec.schmidt) throw std::invalid_argument("missing --schmidt");
    if (spec.schmidt->size() != (std::size_t{1} << n_side)) {
        throw std::invalid_argument("schmidt list must have 2^n entries");
    }
    return SchmidtVector::from_unnormalized(n_side, *spec.schmidt);
}

int run_experiment(const ExperimentSpec& spec, std::ostream& console) {
    try {
        RecordSink sink(spec, console);
        std::ostream& out = sink.stream();
        if (spec.command == "overhead") return run_overhead(spec, out);
        if (spec.command == "verify") return run_verify(spec, out);
        if (spec.command == "mub-check") return run_mub_check(spec, out);
        if (spec.command == "estimate") return run_estimate(spec, out);
        if (spec.command == "sweep") return run_sweep(spec, out);
        throw std::invalid_argument("unknown command: " + spec.command);
    } catch (const std::exception& e) {
        console << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace qcut
