// Copyright 2026 The qdm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Commands shared by the qdm CLI and its tests. Every command produces one
// QueryResult; the CLI only parses flags and prints.

#ifndef QDM_IO_COMMANDS_HPP
#define QDM_IO_COMMANDS_HPP

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdm/io/problem_file.hpp"

namespace qdm::io {

/// Process exit codes.
enum ExitCode : int { kSuccess = 0, kNegative = 1, kBoundary = 2, kInputError = 3, kStall = 4 };

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::SolverStall: return kStall;
    case ErrorKind::InconsistentAssessment:
    case ErrorKind::EmptyCredalSet:
    case ErrorKind::ZeroProbabilityEvent:
    case ErrorKind::ReducedInconsistent: return kNegative;
    default: return kInputError;
    }
}

struct QueryResult {
    std::string command;
    std::string status;
    int exit_code = kSuccess;
    std::uint64_t seed = 0;
    Json values = Json::object();
    Json certificate = Json::object();
    std::string message;

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["status"] = status;
        j["exit_code"] = exit_code;
        j["seed"] = seed;
        j["values"] = values;
        j["certificate"] = certificate;
        if (!message.empty()) j["message"] = message;
        return j;
    }

    static QueryResult from_json(const Json& j) {
        QueryResult r;
        r.command = j.at("command").get<std::string>();
        r.status = j.at("status").get<std::string>();
        r.exit_code = j.at("exit_code").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.values = j.at("values");
        r.certificate = j.at("certificate");
        if (j.contains("message")) r.message = j.at("message").get<std::string>();
        return r;
    }

    /// One JSON record on a single line. Doubles are printed with enough
    /// digits to round-trip exactly.
    std::string machine() const { return to_json().dump(); }

    std::string human() const;
};

namespace detail {

inline std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

inline bool is_complex_pair(const Json& v) {
    return v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
}

inline bool is_matrix(const Json& v) {
    return v.is_array() && !v.empty() && v[0].is_array() && !v[0].empty() && is_complex_pair(v[0][0]);
}

inline std::string format_complex(const Json& c) {
    const double re = c[0].get<double>(), im = c[1].get<double>();
    auto clean = [](double x) { return std::abs(x) < 5e-13 ? 0.0 : x; };
    std::ostringstream os;
    os << std::setprecision(6) << clean(re);
    if (clean(im) != 0.0) os << (im < 0 ? "-" : "+") << std::setprecision(6) << std::abs(im) << "i";
    return os.str();
}

inline void render(std::ostringstream& os, const std::string& key, const Json& v, int indent) {
    const std::string pad(indent, ' ');
    if (is_matrix(v)) {
        os << pad << key << ":\n";
        for (const auto& row : v) {
            os << pad << "  [";
            for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << std::setw(10) << format_complex(row[k]);
            os << " ]\n";
        }
    } else if (v.is_object()) {
        os << pad << key << ":\n";
        for (const auto& [k, x] : v.items()) render(os, k, x, indent + 2);
    } else if (v.is_array() && !v.empty() && v[0].is_object()) {
        os << pad << key << ":\n";
        for (std::size_t k = 0; k < v.size(); ++k) render(os, "[" + std::to_string(k) + "]", v[k], indent + 2);
    } else if (v.is_number_float()) {
        os << pad << key << ": " << format_number(v.get<double>()) << "\n";
    } else if (v.is_array()) {
        os << pad << key << ": [";
        for (std::size_t k = 0; k < v.size(); ++k)
            os << (k ? ", " : "") << (v[k].is_number_float() ? format_number(v[k].get<double>()) : v[k].dump());
        os << "]\n";
    } else {
        os << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
}

} // namespace detail

inline std::string QueryResult::human() const {
    std::ostringstream os;
    os << command << ": " << status << "\n";
    if (!message.empty()) os << "  " << message << "\n";
    for (const auto& [k, v] : values.items()) detail::render(os, k, v, 2);
    if (!certificate.empty()) detail::render(os, "certificate", certificate, 2);
    return os.str();
}

/// Command-line arguments after flag parsing.
struct CommandArgs {
    std::string problem;
    /// Named operands: assessment, target, rho, event, samples.
    std::map<std::string, std::string> options;
    std::uint64_t seed = 0;
    std::optional<double> eps;
    std::vector<std::pair<std::string, double>> tolerances;

    std::string option(const std::string& key, const std::string& fallback = "") const {
        auto it = options.find(key);
        return it == options.end() ? fallback : it->second;
    }

    std::string require(const std::string& key) const {
        auto it = options.find(key);
        if (it == options.end() || it->second.empty())
            throw Error(ErrorKind::InvalidArgument, "missing --" + key);
        return it->second;
    }
};

/// Applies --eps (the strict-cone margin) and --tol overrides, which take
/// precedence over a problem file's config block.
inline void apply_overrides(Tolerances& tol, const CommandArgs& args) {
    if (args.eps) {
        if (!(*args.eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "--eps must be positive");
        tol.margin = *args.eps;
    }
    for (const auto& [key, value] : args.tolerances)
        if (!tol.set(key, value)) throw Error(ErrorKind::InvalidArgument, "unknown tolerance '" + key + "'");
}

inline Json certificate_to_json(const Certificate& c) {
    Json j;
    j["status"] = to_string(c.status);
    j["objective"] = c.objective_value;
    if (std::isfinite(c.lower_bound)) j["lower_bound"] = c.lower_bound;
    if (std::isfinite(c.upper_bound)) j["upper_bound"] = c.upper_bound;
    j["iterations"] = c.iterations;
    j["converged"] = c.solver_converged;
    if (!c.coefficients.empty()) j["coefficients"] = c.coefficients;
    if (c.density) j["density"] = matrix_to_json(c.density->op().matrix());
    return j;
}

/// The two-spin-1 running example on C^9. Basis |l,k>, l,k in {-1,0,1},
/// stored at index 3(l+1) + (k+1).
struct RunningExample {
    static int index(int l, int k) { return 3 * (l + 1) + (k + 1); }
    static Ket ket(int l, int k) { return Ket::basis(9, index(l, k)); }

    /// (|-1,1> - |0,0> + |1,1>) / sqrt 3
    static Ket psi() { return (ket(-1, 1) - ket(0, 0) + ket(1, 1)).normalized(); }

    static DensityOperator rho_star() { return DensityOperator::pure(psi()); }

    /// (1/2)(|-1,1> - |0,0>)(<-1,1| - <0,0|)
    static HermitianOperator rho_v() { return (ket(-1, 1) - ket(0, 0)).outer() / 2.0; }

    /// (1/2)|-1,1><-1,1| + (1/2)|0,0><0,0|
    static HermitianOperator rho_s() { return (ket(-1, 1).outer() + ket(0, 0).outer()) / 2.0; }

    /// Fidelity model: tr(rho |psi><psi|) >= 1 - eta. Its credal set shrinks
    /// to {rho*} as eta -> 0.
    static HermitianOperator fidelity_generator(double eta) {
        return psi().outer() - (1.0 - eta) * HermitianOperator::identity(9);
    }

    static constexpr double kFidelityEta = 1e-3;

    /// Box model of half-width eta around tr(rho* .) on the canonical basis.
    static constexpr double kBoxEta = 1e-4;

    static ProblemFile problem() {
        ProblemFile pf;
        pf.dim = 9;
        pf.operators.emplace("rhoStar", rho_star().op());
        pf.operators.emplace("A", ket(-1, 1).outer());
        pf.operators.emplace("G", fidelity_generator(kFidelityEta));
        pf.subspaces["V"] = {ket(-1, 1), ket(0, 0), ket(1, -1)};
        pf.subspaces["V1"] = {ket(-1, 1)};
        pf.subspaces["V2"] = {ket(0, 0)};
        pf.subspaces["V3"] = {ket(1, -1)};
        pf.assessments["fidelity"] = {"G"};
        pf.densities.insert("rhoStar");
        return pf;
    }
};

namespace detail {

inline double max_entry_error(const HermitianOperator& a, const HermitianOperator& b) {
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

struct CheckList {
    Json rows = Json::array();
    bool all = true;

    void add(const std::string& name, double expected, double observed, double tolerance) {
        const double err = std::abs(expected - observed);
        push(name, expected, observed, err, tolerance);
    }
    void add_error(const std::string& name, double err, double tolerance) { push(name, 0.0, err, err, tolerance); }

private:
    void push(const std::string& name, double expected, double observed, double err, double tolerance) {
        const bool pass = err <= tolerance;
        all = all && pass;
        Json r;
        r["check"] = name;
        r["expected"] = expected;
        r["observed"] = observed;
        r["error"] = err;
        r["tolerance"] = tolerance;
        r["pass"] = pass;
        rows.push_back(std::move(r));
    }
};

inline QueryResult reproduce_paper(const Tolerances& tol) {
    using RE = RunningExample;
    CheckList checks;
    const ProblemFile pf = RE::problem();
    const ConditioningEvent v = pf.event("V");
    const ConditioningEvent family = pf.event("V1,V2,V3");
    const DensityOperator rho = RE::rho_star();

    // Projector onto V and the indifferent complement.
    const HermitianOperator pv = projector_of(pf.subspace("V"));
    const HermitianOperator pv_listed = RE::ket(-1, 1).outer() + RE::ket(0, 0).outer() + RE::ket(1, -1).outer();
    checks.add_error("projector P_V", max_entry_error(pv, pv_listed), tol.reconstruction);
    const HermitianOperator off_v = RE::ket(1, 1).outer() - RE::ket(-1, 0).outer();
    checks.add_error("measurement supported on V-perp is indifferent",
                     build_projection(v, tol).apply(off_v).operator_norm(), tol.indifference);

    // Lueders updates.
    checks.add_error("rho_V = update(rho*, V)", max_entry_error(update_density(rho, v, tol).op(), RE::rho_v()), 1e-9);
    checks.add_error("rho_S = update(rho*, {V1,V2,V3})",
                     max_entry_error(update_density(rho, family, tol).op(), RE::rho_s()), 1e-9);

    // Law of total probability.
    const auto terms = total_probability_decomposition(rho, family, tol);
    checks.add("LTP branch count", 2.0, static_cast<double>(terms.size()), 0.0);
    HermitianOperator mix = HermitianOperator::zero(9);
    for (const auto& t : terms) {
        checks.add("LTP weight of V" + std::to_string(t.subspace + 1), 0.5, t.weight, 1e-9);
        mix += t.weight * t.density.op();
    }
    checks.add_error("LTP mixture = rho_S", max_entry_error(mix, RE::rho_s()), 1e-9);

    // A linear prevision determines its density.
    const auto values = linear_prevision_values(rho, canonical_hermitian_basis(9));
    checks.add_error("density of the linear prevision tr(rho* .)",
                     max_entry_error(density_of_linear_prevision(values, tol).op(), rho.op()), 1e-9);

    // The same updates through sets of desirable measurements, using a
    // near-linear model around rho*.
    const NaturalExtensionModel model(near_linear_assessment(rho, RE::kBoxEta), tol);
    const HermitianOperator a = pf.op("A");
    const double model_tol = 1e-3;
    const PrevisionResult pa = lower_prevision(model, a, false);
    checks.add("lower prevision of A", 1.0 / 3.0, pa.lower, model_tol);
    checks.add("upper prevision of A", 1.0 / 3.0, pa.upper, model_tol);
    const ConditionalPrevision cv = update_prevision(model, v, a, false);
    checks.add("lower prevision of A given V", 0.5, cv.lower, model_tol);
    checks.add("upper prevision of A given V", 0.5, cv.upper, model_tol);
    checks.add_error("conditional witness given V is rho_V", max_entry_error(*cv.lower_witness, RE::rho_v()),
                     model_tol);
    const ConditionalPrevision cs = update_prevision(model, family, a, false);
    checks.add("lower prevision of A given {V1,V2,V3}", 0.5, cs.lower, model_tol);
    checks.add("upper prevision of A given {V1,V2,V3}", 0.5, cs.upper, model_tol);

    // A - alpha I is desirable after learning V exactly when alpha < 1/2.
    const UpdatedModel updated(model, v);
    const HermitianOperator id = HermitianOperator::identity(9);
    const bool below = updated.member(a - (0.5 - 1e-2) * id).status == Membership::Member;
    const bool above = updated.member(a - (0.5 + 1e-2) * id).status == Membership::Nonmember;
    checks.add("A - 0.49 I desirable given V", 1.0, below ? 1.0 : 0.0, 0.0);
    checks.add("A - 0.51 I not desirable given V", 1.0, above ? 1.0 : 0.0, 0.0);

    QueryResult r;
    r.values["checks"] = checks.rows;
    r.status = checks.all ? "pass" : "fail";
    r.exit_code = checks.all ? kSuccess : kNegative;
    return r;
}

inline int verdict_exit(const std::string& status) {
    if (status == "boundary") return kBoundary;
    return kSuccess;
}

} // namespace detail

/// Runs a command against an already loaded problem.
inline QueryResult run_query(const std::string& command, const ProblemFile& pf, const CommandArgs& args) {
    QueryResult r;
    const Tolerances& tol = pf.tolerances;

    if (command == "check-consistency") {
        const Assessment a = pf.assessment(args.require("assessment"));
        const ConsistencyResult c = check_consistency(a, tol);
        r.status = to_string(c.status);
        r.exit_code = c.status == Consistency::Consistent    ? kSuccess
                      : c.status == Consistency::Inconsistent ? kNegative
                                                              : kBoundary;
        r.values["generators"] = static_cast<int>(a.generators().size());
        r.certificate = certificate_to_json(c.certificate);
        const int samples = std::stoi(args.option("samples", "0"));
        if (samples > 0 && c.status == Consistency::Consistent) {
            const CoherenceReport rep = check_coherence_axioms(NaturalExtensionModel(a, tol), samples, args.seed);
            r.values["coherence_checks"] = rep.checks;
            r.values["coherence_boundary"] = rep.boundary;
            r.values["coherence_violations"] = static_cast<int>(rep.violations.size());
            if (!rep.ok()) {
                r.status = "incoherent";
                r.exit_code = kNegative;
            }
        }
    } else if (command == "member") {
        const NaturalExtensionModel model(pf.assessment(args.require("assessment")), tol);
        const MembershipResult m = model.member(pf.op(args.require("target")));
        r.status = to_string(m.status);
        r.exit_code = m.status == Membership::Member ? kSuccess : m.status == Membership::Nonmember ? kNegative : kBoundary;
        r.values["branch"] = to_string(m.branch);
        r.values["background_margin"] = m.background_margin;
        r.certificate = certificate_to_json(m.certificate);
    } else if (command == "lower-prevision") {
        const NaturalExtensionModel model(pf.assessment(args.require("assessment")), tol);
        const bool cross = args.option("cross-check", "1") != "0";
        const PrevisionResult p = lower_prevision(model, pf.op(args.require("target")), cross);
        r.status = to_string(p.status);
        r.exit_code = detail::verdict_exit(r.status);
        r.values["lower"] = p.lower;
        r.values["upper"] = p.upper;
        if (cross) {
            r.values["lower_by_bisection"] = p.lower_by_bisection;
            r.values["upper_by_bisection"] = p.upper_by_bisection;
        }
        r.values["lower_witness"] = matrix_to_json(p.lower_witness.op().matrix());
        r.values["upper_witness"] = matrix_to_json(p.upper_witness.op().matrix());
    } else if (command == "condition") {
        const NaturalExtensionModel model(pf.assessment(args.require("assessment")), tol);
        const bool cross = args.option("cross-check", "1") != "0";
        const ConditionalPrevision c =
            update_prevision(model, pf.event(args.require("event")), pf.op(args.require("target")), cross);
        r.status = to_string(c.status);
        r.exit_code = detail::verdict_exit(r.status);
        r.values["lower"] = c.lower;
        r.values["upper"] = c.upper;
        r.values["event_lower"] = c.event_lower;
        r.values["event_upper"] = c.event_upper;
        if (cross) {
            r.values["lower_by_desirability"] = c.lower_by_desirability;
            r.values["upper_by_desirability"] = c.upper_by_desirability;
        }
        if (c.linear_value) r.values["linear_value"] = *c.linear_value;
        if (c.lower_witness) r.values["lower_witness"] = matrix_to_json(c.lower_witness->matrix());
    } else if (command == "update-density") {
        const DensityOperator rho = update_density(pf.density(args.require("rho")), pf.event(args.require("event")), tol);
        r.status = "ok";
        r.values["density"] = matrix_to_json(rho.op().matrix());
    } else if (command == "ltp") {
        const DensityOperator rho = pf.density(args.require("rho"));
        const ConditioningEvent event = pf.event(args.require("event"));
        const auto terms = total_probability_decomposition(rho, event, tol);
        HermitianOperator mix = HermitianOperator::zero(pf.dim);
        Json branches = Json::array();
        for (const auto& t : terms) {
            Json b;
            b["subspace"] = t.subspace;
            b["weight"] = t.weight;
            b["density"] = matrix_to_json(t.density.op().matrix());
            branches.push_back(std::move(b));
            mix += t.weight * t.density.op();
        }
        const double err = detail::max_entry_error(mix, update_density(rho, event, tol).op());
        r.status = err <= tol.reconstruction ? "ok" : "mismatch";
        r.exit_code = err <= tol.reconstruction ? kSuccess : kNegative;
        r.values["branches"] = branches;
        r.values["mixture"] = matrix_to_json(mix.matrix());
        r.values["mixture_error"] = err;
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
    }
    return r;
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"check-consistency", "member", "lower-prevision", "condition",
                                                   "update-density",    "ltp",    "reproduce-paper"};
    return names;
}

/// Loads the problem (if any), runs the command and turns library errors
/// into results with the matching exit code. Never throws.
inline QueryResult run_command(const std::string& command, const CommandArgs& args) {
    QueryResult r;
    try {
        if (command == "reproduce-paper") {
            Tolerances tol;
            apply_overrides(tol, args);
            r = detail::reproduce_paper(tol);
        } else {
            if (args.problem.empty()) throw Error(ErrorKind::InvalidArgument, "missing --problem");
            Tolerances base;
            apply_overrides(base, args);
            ProblemFile pf = load_problem(args.problem, base);
            apply_overrides(pf.tolerances, args);
            r = run_query(command, pf, args);
        }
    } catch (const Error& e) {
        r = QueryResult{};
        r.status = "error";
        r.exit_code = exit_code_for(e.kind());
        r.values["error"] = to_string(e.kind());
        r.message = e.what();
    } catch (const std::exception& e) {
        r = QueryResult{};
        r.status = "error";
        r.exit_code = kInputError;
        r.values["error"] = "InvalidArgument";
        r.message = e.what();
    }
    r.command = command;
    r.seed = args.seed;
    return r;
}

} // namespace qdm::io

#endif // QDM_IO_COMMANDS_HPP
