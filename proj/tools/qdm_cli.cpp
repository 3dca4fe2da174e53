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

// qdm: command-line front end. Exit codes: 0 success, 1 negative answer,
// 2 boundary, 3 input error, 4 solver stall.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdm/io/commands.hpp"

namespace {

struct Flags {
    std::string problem;
    std::uint64_t seed = 0;
    double eps = 0.0;
    std::vector<std::string> tol;
    std::string format = "human";
    std::string assessment;
    std::string target;
    std::string rho;
    std::string event;
    int samples = 0;
    bool no_cross_check = false;
};

qdm::io::CommandArgs to_args(const Flags& f, const CLI::App& app) {
    qdm::io::CommandArgs a;
    a.problem = f.problem;
    a.seed = f.seed;
    if (app.count("--eps") > 0) a.eps = f.eps;
    for (const auto& kv : f.tol) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw qdm::Error(qdm::ErrorKind::InvalidArgument, "--tol expects key=value");
        try {
            a.tolerances.emplace_back(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
        } catch (const std::logic_error&) {
            throw qdm::Error(qdm::ErrorKind::InvalidArgument, "--tol value is not a number: " + kv);
        }
    }
    auto put = [&](const char* key, const std::string& v) {
        if (!v.empty()) a.options[key] = v;
    };
    put("assessment", f.assessment);
    put("target", f.target);
    put("rho", f.rho);
    put("event", f.event);
    if (f.samples > 0) a.options["samples"] = std::to_string(f.samples);
    if (f.no_cross_check) a.options["cross-check"] = "0";
    return a;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qdm: sets of desirable measurements on finite-dimensional quantum systems"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--problem", f.problem, "Problem file (JSON)");
    app.add_option("--seed", f.seed, "Seed for sampled checks");
    app.add_option("--eps", f.eps, "Strict-cone margin");
    app.add_option("--tol", f.tol, "Tolerance override key=value")->take_all();
    app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"human", "machine"}));

    struct Spec {
        const char* name;
        const char* help;
        std::vector<const char*> operands;
    };
    const std::vector<Spec> specs = {
        {"check-consistency", "Is the assessment free of sure loss?", {"assessment"}},
        {"member", "Is the target in the natural extension?", {"assessment", "target"}},
        {"lower-prevision", "Lower and upper prevision of the target", {"assessment", "target"}},
        {"condition", "Conditional previsions of the target given an event", {"assessment", "event", "target"}},
        {"update-density", "Lueders update of a density", {"rho", "event"}},
        {"ltp", "Total probability decomposition of an update", {"rho", "event"}},
        {"reproduce-paper", "Check the built-in running example", {}},
    };
    for (const auto& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->fallthrough();
        for (const char* op : s.operands) {
            const std::string flag = std::string("--") + op;
            std::string* dest = op == std::string("assessment") ? &f.assessment
                                : op == std::string("target")   ? &f.target
                                : op == std::string("rho")      ? &f.rho
                                                                : &f.event;
            sub->add_option(flag, *dest)->required();
        }
        if (s.name == std::string("check-consistency"))
            sub->add_option("--samples", f.samples, "Also audit the coherence axioms on this many samples");
        if (s.name == std::string("lower-prevision") || s.name == std::string("condition"))
            sub->add_flag("--no-cross-check", f.no_cross_check, "Skip the bisection cross-check");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qdm::io::kInputError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    qdm::io::QueryResult r;
    try {
        r = qdm::io::run_command(command, to_args(f, app));
    } catch (const qdm::Error& e) {
        r.command = command;
        r.status = "error";
        r.exit_code = qdm::io::exit_code_for(e.kind());
        r.message = e.what();
    }
    if (f.format == "machine")
        std::cout << r.machine() << "\n";
    else
        std::cout << r.human();
    return r.exit_code;
}
