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

#include <gtest/gtest.h>

#include "qdm/io/commands.hpp"

#ifndef QDM_RUNNING_EXAMPLE_FILE
#error "QDM_RUNNING_EXAMPLE_FILE must point at demos/running_example.json"
#endif

namespace qdm::io {
namespace {

const char* kMinimal = R"({"dim": 2, "operators": {"Z": [[1, 0], [0, -1]]}})";

ErrorKind parse_error_kind(const std::string& text) {
    try {
        (void)parse_problem(text);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

std::string parse_error_message(const std::string& text) {
    try {
        (void)parse_problem(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

TEST(ParseProblem, MinimalDocument) {
    const ProblemFile pf = parse_problem(R"({"dim": 2, "operators": {"Id": [[[1,0],[0,0]],[[0,0],[1,0]]]}})");
    EXPECT_EQ(pf.dim, 2);
    EXPECT_TRUE(pf.op("Id").approx_equal(HermitianOperator::identity(2), 0));
    EXPECT_TRUE(pf.op("I").approx_equal(HermitianOperator::identity(2), 0));
    EXPECT_TRUE(pf.assessment("empty").empty());
}

TEST(ParseProblem, BareNumbersAreReal) {
    const ProblemFile pf = parse_problem(kMinimal);
    EXPECT_TRUE(pf.op("Z").approx_equal(HermitianOperator::diagonal({1.0, -1.0}), 0));
}

TEST(ParseProblem, HermiticityViolationNamesTheOperator) {
    const std::string text = R"({"dim": 2, "operators": {"B": [[[1,0],[0,1]],[[0,1],[1,0]]]}})";
    EXPECT_EQ(parse_error_kind(text), ErrorKind::ValidationError);
    const std::string msg = parse_error_message(text);
    EXPECT_NE(msg.find("/operators/B"), std::string::npos) << msg;
    EXPECT_NE(msg.find("hermiticity"), std::string::npos) << msg;
}

TEST(ParseProblem, SyntaxErrorHasLineAndColumn) {
    const std::string text = "{\n  \"dim\": 2,\n  \"operators\": {,}\n}";
    EXPECT_EQ(parse_error_kind(text), ErrorKind::ParseError);
    EXPECT_NE(parse_error_message(text).find("line 3"), std::string::npos) << parse_error_message(text);
}

TEST(ParseProblem, ValidationPointers) {
    EXPECT_NE(parse_error_message(R"({"dim": 0})").find("/dim"), std::string::npos);
    EXPECT_NE(parse_error_message(R"({"dim": 2, "extra": 1})").find("/extra"), std::string::npos);
    EXPECT_NE(parse_error_message(R"({"dim": 2, "operators": {"Z": [[1, 0]]}})").find("/operators/Z"),
              std::string::npos);
    EXPECT_NE(parse_error_message(R"({"dim": 2, "assessments": {"a": ["nope"]}})").find("/assessments/a/0"),
              std::string::npos);
    EXPECT_NE(parse_error_message(R"({"dim": 2, "subspaces": {"v": [[1, 0], [2, 0]]}})").find("/subspaces/v"),
              std::string::npos);
    EXPECT_NE(parse_error_message(R"({"dim": 2, "operators": {"Z": [[1, 0], [0, -1]]}, "densities": ["Z"]})")
                  .find("/densities/0"),
              std::string::npos);
    EXPECT_NE(parse_error_message(R"({"dim": 2, "config": {"bogus": 1}})").find("/config/bogus"), std::string::npos);
    EXPECT_NE(parse_error_message(R"({"dim": 2, "operators": {"I": [[1, 0], [0, 1]]}})").find("reserved"),
              std::string::npos);
}

TEST(ParseProblem, ConfigBlockSetsTolerances) {
    const ProblemFile pf = parse_problem(R"({"dim": 2, "config": {"margin": 1e-4, "duality": 2e-5}})");
    EXPECT_DOUBLE_EQ(pf.tolerances.margin, 1e-4);
    EXPECT_DOUBLE_EQ(pf.tolerances.duality, 2e-5);
}

TEST(ParseProblem, SerializeRoundTrip) {
    const ProblemFile a = RunningExample::problem();
    const ProblemFile b = parse_problem(serialize_problem(a));
    EXPECT_EQ(b.dim, a.dim);
    ASSERT_EQ(b.operators.size(), a.operators.size());
    for (const auto& [name, op] : a.operators) EXPECT_TRUE(b.op(name).approx_equal(op, 0)) << name;
    EXPECT_EQ(b.assessments, a.assessments);
    EXPECT_EQ(b.densities, a.densities);
    EXPECT_EQ(serialize_problem(b), serialize_problem(a));
}

TEST(ParseProblem, ShippedRunningExample) {
    const ProblemFile pf = load_problem(QDM_RUNNING_EXAMPLE_FILE);
    const ProblemFile ref = RunningExample::problem();
    EXPECT_EQ(pf.dim, 9);
    EXPECT_TRUE(pf.op("rhoStar").approx_equal(ref.op("rhoStar"), 0));
    const DensityOperator rho_v = update_density(pf.density("rhoStar"), pf.event("V"));
    EXPECT_LE((rho_v.op().matrix() - RunningExample::rho_v().matrix()).cwiseAbs().maxCoeff(), 1e-9);
    const DensityOperator rho_s = update_density(pf.density("rhoStar"), pf.event("V1,V2,V3"));
    EXPECT_LE((rho_s.op().matrix() - RunningExample::rho_s().matrix()).cwiseAbs().maxCoeff(), 1e-9);
}

CommandArgs args_for(std::map<std::string, std::string> options) {
    CommandArgs a;
    a.problem = QDM_RUNNING_EXAMPLE_FILE;
    a.options = std::move(options);
    return a;
}

TEST(RunCommand, MemberOfEmptyAssessment) {
    const QueryResult r = run_command("member", args_for({{"assessment", "empty"}, {"target", "I"}}));
    EXPECT_EQ(r.status, "member");
    EXPECT_EQ(r.values["branch"], "background");
    EXPECT_EQ(r.exit_code, kSuccess);
    const QueryResult zero = run_command("member", args_for({{"assessment", "empty"}, {"target", "0"}}));
    EXPECT_EQ(zero.exit_code, kNegative);
}

TEST(RunCommand, UpdateDensityAndLtp) {
    const QueryResult u = run_command("update-density", args_for({{"rho", "rhoStar"}, {"event", "V"}}));
    ASSERT_EQ(u.exit_code, kSuccess) << u.message;
    const auto& m = u.values["density"];
    const int a = RunningExample::index(-1, 1), b = RunningExample::index(0, 0);
    EXPECT_NEAR(m[a][a][0].get<double>(), 0.5, 1e-9);
    EXPECT_NEAR(m[a][b][0].get<double>(), -0.5, 1e-9);

    const QueryResult l = run_command("ltp", args_for({{"rho", "rhoStar"}, {"event", "V1,V2,V3"}}));
    ASSERT_EQ(l.exit_code, kSuccess) << l.message;
    ASSERT_EQ(l.values["branches"].size(), 2u);
    EXPECT_NEAR(l.values["branches"][0]["weight"].get<double>(), 0.5, 1e-12);
    EXPECT_NEAR(l.values["branches"][1]["weight"].get<double>(), 0.5, 1e-12);
    EXPECT_LE(l.values["mixture_error"].get<double>(), 1e-9);
}

TEST(RunCommand, ConsistencyAndCondition) {
    const QueryResult c = run_command("check-consistency", args_for({{"assessment", "fidelity"}}));
    EXPECT_EQ(c.status, "consistent");
    const QueryResult p = run_command(
        "condition", args_for({{"assessment", "fidelity"}, {"event", "V"}, {"target", "A"}, {"cross-check", "0"}}));
    ASSERT_EQ(p.exit_code, kSuccess) << p.message;
    const double lo = p.values["lower"].get<double>(), hi = p.values["upper"].get<double>();
    EXPECT_LE(lo, 0.5);
    EXPECT_GE(hi, 0.5);
}

TEST(RunCommand, ErrorsMapToExitCodes) {
    CommandArgs missing;
    missing.problem = "/nonexistent/problem.json";
    missing.options = {{"assessment", "empty"}};
    EXPECT_EQ(run_command("check-consistency", missing).exit_code, kInputError);
    EXPECT_EQ(run_command("member", args_for({{"assessment", "nope"}, {"target", "I"}})).exit_code, kInputError);
    EXPECT_EQ(run_command("frobnicate", args_for({})).exit_code, kInputError);
    CommandArgs bad_tol = args_for({{"assessment", "empty"}});
    bad_tol.tolerances = {{"bogus", 1.0}};
    EXPECT_EQ(run_command("check-consistency", bad_tol).exit_code, kInputError);
    EXPECT_EQ(exit_code_for(ErrorKind::SolverStall), kStall);
    EXPECT_EQ(exit_code_for(ErrorKind::ZeroProbabilityEvent), kNegative);
}

TEST(RunCommand, FlagsOverrideConfig) {
    Tolerances t;
    CommandArgs a;
    a.eps = 1e-3;
    a.tolerances = {{"duality", 1e-4}};
    apply_overrides(t, a);
    EXPECT_DOUBLE_EQ(t.margin, 1e-3);
    EXPECT_DOUBLE_EQ(t.duality, 1e-4);
}

TEST(QueryResult, MachineRenderingRoundTrips) {
    CommandArgs a = args_for({{"rho", "rhoStar"}, {"event", "V1,V2,V3"}});
    a.seed = 99;
    const QueryResult r = run_command("ltp", a);
    const std::string line = r.machine();
    EXPECT_EQ(line.find('\n'), std::string::npos);
    const QueryResult back = QueryResult::from_json(Json::parse(line));
    EXPECT_EQ(back.machine(), line);
    EXPECT_EQ(back.seed, 99u);
    EXPECT_EQ(run_command("ltp", a).machine(), line);
    EXPECT_NE(r.human().find("ltp: ok"), std::string::npos);
}

} // namespace
} // namespace qdm::io
