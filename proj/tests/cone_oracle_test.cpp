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

#include "oracles.hpp"

namespace qdm {
namespace {

HermitianOperator diag(double a, double b) { return HermitianOperator::diagonal({a, b}); }

TEST(RealEmbedding, RoundTripsAndPreservesSpectrum) {
    Rng rng(31);
    const HermitianOperator a = random_hermitian(3, rng);
    const RealMatrix e = real_embedding(a);
    // The pull-back is the adjoint of the embedding, so a round trip doubles.
    EXPECT_TRUE(from_real_embedding(e).approx_equal(2.0 * a, 1e-14));
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(e);
    EXPECT_NEAR(es.eigenvalues()(0), oracle::min_eigenvalue(a), 1e-12);
}

TEST(CheckFeasible, EmptyGeneratorsStrictIdentity) {
    ConeFeasibilityProblem p;
    p.target = HermitianOperator::identity(2);
    p.strictness = Strictness::Strict;
    p.epsilon = 1e-6;
    const Certificate c = check_feasible(p);
    EXPECT_EQ(c.status, CertificateStatus::Feasible);
    EXPECT_TRUE(c.coefficients.empty());
}

TEST(CheckFeasible, SingleGeneratorWeak) {
    ConeFeasibilityProblem p;
    p.generators = {diag(1, -1)};
    p.target = diag(2, -1);
    const Certificate c = check_feasible(p);
    ASSERT_EQ(c.status, CertificateStatus::Feasible);
    ASSERT_EQ(c.coefficients.size(), 1u);
    // B - lambda A = diag(2 - lambda, lambda - 1) is PSD for lambda in [1, 2].
    EXPECT_GE(c.coefficients[0], 1.0 - 1e-6);
    EXPECT_LE(c.coefficients[0], 2.0 + 1e-6);
    EXPECT_GE(oracle::min_eigenvalue(p.target - c.coefficients[0] * p.generators[0]), -1e-7);
}

TEST(CheckFeasible, MixedSignGeneratorHasNoNonpositiveMultiple) {
    ConeFeasibilityProblem p;
    p.generators = {diag(1, -2)};
    p.target = HermitianOperator::zero(2);
    p.combination = Combination::NonnegativeNontrivial;
    EXPECT_EQ(check_feasible(p).status, CertificateStatus::Infeasible);
    // Cross-check against a line search over the single multiple.
    EXPECT_GT(oracle::eigenvalues(diag(1, -2)).back(), 0.0);
}

TEST(CheckFeasible, OpposedPairCancels) {
    ConeFeasibilityProblem p;
    p.generators = {diag(1, -1), diag(-1, 1)};
    p.target = HermitianOperator::zero(2);
    p.combination = Combination::NonnegativeNontrivial;
    const Certificate c = check_feasible(p);
    ASSERT_EQ(c.status, CertificateStatus::Feasible);
    ASSERT_EQ(c.coefficients.size(), 2u);
    EXPECT_NEAR(c.coefficients[0], c.coefficients[1], 1e-6);
    EXPECT_GT(c.coefficients[0], 0.0);
}

TEST(CheckFeasible, InfeasibleComesWithSeparatingDensity) {
    ConeFeasibilityProblem p;
    p.generators = {diag(1, -1)};
    p.target = diag(-1, 0.5);
    const Certificate c = check_feasible(p);
    ASSERT_EQ(c.status, CertificateStatus::Infeasible);
    ASSERT_TRUE(c.density.has_value());
    // rho separates: tr(rho A) >= 0 and tr(rho B) < 0.
    EXPECT_GE(oracle::trace_product(c.density->op(), p.generators[0]), -1e-7);
    EXPECT_LT(oracle::trace_product(c.density->op(), p.target), 0.0);
}

TEST(CheckFeasible, PairConsistencyAgreesWithLineSearch) {
    Rng rng(32);
    int decided = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + trial % 2;
        ConeFeasibilityProblem p;
        p.generators = {random_hermitian(d, rng), random_hermitian(d, rng)};
        p.target = HermitianOperator::zero(d);
        p.combination = Combination::NonnegativeNontrivial;
        const double margin = oracle::pair_combination_margin(p.generators[0], p.generators[1]);
        if (std::abs(margin) < 1e-4) continue;
        ++decided;
        const Certificate c = check_feasible(p);
        EXPECT_EQ(c.status, margin < 0 ? CertificateStatus::Feasible : CertificateStatus::Infeasible)
            << "trial " << trial << " margin " << margin;
    }
    EXPECT_GT(decided, 30);
}

TEST(MinimizeTrace, VacuousGivesMinimumEigenvalue) {
    Rng rng(33);
    for (int d = 1; d <= 4; ++d) {
        SpectrahedronProgram prog;
        prog.objective = random_hermitian(d, rng);
        const Certificate c = minimize_trace(prog);
        ASSERT_EQ(c.status, CertificateStatus::Feasible);
        EXPECT_NEAR(c.objective_value, oracle::min_eigenvalue(prog.objective), 1e-7);
        ASSERT_TRUE(c.density.has_value());
        EXPECT_NEAR(oracle::trace_product(c.density->op(), prog.objective), c.objective_value, 1e-7);
    }
    SpectrahedronProgram id;
    id.objective = HermitianOperator::identity(3);
    EXPECT_NEAR(minimize_trace(id).objective_value, 1.0, 1e-9);
}

TEST(MinimizeTrace, QubitWithOneConstraint) {
    SpectrahedronProgram prog;
    prog.objective = diag(1, 0);
    prog.constraints.push_back({diag(1, -1), 0.0});
    const Certificate c = minimize_trace(prog);
    ASSERT_EQ(c.status, CertificateStatus::Feasible);
    EXPECT_NEAR(c.objective_value, 0.5, 1e-7);
    EXPECT_NEAR(oracle::qubit_lower_prevision(diag(1, 0), {diag(1, -1)}), 0.5, 1e-3);
    EXPECT_LE(c.lower_bound, c.objective_value + 1e-12);
    EXPECT_GE(c.upper_bound, c.objective_value - 1e-12);
}

TEST(MinimizeTrace, EmptyFeasibleSetIsInfeasible) {
    SpectrahedronProgram prog;
    prog.objective = diag(1, 0);
    prog.constraints.push_back({diag(1, -1), 0.2});
    prog.constraints.push_back({diag(-1, 1), 0.2});
    EXPECT_EQ(minimize_trace(prog).status, CertificateStatus::Infeasible);
}

TEST(MinimizeTrace, RejectsDimensionMismatch) {
    SpectrahedronProgram prog;
    prog.objective = diag(1, 0);
    prog.constraints.push_back({HermitianOperator::identity(3), 0.0});
    try {
        (void)minimize_trace(prog);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(MinimizeTrace, MatchesBlochGridOnRandomQubits) {
    Rng rng(34);
    for (int trial = 0; trial < 8; ++trial) {
        const auto gens = oracle::consistent_generators(2, 1 + trial % 3, rng);
        SpectrahedronProgram prog;
        prog.objective = random_hermitian(2, rng);
        for (const auto& g : gens) prog.constraints.push_back({g, 0.0});
        const Certificate c = minimize_trace(prog);
        ASSERT_EQ(c.status, CertificateStatus::Feasible);
        EXPECT_NEAR(c.objective_value, oracle::qubit_lower_prevision(prog.objective, gens), 1e-3);
        EXPECT_NEAR(c.objective_value, oracle::qubit_lower_prevision_exact(prog.objective, gens), 1e-7);
    }
}

} // namespace
} // namespace qdm
