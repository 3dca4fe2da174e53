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

TEST(Consistency, Examples) {
    EXPECT_EQ(check_consistency(Assessment(2, {HermitianOperator::identity(2)})).status, Consistency::Consistent);
    EXPECT_EQ(check_consistency(Assessment::vacuous(3)).status, Consistency::Consistent);

    const ConsistencyResult neg = check_consistency(Assessment(2, {-HermitianOperator::identity(2)}));
    EXPECT_EQ(neg.status, Consistency::Inconsistent);
    ASSERT_EQ(neg.certificate.coefficients.size(), 1u);
    EXPECT_GT(neg.certificate.coefficients[0], 0.0);

    const ConsistencyResult pair = check_consistency(Assessment(2, {diag(1, -1), diag(-1, 1)}));
    ASSERT_EQ(pair.status, Consistency::Inconsistent);
    const auto& lam = pair.certificate.coefficients;
    const double s = lam[0] + lam[1];
    // Normalised weights are (1/2, 1/2) and the combination is <= 0.
    EXPECT_NEAR(lam[0] / s, 0.5, 1e-6);
    EXPECT_LE(oracle::eigenvalues((lam[0] / s) * diag(1, -1) + (lam[1] / s) * diag(-1, 1)).back(), 1e-6);

    EXPECT_EQ(check_consistency(Assessment(2, {diag(1, -2)})).status, Consistency::Consistent);
}

TEST(Consistency, ZeroGeneratorIsInconsistent) {
    EXPECT_EQ(check_consistency(Assessment(2, {HermitianOperator::zero(2)})).status, Consistency::Inconsistent);
}

TEST(Consistency, AddingGeneratorsCanOnlyBreakIt) {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const auto gens = oracle::consistent_generators(3, 2, rng);
        const Assessment a(3, gens);
        ASSERT_EQ(check_consistency(a).status, Consistency::Consistent);
        EXPECT_EQ(check_consistency(a.with(-gens[0] - gens[1])).status, Consistency::Inconsistent);
    }
}

TEST(NaturalExtension, Examples) {
    const NaturalExtensionModel m(Assessment(2, {diag(1, -1)}));
    const MembershipResult id = m.member(HermitianOperator::identity(2));
    EXPECT_EQ(id.status, Membership::Member);
    EXPECT_EQ(id.branch, MembershipBranch::Background);
    EXPECT_EQ(m.member(HermitianOperator::zero(2)).status, Membership::Nonmember);

    const MembershipResult r = m.member(diag(2, -1));
    EXPECT_EQ(r.status, Membership::Member);
    EXPECT_EQ(r.branch, MembershipBranch::Generators);
    EXPECT_EQ(m.member(diag(-1, 2)).status, Membership::Nonmember);
}

TEST(NaturalExtension, VacuousIsPositiveDefiniteCone) {
    const NaturalExtensionModel m(Assessment::vacuous(2));
    EXPECT_EQ(m.member(diag(1, 1e-3)).status, Membership::Member);
    EXPECT_EQ(m.member(diag(1, 1e-8)).status, Membership::Boundary);
    EXPECT_EQ(m.member(diag(1, 0)).status, Membership::Nonmember);
    EXPECT_EQ(m.member(diag(1, -1e-3)).status, Membership::Nonmember);
}

TEST(NaturalExtension, GeneratorsAreMembers) {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const auto gens = oracle::consistent_generators(2 + trial % 3, 3, rng);
        const NaturalExtensionModel m(Assessment(gens.front().dim(), gens));
        for (const auto& g : gens) EXPECT_EQ(m.member(g).status, Membership::Member);
    }
}

TEST(NaturalExtension, InconsistentModelRefusesQueries) {
    const NaturalExtensionModel m(Assessment(2, {-HermitianOperator::identity(2)}));
    try {
        (void)m.member(HermitianOperator::identity(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InconsistentAssessment);
    }
}

TEST(NaturalExtension, MembershipAgreesWithLowerPrevisionSign) {
    // B is in E(A) essentially when min over the credal set of tr(rho B) > 0.
    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const auto gens = oracle::consistent_generators(2, 2, rng);
        const HermitianOperator b = random_hermitian(2, rng);
        const double lp = oracle::qubit_lower_prevision(b, gens);
        if (std::abs(lp) < 2e-3) continue;
        const NaturalExtensionModel m(Assessment(2, gens));
        EXPECT_EQ(m.member(b).status, lp > 0 ? Membership::Member : Membership::Nonmember) << "lp=" << lp;
    }
}

TEST(Coherence, EmptyAndSingleGeneratorAudits) {
    const CoherenceReport empty = check_coherence_axioms(NaturalExtensionModel(Assessment::vacuous(3)), 100, 42);
    EXPECT_TRUE(empty.ok());
    EXPECT_GT(empty.checks, 0);
    const CoherenceReport one = check_coherence_axioms(NaturalExtensionModel(Assessment(2, {diag(1, -0.5)})), 100, 42);
    EXPECT_TRUE(one.ok()) << one.violations.front().axiom;
}

TEST(Coherence, AuditIsReproducible) {
    const NaturalExtensionModel m(Assessment(2, {diag(1, -0.5)}));
    const CoherenceReport a = check_coherence_axioms(m, 20, 7), b = check_coherence_axioms(m, 20, 7);
    EXPECT_EQ(a.checks, b.checks);
    EXPECT_EQ(a.boundary, b.boundary);
}

TEST(Coherence, InconsistentModelIsRejected) {
    try {
        (void)check_coherence_axioms(NaturalExtensionModel(Assessment(2, {-HermitianOperator::identity(2)})), 5, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InconsistentAssessment);
    }
}

TEST(Compatibility, FocusedModelIsCompatible) {
    // The focused model generated from {p(A_i)}: membership is read off p(A).
    Rng rng(44);
    const Subspace v(3, {Ket::basis(3, 0), Ket::basis(3, 1)});
    const ProjectionMap p(ProjectionKind::Subspace, {v});
    std::vector<HermitianOperator> gens;
    for (const auto& g : oracle::consistent_generators(3, 2, rng)) gens.push_back(p.apply(g));
    const NaturalExtensionModel m(Assessment(3, gens));
    ASSERT_EQ(m.consistency(), Consistency::Consistent);
    const UpdatedModel focused = update_model(m, ConditioningEvent(v));
    const CompatibilityReport r = check_compatibility(focused, p, 30, 5, gens);
    EXPECT_EQ(r.status, Compatibility::Compatible) << r.reason;
}

TEST(Compatibility, IdentityMapIsAlwaysCompatible) {
    Rng rng(45);
    const auto gens = oracle::consistent_generators(2, 2, rng);
    const NaturalExtensionModel m(Assessment(2, gens));
    const ProjectionMap id(ProjectionKind::Subspace, {Subspace::full(2)});
    EXPECT_EQ(check_compatibility(m, id, 30, 6, gens).status, Compatibility::Compatible);
}

TEST(Compatibility, GeneratorLeaningOnTheKernelIsIncompatible) {
    // G = kernel part + small negative range part: G is a member by
    // assessment but p(G) = diag(-0.1, 0) is not.
    const HermitianOperator g = diag(-0.1, 1.0);
    const NaturalExtensionModel m(Assessment(2, {g}));
    const ProjectionMap p(ProjectionKind::Subspace, {Subspace(2, {Ket::basis(2, 0)})});
    EXPECT_EQ(m.member(g).status, Membership::Member);
    EXPECT_EQ(m.member(p.apply(g)).status, Membership::Nonmember);
    const CompatibilityReport r = check_compatibility(m, p, 10, 7, {g});
    EXPECT_EQ(r.status, Compatibility::Incompatible);
    ASSERT_EQ(r.witness.size(), 1u);
    EXPECT_TRUE(r.witness[0].approx_equal(g, 0));
}

} // namespace
} // namespace qdm
