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
#include "qdm/io/commands.hpp"

namespace qdm {
namespace {

HermitianOperator diag(double a, double b) { return HermitianOperator::diagonal({a, b}); }

TEST(LowerPrevision, VacuousGivesSpectralBounds) {
    Rng rng(51);
    const NaturalExtensionModel m(Assessment::vacuous(3));
    const HermitianOperator b = random_hermitian(3, rng);
    const PrevisionResult r = lower_prevision(m, b);
    const auto ev = oracle::eigenvalues(b);
    EXPECT_NEAR(r.lower, ev.front(), 1e-7);
    EXPECT_NEAR(r.upper, ev.back(), 1e-7);
    EXPECT_NEAR(r.lower_by_bisection, ev.front(), 1e-5);
    EXPECT_EQ(r.status, PrevisionStatus::Exact);
}

TEST(LowerPrevision, IdentityHasPrevisionOne) {
    Rng rng(52);
    const NaturalExtensionModel m(Assessment(3, oracle::consistent_generators(3, 3, rng)));
    const PrevisionResult r = lower_prevision(m, HermitianOperator::identity(3));
    EXPECT_NEAR(r.lower, 1.0, 1e-7);
    EXPECT_NEAR(r.upper, 1.0, 1e-7);
}

TEST(LowerPrevision, QubitExample) {
    const NaturalExtensionModel m(Assessment(2, {diag(1, -1)}));
    const PrevisionResult r = lower_prevision(m, diag(1, 0));
    EXPECT_NEAR(r.lower, 0.5, 1e-7);
    EXPECT_NEAR(r.upper, 1.0, 1e-7);
    EXPECT_NEAR(r.lower, oracle::qubit_lower_prevision(diag(1, 0), {diag(1, -1)}), 1e-3);
    EXPECT_NEAR(r.lower_witness.expectation(diag(1, 0)), r.lower, 1e-7);
    EXPECT_GE(r.lower_witness.expectation(diag(1, -1)), -1e-7);
}

TEST(LowerPrevision, UpperIsConjugate) {
    Rng rng(53);
    const NaturalExtensionModel m(Assessment(2, oracle::consistent_generators(2, 2, rng)));
    const HermitianOperator b = random_hermitian(2, rng);
    const PrevisionResult lo = lower_prevision(m, b, false), up = upper_prevision(m, b, false);
    EXPECT_NEAR(up.lower, lo.lower, 1e-9);
    EXPECT_NEAR(up.upper, lo.upper, 1e-9);
    const PrevisionResult neg = lower_prevision(m, -b, false);
    EXPECT_NEAR(neg.lower, -lo.upper, 1e-9);
}

TEST(LowerPrevision, InconsistentModelThrows) {
    const NaturalExtensionModel m(Assessment(2, {-HermitianOperator::identity(2)}));
    try {
        (void)lower_prevision(m, diag(1, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InconsistentAssessment);
    }
}

TEST(LowerPrevision, MatchesBlochGrid) {
    Rng rng(54);
    for (int trial = 0; trial < 6; ++trial) {
        const auto gens = oracle::consistent_generators(2, 1 + trial % 4, rng);
        const NaturalExtensionModel m(Assessment(2, gens));
        const HermitianOperator b = random_hermitian(2, rng);
        const double lower = lower_prevision(m, b, false).lower;
        EXPECT_NEAR(lower, oracle::qubit_lower_prevision(b, gens), 1e-3);
        EXPECT_NEAR(lower, oracle::qubit_lower_prevision_exact(b, gens), 1e-7);
    }
}

TEST(LinearPrevision, RoundTripsThroughBasis) {
    Rng rng(55);
    for (int d = 1; d <= 4; ++d) {
        const DensityOperator rho = random_density(d, rng);
        const auto values = linear_prevision_values(rho, canonical_hermitian_basis(d));
        EXPECT_EQ(static_cast<int>(values.size()), d * d);
        EXPECT_TRUE(density_of_linear_prevision(values).op().approx_equal(rho.op(), 1e-10));
    }
}

TEST(LinearPrevision, RecoversRunningExampleDensity) {
    const DensityOperator rho = io::RunningExample::rho_star();
    const auto values = linear_prevision_values(rho, canonical_hermitian_basis(9));
    const DensityOperator back = density_of_linear_prevision(values);
    EXPECT_TRUE(back.op().approx_equal(rho.op(), 1e-10));
    EXPECT_NEAR(back.op().max_eigenvalue(), 1.0, 1e-10);
}

TEST(LinearPrevision, RejectsBadValues) {
    auto values = linear_prevision_values(DensityOperator::maximally_mixed(2), canonical_hermitian_basis(2));
    values[0].second += 0.3; // tr(rho) is no longer 1
    try {
        (void)density_of_linear_prevision(values);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotADensity);
    }
    values.pop_back();
    try {
        (void)density_of_linear_prevision(values);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IncompleteBasis);
    }
}

TEST(LinearPrevision, NearLinearModelPinsEveryPrevision) {
    Rng rng(56);
    const DensityOperator rho = random_density(3, rng);
    const NaturalExtensionModel m(near_linear_assessment(rho, 1e-5));
    ASSERT_EQ(m.consistency(), Consistency::Consistent);
    for (int k = 0; k < 3; ++k) {
        const HermitianOperator b = random_hermitian(3, rng);
        const PrevisionResult r = lower_prevision(m, b, false);
        EXPECT_NEAR(r.lower, rho.expectation(b), 1e-3);
        EXPECT_NEAR(r.upper, rho.expectation(b), 1e-3);
        EXPECT_LE(r.upper - r.lower, 1e-3);
    }
}

TEST(CredalSet, DescriptionListsGenerators) {
    const NaturalExtensionModel m(Assessment(2, {diag(1, -1), diag(0.5, 0.2)}));
    const SpectrahedronProgram prog = credal_set_description(m);
    EXPECT_EQ(prog.constraints.size(), 2u);
    EXPECT_FALSE(prog.normalizer.has_value());
    EXPECT_TRUE(credal_set_description(NaturalExtensionModel(Assessment::vacuous(2))).constraints.empty());
}

TEST(Bisection, FindsThreshold) {
    const double x = bisect_supremum(0.0, 1.0, 1e-9, [](double a) { return a <= 0.3; });
    EXPECT_NEAR(x, 0.3, 1e-9);
}

} // namespace
} // namespace qdm
