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

// Two spin-1 particles. You believe the pair is in
// (|-1,1> - |0,0> + |1,1>) / sqrt 3 and then learn either that the total
// spin is zero or which of |-1,1>, |0,0>, |1,-1> the pair is in.

#include <cstdio>

#include "qdm/qdm.hpp"

using namespace qdm;

namespace {

int idx(int l, int k) { return 3 * (l + 1) + (k + 1); }
Ket ket(int l, int k) { return Ket::basis(9, idx(l, k)); }

void print_diagonal_and_coherence(const char* label, const HermitianOperator& rho) {
    std::printf("%s\n", label);
    const int states[3][2] = {{-1, 1}, {0, 0}, {1, -1}};
    for (const auto& s : states)
        std::printf("  <%2d,%2d|rho|%2d,%2d> = %.6f\n", s[0], s[1], s[0], s[1], rho(idx(s[0], s[1]), idx(s[0], s[1])).real());
    std::printf("  <-1, 1|rho| 0, 0> = %.6f\n", rho(idx(-1, 1), idx(0, 0)).real());
}

} // namespace

int main() {
    const Ket psi = (ket(-1, 1) - ket(0, 0) + ket(1, 1)).normalized();
    const DensityOperator rho = DensityOperator::pure(psi);

    const Subspace v(9, {ket(-1, 1), ket(0, 0), ket(1, -1)});
    const ConditioningEvent total_spin_zero(v);
    print_diagonal_and_coherence("after learning the total spin is zero:", update_density(rho, total_spin_zero).op());

    const ConditioningEvent which({Subspace(9, {ket(-1, 1)}), Subspace(9, {ket(0, 0)}), Subspace(9, {ket(1, -1)})});
    print_diagonal_and_coherence("after learning which component, without reading it:", update_density(rho, which).op());
    for (const auto& t : total_probability_decomposition(rho, which))
        std::printf("  branch V%d has weight %.6f\n", t.subspace + 1, t.weight);

    // The same update through desirability, for a model that pins every
    // expectation to within 1e-4 of its value under rho.
    const NaturalExtensionModel model(near_linear_assessment(rho, 1e-4));
    const HermitianOperator a = ket(-1, 1).outer();
    const PrevisionResult before = lower_prevision(model, a, false);
    const ConditionalPrevision after = update_prevision(model, total_spin_zero, a, false);
    std::printf("prevision of |-1,1><-1,1| before: [%.6f, %.6f]\n", before.lower, before.upper);
    std::printf("                        given V: [%.6f, %.6f]\n", after.lower, after.upper);
    return 0;
}
