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

// A qubit about which You only know that <Z> >= 1/2 and <X> >= 0. Prints
// the imprecise previsions of a few Pauli measurements and shows an
// assessment that incurs sure loss.

#include <complex>
#include <cstdio>

#include "qdm/qdm.hpp"

using namespace qdm;

int main() {
    const HermitianOperator id = HermitianOperator::identity(2);
    const HermitianOperator z = HermitianOperator::diagonal({1.0, -1.0});
    ComplexMatrix xm(2, 2), ym(2, 2);
    xm << 0.0, 1.0, 1.0, 0.0;
    ym << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    const HermitianOperator x(xm), y(ym);

    const NaturalExtensionModel model(Assessment(2, {z - 0.5 * id, x}));
    std::printf("assessment {Z - I/2, X} is %s\n", to_string(model.consistency()));
    const struct {
        const char* name;
        HermitianOperator op;
    } queries[] = {{"Z", z}, {"X", x}, {"Y", y}, {"X + Z", x + z}};
    for (const auto& q : queries) {
        const PrevisionResult p = lower_prevision(model, q.op);
        std::printf("  %-6s in [% .6f, % .6f]  (%s)\n", q.name, p.lower, p.upper, to_string(p.status));
    }

    const ConsistencyResult bad = check_consistency(Assessment(2, {z - 0.5 * id, -z - 0.5 * id}));
    std::printf("assessment {Z - I/2, -Z - I/2} is %s", to_string(bad.status));
    if (bad.status == Consistency::Inconsistent)
        std::printf(", combination weights %.3f %.3f", bad.certificate.coefficients[0], bad.certificate.coefficients[1]);
    std::printf("\n");
    return 0;
}
