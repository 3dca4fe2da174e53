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

#ifndef QDM_DENSITY_HPP
#define QDM_DENSITY_HPP

#include <string>

#include "qdm/hermitian.hpp"

namespace qdm {

/// A mixed quantum state: positive semidefinite with unit trace.
class DensityOperator {
public:
    explicit DensityOperator(HermitianOperator rho, const Tolerances& tol = {}) : rho_(std::move(rho)) {
        const double tr = rho_.trace();
        if (std::abs(tr - 1.0) > tol.trace)
            throw Error(ErrorKind::NotADensity, "trace is " + std::to_string(tr));
        const double lo = rho_.min_eigenvalue();
        if (lo < -tol.eigenvalue)
            throw Error(ErrorKind::NotADensity, "minimum eigenvalue is " + std::to_string(lo));
    }

    /// Pure state |psi><psi| / <psi|psi>.
    static DensityOperator pure(const Ket& psi) { return DensityOperator(psi.normalized().outer()); }

    static DensityOperator maximally_mixed(int dim) {
        return DensityOperator(HermitianOperator::identity(dim) / static_cast<double>(dim));
    }

    /// Clips negative eigenvalues of a near-density and renormalises. Used to
    /// turn solver iterates into exact witnesses.
    static DensityOperator nearest(const HermitianOperator& a) {
        const Spectrum s = spectral_decompose(a);
        const int d = a.dim();
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        double total = 0.0;
        for (int k = 0; k < d; ++k) {
            const double lam = std::max(0.0, s.eigenvalues[k]);
            const auto& e = s.eigenvectors[k].amplitudes();
            m += lam * (e * e.adjoint());
            total += lam;
        }
        if (total <= 0.0) return maximally_mixed(d);
        return DensityOperator(HermitianOperator::from_hermitian_part(m / total));
    }

    int dim() const { return rho_.dim(); }
    const HermitianOperator& op() const { return rho_; }

    /// Born-rule expectation tr(rho A).
    double expectation(const HermitianOperator& a) const { return trace_product(rho_, a); }

private:
    HermitianOperator rho_;
};

} // namespace qdm

#endif // QDM_DENSITY_HPP
