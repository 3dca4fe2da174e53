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

#ifndef QDM_PREVISIONS_HPP
#define QDM_PREVISIONS_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "qdm/desirability.hpp"

namespace qdm {

enum class PrevisionStatus { Exact, Boundary };

inline const char* to_string(PrevisionStatus s) { return s == PrevisionStatus::Exact ? "exact" : "boundary"; }

struct PrevisionResult {
    double lower = 0.0;
    double upper = 0.0;
    DensityOperator lower_witness = DensityOperator::maximally_mixed(1);
    DensityOperator upper_witness = DensityOperator::maximally_mixed(1);
    PrevisionStatus status = PrevisionStatus::Exact;
    /// The same bounds recomputed from the price definition by bisection.
    double lower_by_bisection = 0.0;
    double upper_by_bisection = 0.0;
};

/// The credal set {rho >= 0, tr rho = 1, tr(rho A_i) >= 0} as a program
/// template; callers fill in the objective.
inline SpectrahedronProgram credal_set_description(const NaturalExtensionModel& model) {
    model.require_consistent();
    SpectrahedronProgram prog;
    prog.objective = HermitianOperator::zero(model.dim());
    for (const auto& g : model.assessment().generators()) prog.constraints.push_back({g, 0.0});
    return prog;
}

/// Largest alpha in [lo, hi] with accept(alpha), assuming accept is
/// monotone decreasing, accept(lo) holds and accept(hi) fails. Stops once
/// the bracket is narrower than `width`.
inline double bisect_supremum(double lo, double hi, double width, const std::function<bool(double)>& accept) {
    for (int it = 0; it < 64 && hi - lo > width; ++it) {
        const double mid = 0.5 * (lo + hi);
        (accept(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

struct OneSided {
    double value;
    DensityOperator witness;
};

inline OneSided minimum_over_credal_set(const NaturalExtensionModel& model, const HermitianOperator& b) {
    SpectrahedronProgram prog = credal_set_description(model);
    prog.objective = b;
    const Certificate c = minimize_trace(prog, model.tolerances());
    if (c.status == CertificateStatus::Infeasible)
        throw Error(ErrorKind::EmptyCredalSet, "no density satisfies tr(rho A_i) >= 0 for every generator");
    return {c.objective_value, *c.density};
}

/// sup{alpha : B - alpha I in E(A)}, boundary answers counting as nonmember.
inline double lower_price_by_bisection(const NaturalExtensionModel& model, const HermitianOperator& b) {
    const Tolerances& tol = model.tolerances();
    const int d = model.dim();
    const double lo = b.min_eigenvalue() - 2.0 * tol.margin - tol.duality;
    const double hi = b.max_eigenvalue();
    return bisect_supremum(lo, hi, tol.duality / 10.0, [&](double alpha) {
        return model.member(b - alpha * HermitianOperator::identity(d)).status == Membership::Member;
    });
}

} // namespace detail

/// Lower and upper prevision of B, computed as the minimum and maximum of
/// tr(rho B) over the credal set and cross-checked against the price
/// definition sup{alpha : B - alpha I desirable}. Disagreement beyond
/// `Tolerances::duality` yields boundary status.
inline PrevisionResult lower_prevision(const NaturalExtensionModel& model, const HermitianOperator& b,
                                       bool cross_check = true) {
    model.require_consistent();
    if (b.dim() != model.dim()) throw Error(ErrorKind::DimensionMismatch, "measurement dim differs from model dim");
    const Tolerances& tol = model.tolerances();

    const detail::OneSided lo = detail::minimum_over_credal_set(model, b);
    const detail::OneSided hi = detail::minimum_over_credal_set(model, -b);
    PrevisionResult r;
    r.lower = lo.value;
    r.upper = -hi.value;
    r.lower_witness = lo.witness;
    r.upper_witness = hi.witness;
    if (r.upper < r.lower) r.upper = r.lower = 0.5 * (r.lower + r.upper);

    if (cross_check) {
        r.lower_by_bisection = detail::lower_price_by_bisection(model, b);
        r.upper_by_bisection = -detail::lower_price_by_bisection(model, -b);
        if (std::abs(r.lower_by_bisection - r.lower) > tol.duality ||
            std::abs(r.upper_by_bisection - r.upper) > tol.duality)
            r.status = PrevisionStatus::Boundary;
    } else {
        r.lower_by_bisection = r.lower;
        r.upper_by_bisection = r.upper;
    }
    return r;
}

inline PrevisionResult upper_prevision(const NaturalExtensionModel& model, const HermitianOperator& b,
                                       bool cross_check = true) {
    PrevisionResult r = lower_prevision(model, -b, cross_check);
    std::swap(r.lower, r.upper);
    r.lower = -r.lower;
    r.upper = -r.upper;
    std::swap(r.lower_by_bisection, r.upper_by_bisection);
    r.lower_by_bisection = -r.lower_by_bisection;
    r.upper_by_bisection = -r.upper_by_bisection;
    std::swap(r.lower_witness, r.upper_witness);
    return r;
}

/// The canonical Hermitian basis of H(C^d): diagonal units E_jj, symmetric
/// pairs |j><k| + |k><j| and antisymmetric pairs -i|j><k| + i|k><j|, j < k.
inline std::vector<HermitianOperator> canonical_hermitian_basis(int d) {
    std::vector<HermitianOperator> out;
    for (int j = 0; j < d; ++j) {
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        m(j, j) = 1.0;
        out.push_back(HermitianOperator::from_hermitian_part(m));
    }
    const Complex i(0.0, 1.0);
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            ComplexMatrix s = ComplexMatrix::Zero(d, d);
            s(j, k) = s(k, j) = 1.0;
            out.push_back(HermitianOperator::from_hermitian_part(s));
            ComplexMatrix t = ComplexMatrix::Zero(d, d);
            t(j, k) = -i;
            t(k, j) = i;
            out.push_back(HermitianOperator::from_hermitian_part(t));
        }
    return out;
}

/// The values tr(rho E) of a density on a list of measurements.
inline std::vector<std::pair<HermitianOperator, double>> linear_prevision_values(
    const DensityOperator& rho, const std::vector<HermitianOperator>& basis) {
    std::vector<std::pair<HermitianOperator, double>> out;
    for (const auto& e : basis) out.emplace_back(e, rho.expectation(e));
    return out;
}

/// The unique density rho with tr(rho E) = value(E) for every listed E.
///
/// The listed measurements must span H(C^d); the d^2 real coordinates of rho
/// are then recovered by least squares. A residual above the reconstruction
/// tolerance, a trace other than one, or a negative eigenvalue means the
/// values do not come from a linear prevision.
inline DensityOperator density_of_linear_prevision(const std::vector<std::pair<HermitianOperator, double>>& values,
                                                   const Tolerances& tol = {}) {
    if (values.empty()) throw Error(ErrorKind::IncompleteBasis, "no values given");
    const int d = values.front().first.dim();
    const int n = d * d;
    const int rows = static_cast<int>(values.size());
    // Coordinates of rho: Re rho_jj, then (Re rho_jk, Im rho_jk) for j < k.
    RealMatrix m(rows, n);
    RealVector v(rows);
    for (int r = 0; r < rows; ++r) {
        const auto& [e, val] = values[r];
        if (e.dim() != d) throw Error(ErrorKind::DimensionMismatch, "basis element dims differ");
        // tr(rho E) = sum_jj rho_jj E_jj + sum_{j<k} 2 Re(rho_jk conj(E_jk)).
        int c = 0;
        for (int j = 0; j < d; ++j) m(r, c++) = e(j, j).real();
        for (int j = 0; j < d; ++j)
            for (int k = j + 1; k < d; ++k) {
                m(r, c++) = 2.0 * e(j, k).real();
                m(r, c++) = 2.0 * e(j, k).imag();
            }
        v(r) = val;
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(m);
    qr.setThreshold(1e-10);
    if (qr.rank() < n)
        throw Error(ErrorKind::IncompleteBasis, "values span only " + std::to_string(qr.rank()) + " of " +
                                                    std::to_string(n) + " dimensions");
    const RealVector x = qr.solve(v);
    const double residual = (m * x - v).cwiseAbs().maxCoeff();
    if (residual > tol.reconstruction * std::max(1.0, v.cwiseAbs().maxCoeff()) * n)
        throw Error(ErrorKind::NotADensity, "values are not linear in the measurement (residual " +
                                                std::to_string(residual) + ")");
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    int c = 0;
    for (int j = 0; j < d; ++j) rho(j, j) = x(c++);
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            rho(j, k) = Complex(x(c), x(c + 1));
            rho(k, j) = std::conj(rho(j, k));
            c += 2;
        }
    return DensityOperator(HermitianOperator::from_hermitian_part(rho), tol);
}

/// Generators whose credal set is the box {rho : |tr(rho E) - tr(rho0 E)| <= eta}
/// over the canonical basis: +-(E - tr(rho0 E) I) + eta I. As eta -> 0 the
/// model approaches the linear prevision tr(rho0 .).
inline Assessment near_linear_assessment(const DensityOperator& rho0, double eta) {
    const int d = rho0.dim();
    std::vector<HermitianOperator> gens;
    const HermitianOperator id = HermitianOperator::identity(d);
    for (const auto& e : canonical_hermitian_basis(d)) {
        const HermitianOperator centred = e - rho0.expectation(e) * id;
        gens.push_back(centred + eta * id);
        gens.push_back(-centred + eta * id);
    }
    return Assessment(d, std::move(gens));
}

} // namespace qdm

#endif // QDM_PREVISIONS_HPP
