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

#ifndef QDM_CONE_ORACLE_HPP
#define QDM_CONE_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qdm/density.hpp"
#include "qdm/hermitian.hpp"
#include "qdm/sdp.hpp"

namespace qdm {

/// Real symmetric image [[Re A, -Im A], [Im A, Re A]] of a Hermitian A.
/// A >= 0 iff the image is >= 0, and tr(A B) = tr(emb(A) emb(B)) / 2.
inline RealMatrix real_embedding(const HermitianOperator& a) {
    const int d = a.dim();
    RealMatrix out(2 * d, 2 * d);
    const RealMatrix re = a.matrix().real();
    const RealMatrix im = a.matrix().imag();
    out.topLeftCorner(d, d) = re;
    out.bottomRightCorner(d, d) = re;
    out.topRightCorner(d, d) = -im;
    out.bottomLeftCorner(d, d) = im;
    return out;
}

/// Hermitian operator sigma with <emb(A), X> = tr(sigma A) for every Hermitian A.
inline HermitianOperator from_real_embedding(const RealMatrix& x) {
    const int d = static_cast<int>(x.rows() / 2);
    const RealMatrix top = x.topLeftCorner(d, d);
    const RealMatrix bottom = x.bottomRightCorner(d, d);
    const RealMatrix lower = x.bottomLeftCorner(d, d);
    ComplexMatrix m(d, d);
    m.real() = top + bottom;
    m.imag() = lower - lower.transpose();
    return HermitianOperator::from_hermitian_part(m);
}

/// Builds the dual-form program
///
///   max  sum_j b_j y_j
///   s.t. C - sum_j y_j F_j >= 0        (one d x d Hermitian LMI)
///        c_r - sum_j f_rj y_j >= 0     (scalar rows)
///
/// and lowers it to the real block SDP. The primal variable of the LMI is a
/// PSD Hermitian operator sigma with tr(sigma F_j) + sum_r f_rj x_r = b_j.
class LmiBuilder {
public:
    LmiBuilder(int dim, int num_vars)
        : dim_(dim), objective_(RealVector::Zero(num_vars)), constant_(HermitianOperator::zero(dim)),
          coefficients_(num_vars, HermitianOperator::zero(dim)) {}

    void objective(int var, double coef) { objective_(var) = coef; }
    void constant(const HermitianOperator& c) { constant_ = c; }
    void coefficient(int var, const HermitianOperator& f) { coefficients_[var] = f; }

    /// Adds the row  c - sum f_j y_j >= 0.
    int row(double c, std::vector<std::pair<int, double>> coeffs) {
        rows_.push_back({c, std::move(coeffs)});
        return static_cast<int>(rows_.size()) - 1;
    }

    int num_vars() const { return static_cast<int>(objective_.size()); }

    sdp::Problem build() const {
        sdp::Problem p;
        const int n = 2 * dim_;
        const int rows = static_cast<int>(rows_.size());
        p.psd_sizes = {n};
        p.lp_size = rows;
        p.c.psd = {real_embedding(constant_)};
        p.c.lp = RealVector(rows);
        for (int r = 0; r < rows; ++r) p.c.lp(r) = rows_[r].constant;
        p.b = objective_;
        for (int j = 0; j < num_vars(); ++j) {
            sdp::BlockMatrix a;
            a.psd = {real_embedding(coefficients_[j])};
            a.lp = RealVector::Zero(rows);
            p.a.push_back(std::move(a));
        }
        for (int r = 0; r < rows; ++r)
            for (const auto& [var, f] : rows_[r].coeffs) p.a[var].lp(r) += f;
        return p;
    }

    /// C - sum y_j F_j evaluated exactly for a candidate y.
    HermitianOperator slack(const RealVector& y) const {
        HermitianOperator s = constant_;
        for (int j = 0; j < num_vars(); ++j)
            if (y(j) != 0.0) s -= y(j) * coefficients_[j];
        return s;
    }

private:
    struct Row {
        double constant;
        std::vector<std::pair<int, double>> coeffs;
    };

    int dim_;
    RealVector objective_;
    HermitianOperator constant_;
    std::vector<HermitianOperator> coefficients_;
    std::vector<Row> rows_;
};

enum class Strictness { Weak, Strict };
enum class Combination { Nonnegative, NonnegativeNontrivial };
enum class CertificateStatus { Feasible, Infeasible, Boundary };

inline const char* to_string(CertificateStatus s) {
    switch (s) {
    case CertificateStatus::Feasible: return "feasible";
    case CertificateStatus::Infeasible: return "infeasible";
    case CertificateStatus::Boundary: return "boundary";
    }
    return "?";
}

/// Does some lambda >= 0 give  target - sum_i lambda_i generators_i >= 0
/// (weak) or >= eps I (strict)?
struct ConeFeasibilityProblem {
    std::vector<HermitianOperator> generators;
    HermitianOperator target;
    Strictness strictness = Strictness::Weak;
    double epsilon = 1e-6;
    Combination combination = Combination::Nonnegative;
};

/// Minimise tr(sigma B) over sigma >= 0 with tr(sigma N) = 1 and
/// tr(sigma A_i) >= b_i. N defaults to the identity, which makes the
/// feasible set a set of density operators.
struct SpectrahedronProgram {
    struct Constraint {
        HermitianOperator op;
        double bound = 0.0;
    };

    HermitianOperator objective;
    std::vector<Constraint> constraints;
    std::optional<HermitianOperator> normalizer;
    /// Upper bound on tr(sigma); only meaningful with a normalizer other
    /// than the identity, where it keeps the feasible set compact.
    std::optional<double> trace_cap;

    int dim() const { return objective.dim(); }
};

/// Self-auditing solver output. Every number here was recomputed from the
/// witnesses by direct linear algebra, not read off the solver.
struct Certificate {
    CertificateStatus status = CertificateStatus::Boundary;
    /// Coefficients lambda (feasibility) or the dual multipliers of the
    /// constraints (optimisation).
    std::vector<double> coefficients;
    /// Primal witness: a density operator for feasibility/separation, or the
    /// minimiser of a spectrahedron program with identity normalizer.
    std::optional<DensityOperator> density;
    /// Minimiser of a spectrahedron program, normalised by N.
    std::optional<HermitianOperator> primal_operator;
    /// Best verified value: the margin for feasibility, tr(sigma B) for
    /// optimisation.
    double objective_value = 0.0;
    /// Verified bracket around the exact optimum.
    double lower_bound = -std::numeric_limits<double>::infinity();
    double upper_bound = std::numeric_limits<double>::infinity();
    /// For the nontrivial homogenised test: the weight on the target.
    double target_weight = 1.0;
    int iterations = 0;
    bool solver_converged = false;
};

namespace detail {

inline void require_dims(const std::vector<HermitianOperator>& ops, int dim, const Tolerances& tol) {
    if (dim > tol.max_dim)
        throw Error(ErrorKind::DimensionTooLarge, "dim " + std::to_string(dim) + " exceeds cap " + std::to_string(tol.max_dim));
    for (const auto& op : ops)
        if (op.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "generator dim differs from target dim");
}

inline double safe_norm(const HermitianOperator& a) {
    const double n = a.operator_norm();
    return n > 0.0 ? n : 1.0;
}

} // namespace detail

/// Decides the conic feasibility question by maximising the margin t in
///
///   nonneg:      target - sum lambda_i A_i >= t I,   lambda >= 0
///   nontrivial:  w target - sum mu_i A_i >= t I,     mu in the simplex, 0 <= w <= W
///
/// The nontrivial form is the homogenisation of "some lambda != 0"; for a
/// zero target it reduces to normalising sum lambda_i = 1. Classification:
///
///   weak:   feasible if t >= -cert,   infeasible if t < -eps
///   strict: feasible if t >= eps,     infeasible if t < -cert
///
/// with everything in between reported as boundary.
inline Certificate check_feasible(const ConeFeasibilityProblem& prob, const Tolerances& tol = {}) {
    const int d = prob.target.dim();
    detail::require_dims(prob.generators, d, tol);
    if (prob.strictness == Strictness::Strict && !(prob.epsilon > 0.0))
        throw Error(ErrorKind::InvalidArgument, "strict margin must be positive");

    const int m = static_cast<int>(prob.generators.size());
    std::vector<double> gscale(m);
    std::vector<HermitianOperator> gens;
    for (int i = 0; i < m; ++i) {
        gscale[i] = detail::safe_norm(prob.generators[i]);
        gens.push_back(prob.generators[i] / gscale[i]);
    }
    const double target_norm = prob.target.operator_norm();
    const double eps = prob.epsilon;

    auto classify = [&](Certificate& c) {
        const bool strict = prob.strictness == Strictness::Strict;
        const double feas_at = strict ? eps : -tol.certificate;
        const double infeas_below = strict ? -tol.certificate : -eps;
        if (c.lower_bound >= feas_at) c.status = CertificateStatus::Feasible;
        else if (c.upper_bound < infeas_below) c.status = CertificateStatus::Infeasible;
        else c.status = CertificateStatus::Boundary;
    };

    Certificate cert;

    if (m == 0) {
        // Pure PSD test on the target; the nontrivial variant has no
        // combination to offer.
        if (prob.combination == Combination::NonnegativeNontrivial) {
            cert.status = CertificateStatus::Infeasible;
            cert.objective_value = cert.lower_bound = cert.upper_bound = -std::numeric_limits<double>::infinity();
            cert.solver_converged = true;
            return cert;
        }
        const Spectrum s = spectral_decompose(prob.target);
        cert.objective_value = cert.lower_bound = cert.upper_bound = s.eigenvalues.front();
        cert.density = DensityOperator::pure(s.eigenvectors.front());
        cert.solver_converged = true;
        classify(cert);
        return cert;
    }

    if (prob.combination == Combination::Nonnegative) {
        // y = (t, lambda_1..lambda_m); rows: lambda_i >= 0, cap - sum lambda >= 0.
        const double cap = 1e4 * std::max(1.0, target_norm);
        LmiBuilder lmi(d, m + 1);
        lmi.objective(0, 1.0);
        lmi.constant(prob.target);
        lmi.coefficient(0, HermitianOperator::identity(d));
        std::vector<std::pair<int, double>> cap_row;
        for (int i = 0; i < m; ++i) {
            lmi.coefficient(i + 1, gens[i]);
            lmi.row(0.0, {{i + 1, -1.0}});
            cap_row.push_back({i + 1, 1.0});
        }
        lmi.row(cap, cap_row);
        const sdp::Solution sol = sdp::solve(lmi.build());
        cert.iterations = sol.iterations;
        cert.solver_converged = sol.status == sdp::Status::Optimal;

        std::vector<double> lambda(m);
        HermitianOperator combo = prob.target;
        for (int i = 0; i < m; ++i) {
            lambda[i] = std::max(0.0, sol.y(i + 1));
            combo -= lambda[i] * gens[i];
        }
        cert.lower_bound = combo.min_eigenvalue();

        const DensityOperator rho = DensityOperator::nearest(from_real_embedding(sol.x.psd[0]));
        double worst = 0.0;
        for (const auto& g : gens) worst = std::max(worst, -rho.expectation(g));
        cert.upper_bound = rho.expectation(prob.target) + cap * worst;
        cert.density = rho;
        for (int i = 0; i < m; ++i) lambda[i] /= gscale[i];
        cert.coefficients = lambda;
    } else {
        // Homogenised: y = (t, mu_1..mu_{m-1}, w), mu_m = 1 - sum mu_i.
        const bool has_target = target_norm > 0.0;
        const double w_cap = 1e6;
        const int n_mu = m - 1;
        const int w_var = has_target ? 1 + n_mu : -1;
        LmiBuilder lmi(d, 1 + n_mu + (has_target ? 1 : 0));
        lmi.objective(0, 1.0);
        lmi.constant(-gens[m - 1]);
        lmi.coefficient(0, HermitianOperator::identity(d));
        std::vector<std::pair<int, double>> last_row;
        for (int i = 0; i < n_mu; ++i) {
            lmi.coefficient(1 + i, gens[i] - gens[m - 1]);
            lmi.row(0.0, {{1 + i, -1.0}});
            last_row.push_back({1 + i, 1.0});
        }
        if (n_mu > 0) lmi.row(1.0, last_row);
        if (has_target) {
            lmi.coefficient(w_var, -prob.target);
            lmi.row(0.0, {{w_var, -1.0}});
            lmi.row(w_cap, {{w_var, 1.0}});
        }
        const sdp::Solution sol = sdp::solve(lmi.build());
        cert.iterations = sol.iterations;
        cert.solver_converged = sol.status == sdp::Status::Optimal;

        // Project mu onto the simplex by clipping and renormalising.
        std::vector<double> mu(m, 0.0);
        double rest = 1.0;
        for (int i = 0; i < n_mu; ++i) {
            mu[i] = std::max(0.0, sol.y(1 + i));
            rest -= mu[i];
        }
        mu[m - 1] = std::max(0.0, rest);
        double total = 0.0;
        for (double v : mu) total += v;
        for (double& v : mu) v /= total;
        const double w = has_target ? std::clamp(sol.y(w_var), 0.0, w_cap) : 1.0;

        HermitianOperator combo = has_target ? w * prob.target : HermitianOperator::zero(d);
        for (int i = 0; i < m; ++i) combo -= mu[i] * gens[i];
        cert.lower_bound = combo.min_eigenvalue();

        // Any density rho bounds the margin from above:
        // t <= max_{w, mu} tr(rho (w target - sum mu_i A_i)).
        const DensityOperator rho = DensityOperator::nearest(from_real_embedding(sol.x.psd[0]));
        double best_gen = -std::numeric_limits<double>::infinity();
        for (const auto& g : gens) best_gen = std::max(best_gen, -rho.expectation(g));
        const double tgt = has_target ? w_cap * std::max(0.0, rho.expectation(prob.target)) : 0.0;
        cert.upper_bound = best_gen + tgt;
        cert.density = rho;
        cert.target_weight = w;

        // Report lambda = mu / w, the coefficients acting on the raw target.
        std::vector<double> lambda(m);
        const double scale = (has_target && w > 0.0) ? 1.0 / w : 1.0;
        for (int i = 0; i < m; ++i) lambda[i] = mu[i] * scale / gscale[i];
        cert.coefficients = lambda;
    }

    cert.objective_value = cert.lower_bound;
    classify(cert);
    if (cert.status == CertificateStatus::Boundary && !cert.solver_converged &&
        cert.upper_bound - cert.lower_bound > tol.certificate)
        throw Error(ErrorKind::SolverStall, "cone feasibility solve stalled after " +
                                                std::to_string(cert.iterations) + " iterations without a certificate");
    return cert;
}

/// Minimises tr(sigma B) over the spectrahedron; see SpectrahedronProgram.
///
/// Dual:  max alpha + sum b_i lambda_i - cap kappa
///        s.t. B - alpha N - sum lambda_i A_i + kappa I >= 0,  lambda, kappa >= 0.
///
/// An elastic cap on sum lambda_i keeps the dual bounded; when it binds the
/// constraint set is empty and the status is infeasible, with the dual
/// multipliers as the separating certificate.
inline Certificate minimize_trace(const SpectrahedronProgram& prog, const Tolerances& tol = {}) {
    const int d = prog.dim();
    std::vector<HermitianOperator> ops;
    for (const auto& c : prog.constraints) ops.push_back(c.op);
    detail::require_dims(ops, d, tol);
    const HermitianOperator normalizer = prog.normalizer.value_or(HermitianOperator::identity(d));
    normalizer.require_same_dim(prog.objective);
    const bool identity_norm = !prog.normalizer.has_value();
    const bool capped = prog.trace_cap.has_value();

    const int m = static_cast<int>(prog.constraints.size());
    std::vector<double> cscale(m);
    std::vector<HermitianOperator> gens;
    std::vector<double> bounds;
    for (int i = 0; i < m; ++i) {
        cscale[i] = detail::safe_norm(prog.constraints[i].op);
        gens.push_back(prog.constraints[i].op / cscale[i]);
        bounds.push_back(prog.constraints[i].bound / cscale[i]);
    }

    const double obj_norm = prog.objective.operator_norm();
    const double lambda_cap = 1e4 * std::max(1.0, obj_norm);

    // y = (alpha, lambda_1..lambda_m, [kappa])
    const int kappa_var = capped ? m + 1 : -1;
    LmiBuilder lmi(d, m + 1 + (capped ? 1 : 0));
    lmi.objective(0, 1.0);
    lmi.constant(prog.objective);
    lmi.coefficient(0, normalizer);
    std::vector<std::pair<int, double>> cap_row;
    for (int i = 0; i < m; ++i) {
        lmi.objective(i + 1, bounds[i]);
        lmi.coefficient(i + 1, gens[i]);
        lmi.row(0.0, {{i + 1, -1.0}});
        cap_row.push_back({i + 1, 1.0});
    }
    int cap_row_index = -1;
    if (m > 0) cap_row_index = lmi.row(lambda_cap, cap_row);
    if (capped) {
        lmi.objective(kappa_var, -*prog.trace_cap);
        lmi.coefficient(kappa_var, -HermitianOperator::identity(d));
        lmi.row(0.0, {{kappa_var, -1.0}});
    }

    Certificate cert;
    if (m == 0 && identity_norm) {
        const Spectrum s = spectral_decompose(prog.objective);
        cert.status = CertificateStatus::Feasible;
        cert.objective_value = cert.lower_bound = cert.upper_bound = s.eigenvalues.front();
        cert.density = DensityOperator::pure(s.eigenvectors.front());
        cert.primal_operator = cert.density->op();
        cert.solver_converged = true;
        return cert;
    }

    const sdp::Solution sol = sdp::solve(lmi.build());
    cert.iterations = sol.iterations;
    cert.solver_converged = sol.status == sdp::Status::Optimal;

    // Verified lower bound from the dual point.
    RealVector y = sol.y;
    for (int i = 0; i < m; ++i) y(i + 1) = std::max(0.0, y(i + 1));
    if (capped) y(kappa_var) = std::max(0.0, y(kappa_var));
    const double slack_min = lmi.slack(y).min_eigenvalue();
    double dual_value = y(0);
    for (int i = 0; i < m; ++i) dual_value += bounds[i] * y(i + 1);
    if (capped) dual_value -= *prog.trace_cap * y(kappa_var);
    const double trace_bound = identity_norm ? 1.0 : (capped ? *prog.trace_cap : 1.0);
    cert.lower_bound = dual_value + std::min(0.0, slack_min) * trace_bound;

    cert.coefficients.resize(m);
    for (int i = 0; i < m; ++i) cert.coefficients[i] = y(i + 1) / cscale[i];

    // Primal point: clip to PSD and normalise tr(sigma N) = 1.
    const HermitianOperator raw = from_real_embedding(sol.x.psd[0]);
    const Spectrum s = spectral_decompose(raw);
    ComplexMatrix clipped = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const auto& e = s.eigenvectors[k].amplitudes();
        clipped += std::max(0.0, s.eigenvalues[k]) * (e * e.adjoint());
    }
    HermitianOperator sigma = HermitianOperator::from_hermitian_part(clipped);
    const double norm_value = trace_product(sigma, normalizer);
    double worst_violation = 0.0;
    if (norm_value > 0.0) {
        sigma = sigma / norm_value;
        for (int i = 0; i < m; ++i)
            worst_violation = std::max(worst_violation, bounds[i] - trace_product(sigma, gens[i]));
        if (capped) worst_violation = std::max(worst_violation, (sigma.trace() - *prog.trace_cap) / *prog.trace_cap);
    } else {
        worst_violation = std::numeric_limits<double>::infinity();
    }

    const bool cap_binding = cap_row_index >= 0 && sol.x.lp(cap_row_index) > tol.certificate;
    if (worst_violation > tol.certificate || cap_binding) {
        cert.status = CertificateStatus::Infeasible;
        cert.objective_value = std::numeric_limits<double>::infinity();
        cert.upper_bound = std::numeric_limits<double>::infinity();
        if (!cert.solver_converged && !cap_binding)
            throw Error(ErrorKind::SolverStall, "spectrahedron solve stalled after " +
                                                    std::to_string(cert.iterations) + " iterations");
        return cert;
    }

    cert.status = CertificateStatus::Feasible;
    cert.objective_value = trace_product(sigma, prog.objective);
    cert.upper_bound = cert.objective_value;
    cert.primal_operator = sigma;
    if (identity_norm) cert.density = DensityOperator::nearest(sigma);
    if (!cert.solver_converged && cert.upper_bound - cert.lower_bound > tol.optimality)
        throw Error(ErrorKind::SolverStall, "spectrahedron solve stalled after " +
                                                std::to_string(cert.iterations) + " iterations");
    return cert;
}

} // namespace qdm

#endif // QDM_CONE_ORACLE_HPP
