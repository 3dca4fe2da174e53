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

#ifndef QDM_CONDITIONING_HPP
#define QDM_CONDITIONING_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "qdm/previsions.hpp"

namespace qdm {

/// What You learn: the state lies in V, or in one of the mutually
/// orthogonal subspaces V_1, ..., V_r.
class ConditioningEvent {
public:
    explicit ConditioningEvent(std::vector<Subspace> subspaces, const Tolerances& tol = {})
        : subspaces_(std::move(subspaces)) {
        if (subspaces_.empty()) throw Error(ErrorKind::InvalidSubspace, "event needs at least one subspace");
        for (std::size_t k = 0; k < subspaces_.size(); ++k) {
            if (subspaces_[k].ambient_dim() != subspaces_.front().ambient_dim())
                throw Error(ErrorKind::DimensionMismatch, "event subspaces live in different spaces");
            for (std::size_t l = k + 1; l < subspaces_.size(); ++l)
                if (subspaces_[k].overlap(subspaces_[l]) > tol.orthonormality)
                    throw Error(ErrorKind::NonOrthogonalFamily,
                                "subspaces " + std::to_string(k) + " and " + std::to_string(l) + " are not orthogonal");
        }
    }
    explicit ConditioningEvent(Subspace v) : ConditioningEvent(std::vector<Subspace>{std::move(v)}) {}

    int dim() const { return subspaces_.front().ambient_dim(); }
    const std::vector<Subspace>& subspaces() const { return subspaces_; }
    bool is_family() const { return subspaces_.size() > 1; }

private:
    std::vector<Subspace> subspaces_;
};

inline ProjectionMap build_projection(const ConditioningEvent& e, const Tolerances& tol = {}) {
    return ProjectionMap(e.is_family() ? ProjectionKind::OrthogonalFamily : ProjectionKind::Subspace, e.subspaces(),
                         tol);
}

/// The updated model D|p on H together with its reduced form on rng(p).
///
/// Ambient membership follows the conditioned set
///   A member  iff  the blocks of p(A) are positive definite (background)
///             or   p(A) is a member of the original model.
/// The reduced model is the natural extension, on the concatenated block
/// space, of the compressions of those p(G) (G a generator) that are members.
/// It is built on first use and cached; copies share the cache and concurrent
/// first uses build it once.
class UpdatedModel {
public:
    UpdatedModel(const NaturalExtensionModel& base, ConditioningEvent event)
        : base_(base), event_(std::move(event)), projection_(build_projection(event_, base.tolerances())),
          cache_(std::make_shared<Cache>()) {}

    int dim() const { return base_.dim(); }
    const Tolerances& tolerances() const { return base_.tolerances(); }
    const ConditioningEvent& event() const { return event_; }
    const ProjectionMap& projection() const { return projection_; }
    const NaturalExtensionModel& base() const { return base_; }
    /// Throws ReducedInconsistent when the reduced assessment is inconsistent.
    const NaturalExtensionModel& reduced_model() const {
        std::call_once(cache_->once, [&] { cache_->model.emplace(make_reduced(base_, projection_)); });
        if (cache_->model->consistency() == Consistency::Inconsistent)
            throw Error(ErrorKind::ReducedInconsistent, "reduced assessment has a nonpositive combination");
        return *cache_->model;
    }

    void require_consistent() const { base_.require_consistent(); }

    MembershipResult member(const HermitianOperator& a) const {
        require_consistent();
        const Tolerances& tol = tolerances();
        MembershipResult out;
        const double bg = range_min_eigenvalue(projection_, a);
        out.background_margin = bg;
        if (bg >= tol.margin) {
            out.status = Membership::Member;
            out.branch = MembershipBranch::Background;
            out.certificate.status = CertificateStatus::Feasible;
            out.certificate.objective_value = out.certificate.lower_bound = bg;
            out.certificate.solver_converged = true;
            return out;
        }
        MembershipResult r = base_.member(projection_.apply(a));
        r.background_margin = bg;
        if (r.status == Membership::Member) {
            r.branch = MembershipBranch::Generators;
            return r;
        }
        if (r.status == Membership::Nonmember && bg > tol.eigenvalue) r.status = Membership::Boundary;
        r.branch = MembershipBranch::None;
        return r;
    }

    /// Membership of the compression of p(A) in the reduced model, with the
    /// blockwise background test in front.
    MembershipResult reduced_member(const HermitianOperator& a) const {
        return reduced_model().member(compress_block_diagonal(projection_, projection_.apply(a)));
    }

    /// Members of the form p(M) + k with M a member of the reduced model
    /// lifted back to H and k an indifferent measurement.
    HermitianOperator sample_member(Rng& rng) const {
        const HermitianOperator c = reduced_model().sample_member(rng);
        // Keep only the block-diagonal part; blocks of a PSD bump stay PSD.
        HermitianOperator lifted = expand_from_range(projection_, c);
        const HermitianOperator k0 = random_hermitian(dim(), rng);
        lifted += uniform(0.0, 1.0, rng) * (k0 - projection_.apply(k0));
        return lifted;
    }

private:
    static NaturalExtensionModel make_reduced(const NaturalExtensionModel& base, const ProjectionMap& p) {
        base.require_consistent();
        std::vector<HermitianOperator> gens;
        for (const auto& g : base.assessment().generators()) {
            const HermitianOperator pg = p.apply(g);
            if (pg.operator_norm() <= base.tolerances().indifference) continue;
            if (base.member(pg).status == Membership::Member) gens.push_back(compress_block_diagonal(p, pg));
        }
        return NaturalExtensionModel(Assessment(p.range_dim(), std::move(gens)), base.tolerances());
    }

    struct Cache {
        std::once_flag once;
        std::optional<NaturalExtensionModel> model;
    };

    NaturalExtensionModel base_;
    ConditioningEvent event_;
    ProjectionMap projection_;
    std::shared_ptr<Cache> cache_;
};

inline UpdatedModel update_model(const NaturalExtensionModel& model, const ConditioningEvent& event) {
    model.require_consistent();
    if (event.dim() != model.dim()) throw Error(ErrorKind::DimensionMismatch, "event dim differs from model dim");
    return UpdatedModel(model, event);
}

/// Generalised Lueders rule: p(rho) / tr(p(rho)).
inline DensityOperator update_density(const DensityOperator& rho, const ConditioningEvent& event,
                                      const Tolerances& tol = {}) {
    if (rho.dim() != event.dim()) throw Error(ErrorKind::DimensionMismatch, "density dim differs from event dim");
    const ProjectionMap p = build_projection(event, tol);
    const HermitianOperator prho = p.apply(rho.op());
    const double mass = prho.trace();
    if (mass <= tol.conditioning)
        throw Error(ErrorKind::ZeroProbabilityEvent, "tr(p(rho)) = " + std::to_string(mass));
    return DensityOperator(prho / mass, tol);
}

struct TotalProbabilityTerm {
    int subspace = 0;
    double weight = 0.0;
    DensityOperator density = DensityOperator::maximally_mixed(1);
};

/// rho_S as the mixture sum_k w_k rho_{V_k}, with w_k proportional to
/// tr(P_k rho P_k). Branches with zero mass are left out.
inline std::vector<TotalProbabilityTerm> total_probability_decomposition(const DensityOperator& rho,
                                                                         const ConditioningEvent& event,
                                                                         const Tolerances& tol = {}) {
    if (rho.dim() != event.dim()) throw Error(ErrorKind::DimensionMismatch, "density dim differs from event dim");
    std::vector<double> mass;
    double total = 0.0;
    for (const auto& v : event.subspaces()) {
        const HermitianOperator p = projector_of(v);
        mass.push_back(trace_product(p, rho.op()));
        total += mass.back();
    }
    if (total <= tol.conditioning)
        throw Error(ErrorKind::ZeroProbabilityEvent, "every branch has zero mass");
    std::vector<TotalProbabilityTerm> out;
    for (std::size_t k = 0; k < mass.size(); ++k) {
        if (mass[k] <= tol.conditioning) continue;
        out.push_back({static_cast<int>(k), mass[k] / total,
                       update_density(rho, ConditioningEvent(event.subspaces()[k]), tol)});
    }
    return out;
}

/// Conditional lower and upper previsions of A.
struct ConditionalPrevision {
    /// Range of tr(rho_event A) over the updated credal set, from the
    /// linear-fractional program.
    double lower = 0.0;
    double upper = 0.0;
    std::optional<HermitianOperator> lower_witness;
    std::optional<HermitianOperator> upper_witness;
    /// The same bounds from the updated set of desirable measurements:
    /// sup{alpha : A - alpha I in D|p}.
    double lower_by_desirability = 0.0;
    double upper_by_desirability = 0.0;
    /// P(p(A)) / P(p(I)) when the model is linear on both operands.
    std::optional<double> linear_value;
    /// Lower and upper probability of the event, P(p(I)).
    double event_lower = 0.0;
    double event_upper = 0.0;
    PrevisionStatus status = PrevisionStatus::Exact;
};

namespace detail {

/// min tr(sigma p(A)) s.t. sigma >= 0, tr(sigma p(I)) = 1, tr(sigma A_i) >= 0,
/// tr sigma <= 1 / P(p(I)). The minimiser normalised to unit trace is the
/// conditioned density.
inline std::pair<double, HermitianOperator> conditional_minimum(const NaturalExtensionModel& model,
                                                                const ProjectionMap& p, const HermitianOperator& a,
                                                                double event_lower) {
    SpectrahedronProgram prog = credal_set_description(model);
    prog.objective = p.apply(a);
    prog.normalizer = p.total_projector();
    prog.trace_cap = 1.0 / event_lower;
    const Certificate c = minimize_trace(prog, model.tolerances());
    if (c.status == CertificateStatus::Infeasible)
        throw Error(ErrorKind::EmptyCredalSet, "updated credal set is empty");
    const HermitianOperator sigma = *c.primal_operator;
    const HermitianOperator psigma = p.apply(sigma);
    return {c.objective_value, psigma / psigma.trace()};
}

} // namespace detail

/// Conditional previsions given the event.
///
/// The interval is the range of tr(rho_event A) over the conditioned credal
/// set {p(rho)/tr(p(rho))}, found with the Charnes-Cooper substitution
/// sigma = rho / tr(p(rho)). It is cross-checked against the updated set of
/// desirable measurements and, for linear models, against the ratio
/// P(p(A)) / P(p(I)). Events whose lower probability is below
/// `Tolerances::conditioning` are refused.
inline ConditionalPrevision update_prevision(const NaturalExtensionModel& model, const ConditioningEvent& event,
                                             const HermitianOperator& a, bool cross_check = true) {
    model.require_consistent();
    if (a.dim() != model.dim() || event.dim() != model.dim())
        throw Error(ErrorKind::DimensionMismatch, "operand dims differ from model dim");
    const Tolerances& tol = model.tolerances();
    const ProjectionMap p = build_projection(event, tol);
    const HermitianOperator pi = p.total_projector();

    ConditionalPrevision out;
    const PrevisionResult ev = lower_prevision(model, pi, false);
    out.event_lower = ev.lower;
    out.event_upper = ev.upper;
    if (ev.upper <= tol.conditioning)
        throw Error(ErrorKind::ZeroProbabilityEvent, "the event is impossible: upper probability " +
                                                         std::to_string(ev.upper));
    if (ev.lower <= tol.conditioning)
        throw Error(ErrorKind::ZeroProbabilityEvent, "the event has lower probability " + std::to_string(ev.lower) +
                                                         "; conditioning on it is refused");

    auto [lo, lo_w] = detail::conditional_minimum(model, p, a, ev.lower);
    auto [hi, hi_w] = detail::conditional_minimum(model, p, -a, ev.lower);
    out.lower = lo;
    out.upper = -hi;
    out.lower_witness = lo_w;
    out.upper_witness = hi_w;
    if (out.upper < out.lower) out.upper = out.lower = 0.5 * (out.lower + out.upper);

    if (!cross_check) {
        out.lower_by_desirability = out.lower;
        out.upper_by_desirability = out.upper;
        return out;
    }

    const UpdatedModel updated(model, event);
    const int d = model.dim();
    auto price = [&](const HermitianOperator& b) {
        const double lo_a = range_min_eigenvalue(p, b) - 2.0 * tol.margin - tol.duality;
        double hi_a = -std::numeric_limits<double>::infinity();
        for (const auto& blk : compress_blocks(p, b)) hi_a = std::max(hi_a, blk.max_eigenvalue());
        return bisect_supremum(lo_a, hi_a, tol.duality / 10.0, [&](double alpha) {
            return updated.member(b - alpha * HermitianOperator::identity(d)).status == Membership::Member;
        });
    };
    out.lower_by_desirability = price(a);
    out.upper_by_desirability = -price(-a);
    if (std::abs(out.lower_by_desirability - out.lower) > tol.duality ||
        std::abs(out.upper_by_desirability - out.upper) > tol.duality)
        out.status = PrevisionStatus::Boundary;

    const PrevisionResult pa = lower_prevision(model, p.apply(a), false);
    if (pa.upper - pa.lower <= tol.duality && ev.upper - ev.lower <= tol.duality) {
        out.linear_value = 0.5 * (pa.lower + pa.upper) / (0.5 * (ev.lower + ev.upper));
        if (std::abs(*out.linear_value - out.lower) > tol.duality) out.status = PrevisionStatus::Boundary;
    }
    return out;
}

} // namespace qdm

#endif // QDM_CONDITIONING_HPP
