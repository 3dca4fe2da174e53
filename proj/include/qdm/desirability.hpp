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

#ifndef QDM_DESIRABILITY_HPP
#define QDM_DESIRABILITY_HPP

#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include "qdm/cone_oracle.hpp"
#include "qdm/projection.hpp"
#include "qdm/random.hpp"

namespace qdm {

/// A finite set of measurements judged desirable.
class Assessment {
public:
    explicit Assessment(int dim, std::vector<HermitianOperator> generators = {})
        : dim_(dim), generators_(std::move(generators)) {
        if (dim < 1) throw Error(ErrorKind::InvalidArgument, "assessment dim must be >= 1");
        for (const auto& g : generators_)
            if (g.dim() != dim_) throw Error(ErrorKind::DimensionMismatch, "generator dim differs from assessment dim");
    }

    static Assessment vacuous(int dim) { return Assessment(dim); }

    int dim() const { return dim_; }
    const std::vector<HermitianOperator>& generators() const { return generators_; }
    bool empty() const { return generators_.empty(); }

    Assessment with(const HermitianOperator& g) const {
        auto gens = generators_;
        gens.push_back(g);
        return Assessment(dim_, std::move(gens));
    }

private:
    int dim_;
    std::vector<HermitianOperator> generators_;
};

enum class Consistency { Consistent, Inconsistent, Boundary };

inline const char* to_string(Consistency c) {
    switch (c) {
    case Consistency::Consistent: return "consistent";
    case Consistency::Inconsistent: return "inconsistent";
    case Consistency::Boundary: return "boundary";
    }
    return "?";
}

struct ConsistencyResult {
    Consistency status = Consistency::Consistent;
    /// For an inconsistent assessment the coefficients give a nontrivial
    /// combination sum lambda_i A_i <= 0; otherwise the density separates.
    Certificate certificate;
};

/// An assessment is inconsistent when some nontrivial nonnegative combination
/// of its generators is negative semidefinite.
inline ConsistencyResult check_consistency(const Assessment& a, const Tolerances& tol = {}) {
    ConsistencyResult out;
    if (a.empty()) {
        out.certificate.status = CertificateStatus::Infeasible;
        out.certificate.density = DensityOperator::maximally_mixed(a.dim());
        out.certificate.solver_converged = true;
        return out;
    }
    ConeFeasibilityProblem prob;
    prob.generators = a.generators();
    prob.target = HermitianOperator::zero(a.dim());
    prob.combination = Combination::NonnegativeNontrivial;
    prob.epsilon = tol.margin;
    out.certificate = check_feasible(prob, tol);
    switch (out.certificate.status) {
    case CertificateStatus::Feasible: out.status = Consistency::Inconsistent; break;
    case CertificateStatus::Infeasible: out.status = Consistency::Consistent; break;
    case CertificateStatus::Boundary: out.status = Consistency::Boundary; break;
    }
    return out;
}

enum class Membership { Member, Nonmember, Boundary };
enum class MembershipBranch { Background, Generators, None };

inline const char* to_string(Membership m) {
    switch (m) {
    case Membership::Member: return "member";
    case Membership::Nonmember: return "nonmember";
    case Membership::Boundary: return "boundary";
    }
    return "?";
}

inline const char* to_string(MembershipBranch b) {
    switch (b) {
    case MembershipBranch::Background: return "background";
    case MembershipBranch::Generators: return "generators";
    case MembershipBranch::None: return "none";
    }
    return "?";
}

struct MembershipResult {
    Membership status = Membership::Nonmember;
    MembershipBranch branch = MembershipBranch::None;
    /// Smallest eigenvalue relevant to the background branch.
    double background_margin = 0.0;
    Certificate certificate;
};

/// E(A): the positive definite cone together with posi(A) + the PSD cone.
class NaturalExtensionModel {
public:
    explicit NaturalExtensionModel(Assessment a, const Tolerances& tol = {})
        : assessment_(std::move(a)), tol_(tol), consistency_(check_consistency(assessment_, tol_)) {}

    int dim() const { return assessment_.dim(); }
    const Assessment& assessment() const { return assessment_; }
    const Tolerances& tolerances() const { return tol_; }
    Consistency consistency() const { return consistency_.status; }
    const ConsistencyResult& consistency_result() const { return consistency_; }

    void require_consistent() const {
        if (consistency_.status == Consistency::Inconsistent)
            throw Error(ErrorKind::InconsistentAssessment, "some nonnegative combination of the generators is <= 0");
    }

    /// Membership of B, decided in stages:
    ///   1. B >= eps I: member through the background cone.
    ///   2. max_lambda min sp(B - sum lambda_i A_i) >= eps: member; <= -eps: nonmember.
    ///   3. inside the band, the nontrivial homogenised test decides the
    ///      weak generator branch; what remains undecided is boundary.
    MembershipResult member(const HermitianOperator& b) const {
        require_consistent();
        if (b.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "probe dim differs from model dim");
        const double eps = tol_.margin;
        MembershipResult out;
        out.background_margin = b.min_eigenvalue();

        if (out.background_margin >= eps) {
            out.status = Membership::Member;
            out.branch = MembershipBranch::Background;
            out.certificate.status = CertificateStatus::Feasible;
            out.certificate.objective_value = out.certificate.lower_bound = out.background_margin;
            out.certificate.solver_converged = true;
            return out;
        }
        const bool in_band = out.background_margin > tol_.eigenvalue;
        if (assessment_.empty()) {
            out.status = in_band ? Membership::Boundary : Membership::Nonmember;
            out.certificate.status = in_band ? CertificateStatus::Boundary : CertificateStatus::Infeasible;
            out.certificate.objective_value = out.certificate.upper_bound = out.background_margin;
            out.certificate.solver_converged = true;
            return out;
        }

        ConeFeasibilityProblem margin;
        margin.generators = assessment_.generators();
        margin.target = b;
        margin.strictness = Strictness::Strict;
        margin.epsilon = eps;
        const Certificate m = check_feasible(margin, tol_);
        if (m.status == CertificateStatus::Feasible) {
            out.status = Membership::Member;
            out.branch = MembershipBranch::Generators;
            out.certificate = m;
            return out;
        }
        if (m.upper_bound <= -eps) {
            out.status = Membership::Nonmember;
            out.certificate = m;
            return out;
        }

        ConeFeasibilityProblem nontrivial;
        nontrivial.generators = assessment_.generators();
        nontrivial.target = b;
        nontrivial.combination = Combination::NonnegativeNontrivial;
        nontrivial.epsilon = eps;
        const Certificate h = check_feasible(nontrivial, tol_);
        out.certificate = h;
        if (h.status == CertificateStatus::Feasible) {
            out.status = Membership::Member;
            out.branch = MembershipBranch::Generators;
        } else if (in_band || h.status == CertificateStatus::Boundary) {
            out.status = Membership::Boundary;
        } else {
            out.status = Membership::Nonmember;
        }
        return out;
    }

    /// A random member: a nonnegative combination of generators plus a PSD
    /// bump, or a positive definite operator.
    HermitianOperator sample_member(Rng& rng) const {
        HermitianOperator out = HermitianOperator::zero(dim());
        if (assessment_.empty() || uniform(0.0, 1.0, rng) < 0.25) {
            out = random_psd(dim(), rng) + uniform(0.05, 1.0, rng) * HermitianOperator::identity(dim());
            return out;
        }
        const auto& gens = assessment_.generators();
        double total = 0.0;
        for (const auto& g : gens) {
            const double w = uniform(0.0, 1.0, rng);
            out += (w / g.operator_norm()) * g;
            total += w;
        }
        if (total == 0.0) out += gens.front() / gens.front().operator_norm();
        out += uniform(0.05, 1.0, rng) * random_psd(dim(), rng);
        return out;
    }

private:
    Assessment assessment_;
    Tolerances tol_;
    ConsistencyResult consistency_;
};

/// Anything that answers membership questions about a coherent set of
/// desirable measurements and can draw members from it.
template <typename M>
concept DesirabilityModel = requires(const M& m, const HermitianOperator& a, Rng& rng) {
    { m.dim() } -> std::convertible_to<int>;
    { m.member(a) } -> std::same_as<MembershipResult>;
    { m.sample_member(rng) } -> std::convertible_to<HermitianOperator>;
    { m.tolerances() } -> std::convertible_to<const Tolerances&>;
    m.require_consistent();
};

inline bool natural_extension_contains(const NaturalExtensionModel& model, const HermitianOperator& b) {
    return model.member(b).status == Membership::Member;
}

inline MembershipResult natural_extension_member(const NaturalExtensionModel& model, const HermitianOperator& b) {
    return model.member(b);
}

struct AxiomViolation {
    std::string axiom;
    std::string detail;
    std::vector<HermitianOperator> operands;
    double scalar = 0.0;
};

struct CoherenceReport {
    int samples = 0;
    int checks = 0;
    /// Checks skipped because a membership query landed in the margin band.
    int boundary = 0;
    std::vector<AxiomViolation> violations;

    bool ok() const { return violations.empty(); }
};

/// Randomised audit of D1-D5 on `samples` seeded draws. Violations carry the
/// operands that produced them.
template <DesirabilityModel M>
CoherenceReport check_coherence_axioms(const M& model, int samples, std::uint64_t seed) {
    model.require_consistent();
    const Tolerances& tol = model.tolerances();
    const int d = model.dim();
    Rng rng(seed);
    CoherenceReport rep;
    rep.samples = samples;

    auto expect_member = [&](const char* axiom, const HermitianOperator& x, std::vector<HermitianOperator> ops,
                             double scalar) {
        ++rep.checks;
        const Membership s = model.member(x).status;
        if (s == Membership::Boundary) ++rep.boundary;
        else if (s == Membership::Nonmember)
            rep.violations.push_back({axiom, "expected member, got nonmember", std::move(ops), scalar});
    };

    for (int i = 0; i < samples; ++i) {
        // D1: neither a random probe nor a negative semidefinite one that
        // is classified as a member may be <= 0.
        const HermitianOperator probe = random_hermitian(d, rng);
        const HermitianOperator nsd = -random_psd(d, rng, uniform_int(1, d, rng));
        for (const auto& x : {probe, nsd}) {
            ++rep.checks;
            if (model.member(x).status == Membership::Member && x.max_eigenvalue() <= tol.eigenvalue)
                rep.violations.push_back({"D1", "member is <= 0", {x}, 0.0});
        }

        // D2: positive definite operators are members.
        const HermitianOperator pd = random_psd(d, rng) + log_uniform(1e-2, 1.0, rng) * HermitianOperator::identity(d);
        expect_member("D2", pd, {pd}, 0.0);

        const HermitianOperator a = model.sample_member(rng);
        const HermitianOperator b = model.sample_member(rng);

        // D3: adding a PSD operator keeps membership.
        const HermitianOperator bump = log_uniform(1e-2, 1e2, rng) * random_psd(d, rng, uniform_int(1, d, rng));
        expect_member("D3", a + bump, {a, bump}, 0.0);

        // D4: sums of members are members.
        expect_member("D4", a + b, {a, b}, 0.0);

        // D5: positive scaling.
        const double c = log_uniform(1e-2, 1e2, rng);
        expect_member("D5", c * a, {a}, c);
    }
    return rep;
}

enum class Compatibility { Compatible, Incompatible };

inline const char* to_string(Compatibility c) {
    return c == Compatibility::Compatible ? "compatible" : "incompatible";
}

struct CompatibilityReport {
    Compatibility status = Compatibility::Compatible;
    /// Checks skipped because a membership query landed in the margin band.
    int boundary = 0;
    /// For a sampled failure: the member A and kernel element k with A + k
    /// a nonmember. For a focusedness failure: the operator whose membership
    /// differs from that of its projection.
    std::vector<HermitianOperator> witness;
    std::string reason;
};

/// D + K_p within D, checked by sampling, plus the exact focusedness test
/// A in D iff p(A) in D on every generator.
template <DesirabilityModel M>
CompatibilityReport check_compatibility(const M& model, const ProjectionMap& p, int samples, std::uint64_t seed,
                                        const std::vector<HermitianOperator>& generators = {}) {
    model.require_consistent();
    if (p.dim() != model.dim()) throw Error(ErrorKind::DimensionMismatch, "projection dim differs from model dim");
    CompatibilityReport rep;

    for (const auto& g : generators) {
        const Membership a = model.member(g).status;
        const Membership pa = model.member(p.apply(g)).status;
        if (a == Membership::Boundary || pa == Membership::Boundary) {
            ++rep.boundary;
            continue;
        }
        if (a != pa) {
            rep.status = Compatibility::Incompatible;
            rep.witness = {g};
            rep.reason = std::string("focusedness fails: A is ") + to_string(a) + " but p(A) is " + to_string(pa);
            return rep;
        }
    }

    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const HermitianOperator k0 = random_hermitian(model.dim(), rng);
        HermitianOperator k = k0 - p.apply(k0);
        const double kn = k.operator_norm();
        if (kn <= model.tolerances().indifference) continue;
        k = (log_uniform(1e-1, 1e1, rng) / kn) * k;
        const HermitianOperator a = model.sample_member(rng);
        const Membership s = model.member(a + k).status;
        if (s == Membership::Boundary) ++rep.boundary;
        if (s == Membership::Nonmember && model.member(a).status == Membership::Member) {
            rep.status = Compatibility::Incompatible;
            rep.witness = {a, k};
            rep.reason = "member plus indifferent measurement is a nonmember";
            return rep;
        }
    }
    return rep;
}

} // namespace qdm

#endif // QDM_DESIRABILITY_HPP
