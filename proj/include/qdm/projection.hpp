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

#ifndef QDM_PROJECTION_HPP
#define QDM_PROJECTION_HPP

#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qdm/hermitian.hpp"

namespace qdm {

/// A nonzero subspace V of C^d, held as an orthonormal basis.
///
/// The spanning kets are orthonormalised with modified Gram-Schmidt, always
/// picking the remaining ket with the largest residual next. A ket whose
/// residual drops below `Tolerances::dependence` is rejected.
class Subspace {
public:
    Subspace(int ambient_dim, const std::vector<Ket>& spanning, const Tolerances& tol = {})
        : ambient_dim_(ambient_dim) {
        if (ambient_dim < 1) throw Error(ErrorKind::InvalidSubspace, "ambient dim must be >= 1");
        if (spanning.empty()) throw Error(ErrorKind::InvalidSubspace, "subspace needs at least one ket");
        if (static_cast<int>(spanning.size()) > ambient_dim)
            throw Error(ErrorKind::InvalidSubspace, "more spanning kets than the ambient dimension");

        std::vector<ComplexVector> work;
        std::vector<double> scale;
        for (const Ket& k : spanning) {
            if (k.dim() != ambient_dim) throw Error(ErrorKind::DimensionMismatch, "ket dim differs from ambient dim");
            if (k.norm() == 0.0) throw Error(ErrorKind::InvalidSubspace, "zero ket in spanning set");
            work.push_back(k.amplitudes());
            scale.push_back(k.norm());
        }

        std::vector<bool> used(work.size(), false);
        for (std::size_t step = 0; step < work.size(); ++step) {
            std::size_t pivot = work.size();
            double best = -1.0;
            for (std::size_t j = 0; j < work.size(); ++j) {
                if (used[j]) continue;
                const double r = work[j].norm() / scale[j];
                if (r > best) {
                    best = r;
                    pivot = j;
                }
            }
            if (best < tol.dependence)
                throw Error(ErrorKind::InvalidSubspace,
                            "spanning kets are linearly dependent (residual " + std::to_string(best) + ")");
            used[pivot] = true;
            ComplexVector q = work[pivot] / work[pivot].norm();
            for (std::size_t j = 0; j < work.size(); ++j)
                if (!used[j]) work[j] -= q * q.dot(work[j]);
            basis_.emplace_back(q);
        }
    }

    /// The whole space C^d.
    static Subspace full(int dim) {
        std::vector<Ket> kets;
        for (int k = 0; k < dim; ++k) kets.push_back(Ket::basis(dim, k));
        return Subspace(dim, kets);
    }

    int ambient_dim() const { return ambient_dim_; }
    int rank() const { return static_cast<int>(basis_.size()); }
    const std::vector<Ket>& basis() const { return basis_; }

    /// d x m matrix whose columns are the basis kets.
    ComplexMatrix basis_matrix() const {
        ComplexMatrix b(ambient_dim_, rank());
        for (int j = 0; j < rank(); ++j) b.col(j) = basis_[j].amplitudes();
        return b;
    }

    /// Orthogonal projector onto the subspace.
    HermitianOperator projector() const {
        const ComplexMatrix b = basis_matrix();
        return HermitianOperator::from_hermitian_part(b * b.adjoint());
    }

    /// Max |<b_j|c_k>| across the two bases.
    double overlap(const Subspace& o) const {
        return (basis_matrix().adjoint() * o.basis_matrix()).cwiseAbs().maxCoeff();
    }

private:
    int ambient_dim_;
    std::vector<Ket> basis_;
};

/// P_V = sum_j |b_j><b_j|
inline HermitianOperator projector_of(const Subspace& v) {
    const ComplexMatrix b = v.basis_matrix();
    return HermitianOperator::from_hermitian_part(b * b.adjoint());
}

enum class ProjectionKind { Subspace, OrthogonalFamily };

/// The linear projection p on the space of measurements: A -> sum_k P_k A P_k.
///
/// With one subspace this is A -> P A P; with several mutually orthogonal
/// subspaces it is the pinching onto the block-diagonal algebra. Its kernel
/// holds the indifferent measurements.
class ProjectionMap {
public:
    ProjectionMap(ProjectionKind kind, std::vector<Subspace> subspaces, const Tolerances& tol = {})
        : kind_(kind), subspaces_(std::move(subspaces)) {
        if (subspaces_.empty()) throw Error(ErrorKind::InvalidSubspace, "projection needs a subspace");
        if (kind_ == ProjectionKind::Subspace && subspaces_.size() != 1)
            throw Error(ErrorKind::InvalidArgument, "subspace kind takes exactly one subspace");
        for (std::size_t k = 0; k < subspaces_.size(); ++k)
            for (std::size_t l = k + 1; l < subspaces_.size(); ++l)
                if (subspaces_[k].ambient_dim() == subspaces_[l].ambient_dim() &&
                    subspaces_[k].overlap(subspaces_[l]) > tol.orthonormality)
                    throw Error(ErrorKind::NonOrthogonalFamily,
                                "subspaces " + std::to_string(k) + " and " + std::to_string(l) + " overlap");
        for (const auto& s : subspaces_) {
            if (s.ambient_dim() != subspaces_.front().ambient_dim())
                throw Error(ErrorKind::DimensionMismatch, "subspaces live in different ambient spaces");
            projectors_.push_back(projector_of(s));
        }
    }

    ProjectionKind kind() const { return kind_; }
    int dim() const { return subspaces_.front().ambient_dim(); }
    const std::vector<Subspace>& subspaces() const { return subspaces_; }
    const std::vector<HermitianOperator>& projectors() const { return projectors_; }

    /// Sum of the block dimensions, i.e. the side of the compressed matrix.
    int range_dim() const {
        return std::accumulate(subspaces_.begin(), subspaces_.end(), 0,
                               [](int acc, const Subspace& s) { return acc + s.rank(); });
    }

    /// p(I) = sum_k P_k
    HermitianOperator total_projector() const {
        HermitianOperator sum = HermitianOperator::zero(dim());
        for (const auto& p : projectors_) sum += p;
        return sum;
    }

    HermitianOperator apply(const HermitianOperator& a) const {
        if (a.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "operator dim differs from projection dim");
        ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
        for (const auto& p : projectors_) out += p.matrix() * a.matrix() * p.matrix();
        return HermitianOperator::from_hermitian_part(out);
    }

private:
    ProjectionKind kind_;
    std::vector<Subspace> subspaces_;
    std::vector<HermitianOperator> projectors_;
};

inline HermitianOperator project_measurement(const ProjectionMap& p, const HermitianOperator& a) {
    return p.apply(a);
}

/// Kernel membership: ||p(A)|| <= tol in operator norm.
inline bool is_indifferent(const ProjectionMap& p, const HermitianOperator& a, const Tolerances& tol = {}) {
    return p.apply(a).operator_norm() <= tol.indifference;
}

/// C[j][k] = <b_j|A|b_k> over the basis of a single subspace.
inline HermitianOperator compress_to_range(const ProjectionMap& p, const HermitianOperator& a) {
    if (p.kind() != ProjectionKind::Subspace)
        throw Error(ErrorKind::UnsupportedKind, "use compress_blocks for orthogonal families");
    if (a.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "operator dim differs from projection dim");
    const ComplexMatrix b = p.subspaces().front().basis_matrix();
    return HermitianOperator::from_hermitian_part(b.adjoint() * a.matrix() * b);
}

/// Per-block compressions <b^k_j|A|b^k_l>, one block per subspace.
inline std::vector<HermitianOperator> compress_blocks(const ProjectionMap& p, const HermitianOperator& a) {
    if (a.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "operator dim differs from projection dim");
    std::vector<HermitianOperator> blocks;
    for (const auto& s : p.subspaces()) {
        const ComplexMatrix b = s.basis_matrix();
        blocks.push_back(HermitianOperator::from_hermitian_part(b.adjoint() * a.matrix() * b));
    }
    return blocks;
}

/// The block compressions assembled into one block-diagonal matrix over the
/// concatenated bases. Equals compress_to_range for a single subspace.
inline HermitianOperator compress_block_diagonal(const ProjectionMap& p, const HermitianOperator& a) {
    const auto blocks = compress_blocks(p, a);
    ComplexMatrix out = ComplexMatrix::Zero(p.range_dim(), p.range_dim());
    int offset = 0;
    for (const auto& blk : blocks) {
        out.block(offset, offset, blk.dim(), blk.dim()) = blk.matrix();
        offset += blk.dim();
    }
    return HermitianOperator::from_hermitian_part(out);
}

/// Inverse of compress_block_diagonal on rng(p): C -> B C B^H, off-diagonal
/// blocks of C are discarded.
inline HermitianOperator expand_from_range(const ProjectionMap& p, const HermitianOperator& c) {
    if (c.dim() != p.range_dim()) throw Error(ErrorKind::DimensionMismatch, "compressed dim differs from range dim");
    ComplexMatrix out = ComplexMatrix::Zero(p.dim(), p.dim());
    int offset = 0;
    for (const auto& s : p.subspaces()) {
        const ComplexMatrix b = s.basis_matrix();
        out += b * c.matrix().block(offset, offset, s.rank(), s.rank()) * b.adjoint();
        offset += s.rank();
    }
    return HermitianOperator::from_hermitian_part(out);
}

/// Smallest eigenvalue over all blocks of the compression of p(A); positive
/// exactly when p(A) is positive definite in the quotient ordering on rng(p).
inline double range_min_eigenvalue(const ProjectionMap& p, const HermitianOperator& a) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& blk : compress_blocks(p, a)) lo = std::min(lo, blk.min_eigenvalue());
    return lo;
}

} // namespace qdm

#endif // QDM_PROJECTION_HPP
