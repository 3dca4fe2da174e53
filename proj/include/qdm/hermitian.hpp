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

#ifndef QDM_HERMITIAN_HPP
#define QDM_HERMITIAN_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qdm/config.hpp"

namespace qdm {

/// A measurement: a d x d complex Hermitian matrix.
///
/// Construction checks hermiticity against `Tolerances::hermiticity` and then
/// stores the exactly symmetrised matrix (A + A^H) / 2, so every later
/// computation sees an exactly Hermitian operand.
class HermitianOperator {
public:
    HermitianOperator() : m_(ComplexMatrix::Zero(1, 1)) {}

    explicit HermitianOperator(const ComplexMatrix& m, const Tolerances& tol = {}) {
        if (m.rows() != m.cols() || m.rows() < 1)
            throw Error(ErrorKind::DimensionMismatch,
                        "operator must be square with dim >= 1, got " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
        const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (dev > tol.hermiticity)
            throw Error(ErrorKind::NonHermitianInput,
                        "max |A - A^H| = " + std::to_string(dev) + " exceeds tolerance");
        m_ = (m + m.adjoint()) / 2.0;
    }

    explicit HermitianOperator(const RealMatrix& m, const Tolerances& tol = {})
        : HermitianOperator(ComplexMatrix(m.cast<Complex>()), tol) {}

    static HermitianOperator zero(int dim) { return unchecked(ComplexMatrix::Zero(dim, dim)); }
    static HermitianOperator identity(int dim) { return unchecked(ComplexMatrix::Identity(dim, dim)); }

    static HermitianOperator diagonal(std::span<const double> values) {
        ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
        for (std::size_t k = 0; k < values.size(); ++k) m(k, k) = values[k];
        return unchecked(std::move(m));
    }
    static HermitianOperator diagonal(std::initializer_list<double> values) {
        return diagonal(std::span<const double>(values.begin(), values.size()));
    }

    /// |u><v| + |v><u| style constructions that are Hermitian by algebra
    /// skip the tolerance check but are still symmetrised.
    static HermitianOperator from_hermitian_part(const ComplexMatrix& m) {
        return unchecked((m + m.adjoint()) / 2.0);
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& matrix() const { return m_; }
    Complex operator()(int j, int k) const { return m_(j, k); }

    double trace() const { return m_.trace().real(); }

    /// Largest absolute eigenvalue.
    double operator_norm() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    double max_abs_entry() const { return m_.cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }
    double max_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(m_.rows() - 1);
    }

    HermitianOperator& operator+=(const HermitianOperator& o) {
        require_same_dim(o);
        m_ += o.m_;
        return *this;
    }
    HermitianOperator& operator-=(const HermitianOperator& o) {
        require_same_dim(o);
        m_ -= o.m_;
        return *this;
    }
    HermitianOperator& operator*=(double s) {
        m_ *= s;
        return *this;
    }
    friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
    friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
    friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
    friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
    friend HermitianOperator operator/(HermitianOperator a, double s) { return a *= 1.0 / s; }
    HermitianOperator operator-() const { return unchecked(-m_); }

    /// Hilbert-Schmidt inner product tr(A B), real for Hermitian operands.
    double inner(const HermitianOperator& o) const {
        require_same_dim(o);
        return (m_.conjugate().cwiseProduct(o.m_)).sum().real();
    }

    /// Congruence X A X^H; Hermitian for any X.
    HermitianOperator congruence(const ComplexMatrix& x) const {
        return unchecked(x * m_ * x.adjoint());
    }

    bool approx_equal(const HermitianOperator& o, double tol) const {
        return dim() == o.dim() && (m_ - o.m_).cwiseAbs().maxCoeff() <= tol;
    }

    void require_same_dim(const HermitianOperator& o) const {
        if (o.dim() != dim())
            throw Error(ErrorKind::DimensionMismatch,
                        "dim " + std::to_string(dim()) + " vs " + std::to_string(o.dim()));
    }

private:
    static HermitianOperator unchecked(ComplexMatrix m) {
        HermitianOperator h;
        h.m_ = std::move(m);
        return h;
    }

    ComplexMatrix m_;
};

/// tr(A B)
inline double trace_product(const HermitianOperator& a, const HermitianOperator& b) { return a.inner(b); }

/// A vector in the Hilbert space. Not necessarily normalised.
class Ket {
public:
    Ket() = default;
    explicit Ket(ComplexVector amplitudes) : v_(std::move(amplitudes)) {
        if (v_.size() < 1) throw Error(ErrorKind::InvalidKet, "ket must have dim >= 1");
    }

    /// Computational basis vector |k> in dimension `dim`.
    static Ket basis(int dim, int k) {
        if (k < 0 || k >= dim) throw Error(ErrorKind::InvalidKet, "basis index out of range");
        ComplexVector v = ComplexVector::Zero(dim);
        v(k) = 1.0;
        return Ket(std::move(v));
    }

    int dim() const { return static_cast<int>(v_.size()); }
    const ComplexVector& amplitudes() const { return v_; }
    double norm() const { return v_.norm(); }

    bool is_normalized(const Tolerances& tol = {}) const { return std::abs(norm() - 1.0) <= tol.norm; }

    Ket normalized() const {
        const double n = norm();
        if (n == 0.0) throw Error(ErrorKind::InvalidKet, "cannot normalise the zero ket");
        return Ket(v_ / n);
    }

    /// |psi><psi|
    HermitianOperator outer() const {
        return HermitianOperator::from_hermitian_part(v_ * v_.adjoint());
    }

    Complex inner(const Ket& o) const { return v_.dot(o.v_); } // <this|o>

    friend Ket operator+(const Ket& a, const Ket& b) { return Ket(a.v_ + b.v_); }
    friend Ket operator-(const Ket& a, const Ket& b) { return Ket(a.v_ - b.v_); }
    friend Ket operator*(Complex s, const Ket& a) { return Ket(s * a.v_); }

private:
    ComplexVector v_;
};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<Ket> eigenvectors;

    /// Sum_k lambda_k |e_k><e_k|
    HermitianOperator recompose() const {
        const int d = eigenvectors.empty() ? 1 : eigenvectors.front().dim();
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
            const auto& e = eigenvectors[k].amplitudes();
            m += eigenvalues[k] * (e * e.adjoint());
        }
        return HermitianOperator::from_hermitian_part(m);
    }
};

inline Spectrum spectral_decompose(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::NonHermitianInput, "eigen decomposition did not converge");
    Spectrum s;
    s.eigenvalues.reserve(a.dim());
    s.eigenvectors.reserve(a.dim());
    for (int k = 0; k < a.dim(); ++k) {
        s.eigenvalues.push_back(es.eigenvalues()(k));
        s.eigenvectors.emplace_back(es.eigenvectors().col(k));
    }
    return s;
}

/// Overload that accepts a raw matrix and reports non-hermiticity.
inline Spectrum spectral_decompose(const ComplexMatrix& m, const Tolerances& tol = {}) {
    return spectral_decompose(HermitianOperator(m, tol));
}

enum class Ordering {
    StrictlyGreater,       ///< A > B: min sp(A - B) > 0
    GreaterNotEqual,       ///< A >= B and A != B
    GreaterEqual,          ///< A >= B (here: A == B)
    Incomparable,
};

inline const char* to_string(Ordering o) {
    switch (o) {
    case Ordering::StrictlyGreater: return "strict_gt";
    case Ordering::GreaterNotEqual: return "weak_geq_strict_neq";
    case Ordering::GreaterEqual: return "weak_geq";
    case Ordering::Incomparable: return "incomparable";
    }
    return "?";
}

inline bool is_weakly_greater(Ordering o) {
    return o != Ordering::Incomparable;
}

/// Classifies A against B through min sp(A - B).
///
/// A minimum eigenvalue inside [-eig_tol, eig_tol] yields a weak class, so
/// strict_gt requires clearing the band.
inline Ordering compare(const HermitianOperator& a, const HermitianOperator& b, const Tolerances& tol = {}) {
    a.require_same_dim(b);
    const HermitianOperator diff = a - b;
    const double lo = diff.min_eigenvalue();
    if (lo > tol.eigenvalue) return Ordering::StrictlyGreater;
    if (lo >= -tol.eigenvalue) {
        return diff.max_abs_entry() > tol.reconstruction ? Ordering::GreaterNotEqual : Ordering::GreaterEqual;
    }
    return Ordering::Incomparable;
}

} // namespace qdm

#endif // QDM_HERMITIAN_HPP
