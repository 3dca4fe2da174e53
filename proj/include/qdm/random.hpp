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

#ifndef QDM_RANDOM_HPP
#define QDM_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qdm/density.hpp"
#include "qdm/hermitian.hpp"
#include "qdm/projection.hpp"

namespace qdm {

using Rng = std::mt19937_64;

inline ComplexMatrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (int j = 0; j < rows; ++j)
        for (int k = 0; k < cols; ++k) m(j, k) = Complex(n(rng), n(rng));
    return m;
}

/// GUE sample scaled to unit operator norm.
inline HermitianOperator random_hermitian(int dim, Rng& rng) {
    const ComplexMatrix g = random_gaussian_matrix(dim, dim, rng);
    HermitianOperator h = HermitianOperator::from_hermitian_part(g);
    const double n = h.operator_norm();
    return n > 0.0 ? h / n : HermitianOperator::identity(dim);
}

/// G G^H with G of shape dim x rank, scaled to unit operator norm.
inline HermitianOperator random_psd(int dim, Rng& rng, int rank = -1) {
    const ComplexMatrix g = random_gaussian_matrix(dim, rank < 0 ? dim : rank, rng);
    HermitianOperator h = HermitianOperator::from_hermitian_part(g * g.adjoint());
    return h / h.operator_norm();
}

inline Ket random_ket(int dim, Rng& rng) {
    return Ket(ComplexVector(random_gaussian_matrix(dim, 1, rng).col(0))).normalized();
}

/// Wishart density G G^H / tr(G G^H); full rank by default.
inline DensityOperator random_density(int dim, Rng& rng, int rank = -1) {
    const ComplexMatrix g = random_gaussian_matrix(dim, rank < 0 ? dim : rank, rng);
    const ComplexMatrix w = g * g.adjoint();
    return DensityOperator(HermitianOperator::from_hermitian_part(w / w.trace().real()));
}

/// Log-uniform scalar in [lo, hi].
inline double log_uniform(double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

inline double uniform(double lo, double hi, Rng& rng) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(int lo, int hi, Rng& rng) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// A Haar-like random unitary from the QR factor of a Gaussian matrix.
inline ComplexMatrix random_unitary(int dim, Rng& rng) {
    const ComplexMatrix g = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

/// Mutually orthogonal subspaces with the given ranks (sum <= dim), spanned by
/// consecutive columns of a random unitary.
inline std::vector<Subspace> random_orthogonal_family(int dim, const std::vector<int>& ranks, Rng& rng) {
    const ComplexMatrix u = random_unitary(dim, rng);
    std::vector<Subspace> out;
    int col = 0;
    for (int r : ranks) {
        std::vector<Ket> kets;
        for (int j = 0; j < r; ++j) kets.emplace_back(ComplexVector(u.col(col++)));
        out.emplace_back(dim, kets);
    }
    return out;
}

} // namespace qdm

#endif // QDM_RANDOM_HPP
