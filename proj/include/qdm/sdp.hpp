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

// Dense primal-dual interior-point solver for small block-diagonal SDPs.
//
//   primal:  min <C, X>  s.t.  <A_j, X> = b_j  (j = 1..m),  X >= 0
//   dual:    max b'y     s.t.  Z = C - sum_j y_j A_j >= 0
//
// X, Z and every A_j are block diagonal: a list of real symmetric PSD blocks
// followed by one diagonal (nonnegative orthant) block. The method is an
// infeasible-start path-following scheme with the HKM search direction and
// Mehrotra's predictor-corrector, in the style of CSDP/SDPT3, written for
// problems with n <= a few hundred and m <= a few hundred.

#ifndef QDM_SDP_HPP
#define QDM_SDP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace qdm::sdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct BlockMatrix {
    std::vector<Matrix> psd;
    Vector lp;

    static BlockMatrix zero(const std::vector<int>& psd_sizes, int lp_size) {
        BlockMatrix b;
        for (int n : psd_sizes) b.psd.push_back(Matrix::Zero(n, n));
        b.lp = Vector::Zero(lp_size);
        return b;
    }
    static BlockMatrix identity(const std::vector<int>& psd_sizes, int lp_size, double scale = 1.0) {
        BlockMatrix b;
        for (int n : psd_sizes) b.psd.push_back(scale * Matrix::Identity(n, n));
        b.lp = Vector::Constant(lp_size, scale);
        return b;
    }

    BlockMatrix& operator+=(const BlockMatrix& o) {
        for (std::size_t k = 0; k < psd.size(); ++k) psd[k] += o.psd[k];
        lp += o.lp;
        return *this;
    }
    BlockMatrix& axpy(double alpha, const BlockMatrix& o) {
        for (std::size_t k = 0; k < psd.size(); ++k) psd[k] += alpha * o.psd[k];
        lp += alpha * o.lp;
        return *this;
    }
    BlockMatrix& operator*=(double s) {
        for (auto& m : psd) m *= s;
        lp *= s;
        return *this;
    }

    double squared_norm() const {
        double s = lp.squaredNorm();
        for (const auto& m : psd) s += m.squaredNorm();
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }
};

/// sum_k tr(A_k M_k) for symmetric A; M need not be symmetric.
inline double inner(const BlockMatrix& a, const BlockMatrix& m) {
    double s = a.lp.dot(m.lp);
    for (std::size_t k = 0; k < a.psd.size(); ++k) s += a.psd[k].cwiseProduct(m.psd[k]).sum();
    return s;
}

struct Problem {
    std::vector<int> psd_sizes;
    int lp_size = 0;
    BlockMatrix c;
    std::vector<BlockMatrix> a;
    Vector b;

    int order() const {
        int n = lp_size;
        for (int s : psd_sizes) n += s;
        return n;
    }
};

struct Options {
    int max_iterations = 200;
    double gap_tolerance = 1e-9;
    double feasibility_tolerance = 1e-9;
    /// Once the fallback accuracy is reached, stop if the best merit has not
    /// halved for this many iterations.
    int stall_iterations = 8;
    /// Accepted on stall: the best iterate is still reported as optimal when
    /// all three measures are below this.
    double fallback_tolerance = 1e-7;
};

enum class Status { Optimal, Stalled };

struct Solution {
    Status status = Status::Stalled;
    BlockMatrix x;
    BlockMatrix z;
    Vector y;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double relative_gap = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    int iterations = 0;
};

namespace detail {

/// Largest alpha with X + alpha dX >= 0 (infinity if unbounded).
inline double max_step(const BlockMatrix& x, const BlockMatrix& dx) {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.psd.size(); ++k) {
        Eigen::LLT<Matrix> llt(x.psd[k]);
        if (llt.info() != Eigen::Success) return 0.0;
        const Matrix l_inv = llt.matrixL().solve(Matrix::Identity(x.psd[k].rows(), x.psd[k].cols()));
        Matrix w = l_inv * dx.psd[k] * l_inv.transpose();
        w = (0.5 * (w + w.transpose())).eval();
        Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues()(0);
        if (lo < 0.0) alpha = std::min(alpha, -1.0 / lo);
    }
    for (Eigen::Index i = 0; i < x.lp.size(); ++i)
        if (dx.lp(i) < 0.0) alpha = std::min(alpha, -x.lp(i) / dx.lp(i));
    return alpha;
}

inline bool invert_blocks(const BlockMatrix& z, BlockMatrix& z_inv) {
    z_inv.psd.resize(z.psd.size());
    for (std::size_t k = 0; k < z.psd.size(); ++k) {
        Eigen::LLT<Matrix> llt(z.psd[k]);
        if (llt.info() != Eigen::Success) return false;
        z_inv.psd[k] = llt.solve(Matrix::Identity(z.psd[k].rows(), z.psd[k].cols()));
        z_inv.psd[k] = (0.5 * (z_inv.psd[k] + z_inv.psd[k].transpose())).eval();
    }
    if ((z.lp.array() <= 0.0).any()) return false;
    z_inv.lp = z.lp.cwiseInverse();
    return true;
}

} // namespace detail

inline Solution solve(const Problem& input, const Options& opts = {}) {
    const int m = static_cast<int>(input.a.size());
    const int n_total = std::max(1, input.order());

    // Row scaling of each constraint and global scaling of b and C.
    Problem p = input;
    Vector row_scale = Vector::Ones(m);
    for (int j = 0; j < m; ++j) {
        const double s = p.a[j].norm();
        if (s > 0.0) {
            row_scale(j) = s;
            p.a[j] *= 1.0 / s;
            p.b(j) /= s;
        }
    }
    const double b_scale = std::max(1.0, p.b.size() ? p.b.cwiseAbs().maxCoeff() : 0.0);
    // Only the PSD part of C sets the objective scale; LP entries of C may
    // carry large penalty caps that would otherwise swamp it.
    double c_psd_norm = 0.0;
    for (const auto& blk : p.c.psd) c_psd_norm += blk.squaredNorm();
    const double c_scale = std::max(1.0, std::sqrt(c_psd_norm));
    p.b /= b_scale;
    p.c *= 1.0 / c_scale;

    double xi = std::max(10.0, std::sqrt(static_cast<double>(n_total)));
    double eta = std::max(10.0, std::sqrt(static_cast<double>(n_total)));
    for (int j = 0; j < m; ++j) xi = std::max(xi, std::sqrt(static_cast<double>(n_total)) * (1.0 + std::abs(p.b(j))) / 2.0);
    eta = std::max(eta, std::sqrt(c_psd_norm) / c_scale);

    Solution best;
    double best_merit = std::numeric_limits<double>::infinity();
    double last_progress = std::numeric_limits<double>::infinity();
    int last_progress_iter = 0;

    BlockMatrix x = BlockMatrix::identity(p.psd_sizes, p.lp_size, xi);
    BlockMatrix z = BlockMatrix::identity(p.psd_sizes, p.lp_size, eta);
    // Scalar rows may carry large constants (penalty caps); start their
    // slacks at the size of the constant so the dual residual stays balanced.
    for (int i = 0; i < p.lp_size; ++i) z.lp(i) = std::max(eta, 1.0 + std::abs(p.c.lp(i)));
    Vector y = Vector::Zero(m);

    const double b_norm = p.b.norm();
    const double c_norm = std::sqrt(c_psd_norm) / c_scale;

    auto record = [&](int iter, bool converged) {
        Solution s;
        s.x = x;
        s.z = z;
        s.y = y;
        s.iterations = iter;
        // Undo scaling: X was scaled by 1/b_scale, y and Z by 1/c_scale, y_j by row_scale.
        s.x *= b_scale;
        s.z *= c_scale;
        for (int j = 0; j < m; ++j) s.y(j) = y(j) * c_scale / row_scale(j);
        s.primal_objective = inner(input.c, s.x);
        s.dual_objective = input.b.size() ? input.b.dot(s.y) : 0.0;
        s.status = converged ? Status::Optimal : Status::Stalled;
        return s;
    };

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        Vector rp(m);
        for (int j = 0; j < m; ++j) rp(j) = p.b(j) - inner(p.a[j], x);
        BlockMatrix rd = p.c;
        rd.axpy(-1.0, z);
        for (int j = 0; j < m; ++j) rd.axpy(-y(j), p.a[j]);

        const double mu = inner(x, z) / n_total;
        const double pobj = inner(p.c, x);
        const double dobj = m ? p.b.dot(y) : 0.0;
        const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        const double pinf = rp.norm() / (1.0 + b_norm);
        const double dinf = rd.norm() / (1.0 + c_norm);
        const double merit = std::max({rel_gap, pinf, dinf});

        if (merit < 0.5 * last_progress) {
            last_progress = merit;
            last_progress_iter = iter;
        } else if (best_merit < opts.fallback_tolerance && iter - last_progress_iter >= opts.stall_iterations) {
            break;
        }
        if (merit < best_merit) {
            best_merit = merit;
            best = record(iter, false);
            best.relative_gap = rel_gap;
            best.primal_infeasibility = pinf;
            best.dual_infeasibility = dinf;
        }
        if (rel_gap < opts.gap_tolerance && pinf < opts.feasibility_tolerance && dinf < opts.feasibility_tolerance) {
            best.status = Status::Optimal;
            return best;
        }

        BlockMatrix z_inv;
        if (!detail::invert_blocks(z, z_inv)) break;

        // G_j = X A_j Z^{-1}; Schur complement M_ij = tr(A_i G_j).
        std::vector<BlockMatrix> g(m);
        for (int j = 0; j < m; ++j) {
            g[j].psd.resize(x.psd.size());
            for (std::size_t k = 0; k < x.psd.size(); ++k) g[j].psd[k] = x.psd[k] * p.a[j].psd[k] * z_inv.psd[k];
            g[j].lp = x.lp.cwiseProduct(p.a[j].lp).cwiseProduct(z_inv.lp);
        }
        Matrix schur(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double v = 0.5 * (inner(p.a[i], g[j]) + inner(p.a[j], g[i]));
                schur(i, j) = v;
                schur(j, i) = v;
            }
        // Equilibrate, factor with pivoted LDL^T (the matrix turns nearly
        // singular when constraints are linearly dependent on the PSD block),
        // and polish each solve with two rounds of iterative refinement.
        Vector d_scale = schur.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        const Matrix scaled = d_scale.asDiagonal() * schur * d_scale.asDiagonal();
        Eigen::LDLT<Matrix> schur_ldlt(scaled + 1e-15 * Matrix::Identity(m, m));
        if (schur_ldlt.info() != Eigen::Success) break;
        auto solve_schur = [&](const Vector& rhs) {
            Vector sol = d_scale.cwiseProduct(schur_ldlt.solve(d_scale.cwiseProduct(rhs)));
            for (int r = 0; r < 2; ++r) {
                const Vector res = rhs - schur * sol;
                sol += d_scale.cwiseProduct(schur_ldlt.solve(d_scale.cwiseProduct(res)));
            }
            return sol;
        };

        // X Rd Z^{-1}, shared by predictor and corrector.
        BlockMatrix x_rd_zinv;
        x_rd_zinv.psd.resize(x.psd.size());
        for (std::size_t k = 0; k < x.psd.size(); ++k) x_rd_zinv.psd[k] = x.psd[k] * rd.psd[k] * z_inv.psd[k];
        x_rd_zinv.lp = x.lp.cwiseProduct(rd.lp).cwiseProduct(z_inv.lp);

        // Solves for the direction given the complementarity residual rc
        // (the right-hand side of dX Z + X dZ = rc).
        auto direction = [&](const BlockMatrix& rc, BlockMatrix& dx, Vector& dy, BlockMatrix& dz) {
            BlockMatrix base;
            base.psd.resize(x.psd.size());
            for (std::size_t k = 0; k < x.psd.size(); ++k)
                base.psd[k] = rc.psd[k] * z_inv.psd[k] - x_rd_zinv.psd[k];
            base.lp = rc.lp.cwiseProduct(z_inv.lp) - x_rd_zinv.lp;
            Vector rhs(m);
            for (int j = 0; j < m; ++j) rhs(j) = rp(j) - inner(p.a[j], base);
            dy = m ? solve_schur(rhs) : Vector();
            dx = base;
            for (int j = 0; j < m; ++j) dx.axpy(dy(j), g[j]);
            for (auto& blk : dx.psd) blk = (0.5 * (blk + blk.transpose())).eval();
            dz = rd;
            for (int j = 0; j < m; ++j) dz.axpy(-dy(j), p.a[j]);
        };

        // Predictor: rc = -XZ.
        BlockMatrix rc;
        rc.psd.resize(x.psd.size());
        for (std::size_t k = 0; k < x.psd.size(); ++k) rc.psd[k] = -x.psd[k] * z.psd[k];
        rc.lp = -x.lp.cwiseProduct(z.lp);

        BlockMatrix dx_a, dz_a;
        Vector dy_a;
        direction(rc, dx_a, dy_a, dz_a);
        const double ap_a = std::min(1.0, detail::max_step(x, dx_a));
        const double ad_a = std::min(1.0, detail::max_step(z, dz_a));
        BlockMatrix x_aff = x, z_aff = z;
        x_aff.axpy(ap_a, dx_a);
        z_aff.axpy(ad_a, dz_a);
        const double mu_aff = inner(x_aff, z_aff) / n_total;
        double sigma = mu > 0.0 ? std::pow(std::max(0.0, mu_aff) / mu, 3) : 0.0;
        sigma = std::clamp(sigma, 0.0, 1.0);

        // Corrector: rc = sigma mu I - XZ - dX_a dZ_a.
        for (std::size_t k = 0; k < x.psd.size(); ++k) {
            rc.psd[k] -= dx_a.psd[k] * dz_a.psd[k];
            rc.psd[k].diagonal().array() += sigma * mu;
        }
        rc.lp -= dx_a.lp.cwiseProduct(dz_a.lp);
        rc.lp.array() += sigma * mu;

        BlockMatrix dx, dz;
        Vector dy;
        direction(rc, dx, dy, dz);

        const double gamma = 0.95;
        const double ap = std::min(1.0, gamma * detail::max_step(x, dx));
        const double ad = std::min(1.0, gamma * detail::max_step(z, dz));
        if (!(ap > 1e-14) && !(ad > 1e-14)) break;

        x.axpy(ap, dx);
        z.axpy(ad, dz);
        if (m) y += ad * dy;
    }

    if (best_merit < opts.fallback_tolerance) best.status = Status::Optimal;
    return best;
}

} // namespace qdm::sdp

#endif // QDM_SDP_HPP
