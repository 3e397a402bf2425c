// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "iaese/linalg.hpp"

#include "iaese/error.hpp"

#include <cmath>
#include <string>

namespace iaese {

bool all_finite(const CMatrix& a)
{
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const Complex z = a(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                return false;
            }
        }
    }
    return true;
}

OrderedSvd ordered_svd(const CMatrix& a)
{
    if (a.rows() < 1 || a.cols() < 1) {
        throw InvalidInput("ordered_svd: empty matrix");
    }
    if (!all_finite(a)) {
        throw InvalidInput("ordered_svd: non-finite entry");
    }

    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    OrderedSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

    // Eigen already sorts singular values in decreasing order; the phase
    // convention below is what makes results backend independent.
    const Eigen::Index p = out.s.size();
    for (Eigen::Index j = 0; j < out.u.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < out.u.rows(); ++i) {
            const double mag = std::abs(out.u(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (best <= 0.0) {
            continue;
        }
        const Complex phase = std::conj(out.u(arg, j)) / best;
        out.u.col(j) *= phase;
        if (j < p) {
            out.v.col(j) *= phase;
        }
        out.u(arg, j) = Complex(out.u(arg, j).real(), 0.0);
    }
    return out;
}

std::size_t numerical_rank(const RVector& singular_values)
{
    if (singular_values.size() == 0 || singular_values(0) <= 0.0) {
        return 0;
    }
    const double floor = kRankThreshold * singular_values(0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
        if (singular_values(i) > floor) {
            ++rank;
        }
    }
    return rank;
}

CMatrix left_nullspace_basis(const CMatrix& a, std::size_t dims)
{
    const auto rows = static_cast<std::size_t>(a.rows());
    if (a.cols() == 0) {
        if (dims > rows) {
            throw RankDeficit("left_nullspace_basis: " + std::to_string(dims) +
                                  " dimensions requested, " + std::to_string(rows) +
                                  " available",
                              rows);
        }
        return CMatrix::Identity(a.rows(), a.rows()).rightCols(static_cast<Eigen::Index>(dims));
    }

    const OrderedSvd svd = ordered_svd(a);
    const std::size_t available = rows - numerical_rank(svd.s);
    if (dims > available) {
        throw RankDeficit("left_nullspace_basis: " + std::to_string(dims) +
                              " dimensions requested, " + std::to_string(available) +
                              " available",
                          available);
    }
    return svd.u.rightCols(static_cast<Eigen::Index>(dims));
}

CMatrix dominant_left_singular_vectors(const CMatrix& a, std::size_t dims)
{
    if (dims > static_cast<std::size_t>(a.rows())) {
        throw InvalidInput("dominant_left_singular_vectors: more columns than rows requested");
    }
    const OrderedSvd svd = ordered_svd(a);
    return svd.u.leftCols(static_cast<Eigen::Index>(dims));
}

ZfBeamformer zf_right_inverse(const CMatrix& h)
{
    if (h.rows() < 1 || h.rows() > h.cols()) {
        throw InvalidInput("zf_right_inverse: expected a wide matrix with at least one row");
    }
    if (!all_finite(h)) {
        throw InvalidInput("zf_right_inverse: non-finite entry");
    }

    // cond(H H^H) = cond(H)^2.
    const RVector s = Eigen::BDCSVD<CMatrix>(h).singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0) || (smax / smin) * (smax / smin) > kConditionCap) {
        throw SingularGroup("zf_right_inverse: stacked rows are (numerically) dependent");
    }

    // H^H = Q R, hence H^+ = Q R^-H. Avoids squaring the condition number.
    const CMatrix hh = h.adjoint();
    Eigen::HouseholderQR<CMatrix> qr(hh);
    const Eigen::Index r = h.rows();
    const CMatrix q = qr.householderQ() * CMatrix::Identity(hh.rows(), r);
    const CMatrix rtop = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const CMatrix rinv_h =
        rtop.adjoint().triangularView<Eigen::Lower>().solve(CMatrix::Identity(r, r));
    CMatrix x = q * rinv_h;

    ZfBeamformer out{CMatrix(x.rows(), x.cols()), RVector(r)};
    for (Eigen::Index i = 0; i < r; ++i) {
        const double norm = x.col(i).norm();
        out.t.col(i) = x.col(i) / norm;
        out.gains(i) = 1.0 / (norm * norm);
    }
    return out;
}

CMatrix block_diagonal(std::span<const CMatrix> blocks)
{
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    CMatrix out = CMatrix::Zero(rows, cols);
    Eigen::Index r0 = 0;
    Eigen::Index c0 = 0;
    for (const auto& b : blocks) {
        out.block(r0, c0, b.rows(), b.cols()) = b;
        r0 += b.rows();
        c0 += b.cols();
    }
    return out;
}

} // namespace iaese
