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

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>

namespace iaese {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using RVector = Eigen::VectorXd;

/// Singular values at or below this fraction of the largest one count as zero.
inline constexpr double kRankThreshold = 1e-9;

/// Largest admissible condition number of H * H^H in the ZF right inverse.
inline constexpr double kConditionCap = 1e10;

/// Full singular value decomposition A = U * diag(S) * V^H.
///
/// U is rows x rows and V is cols x cols (both square), S has min(rows, cols)
/// entries sorted non-increasing. Each column of U is rotated so that its
/// largest-magnitude entry is real and positive; the matching column of V is
/// rotated by the same phase so the product is unchanged.
struct OrderedSvd {
    CMatrix u;
    RVector s;
    CMatrix v;
};

OrderedSvd ordered_svd(const CMatrix& a);

/// Number of singular values above kRankThreshold * s[0].
std::size_t numerical_rank(const RVector& singular_values);

/// The `dims` rightmost columns of U from ordered_svd(a).
///
/// Throws RankDeficit (carrying rows - rank) when `dims` exceeds the left
/// nullspace dimension. A matrix with zero columns has the whole space as its
/// left nullspace.
CMatrix left_nullspace_basis(const CMatrix& a, std::size_t dims);

/// The `dims` leftmost columns of U, i.e. the dominant left singular vectors.
CMatrix dominant_left_singular_vectors(const CMatrix& a, std::size_t dims);

/// Column-normalized zero-forcing right inverse of a wide matrix.
struct ZfBeamformer {
    CMatrix t;      ///< H^H (H H^H)^-1 W^1/2, unit-norm columns
    RVector gains;  ///< diagonal of W; H * t = diag(sqrt(gains))
};

/// Throws InvalidInput when rows > cols and SingularGroup when H H^H is
/// singular or its condition number exceeds kConditionCap.
ZfBeamformer zf_right_inverse(const CMatrix& h);

/// Block-diagonal concatenation of the given blocks.
CMatrix block_diagonal(std::span<const CMatrix> blocks);

/// True when every entry is finite.
bool all_finite(const CMatrix& a);

} // namespace iaese
