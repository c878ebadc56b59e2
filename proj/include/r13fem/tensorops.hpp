#pragma once

#include <array>

namespace r13 {

using Tensor2 = std::array<std::array<double, 2>, 2>;
using Tensor3x3 = std::array<std::array<double, 3>, 3>;
/// Rank-3 tensor in 3D, indexed [i][j][k].
using Tensor3 = std::array<std::array<std::array<double, 3>, 3>, 3>;

/// sym(A) - tr(A)/3 I: the in-plane block of the 3D trace-free part of A padded with zeros.
Tensor2 stf3d2(const Tensor2& a);

/// Lifts a 2D tensor to 3x3; the (z,z) entry is -(a_xx + a_yy) so the result is trace free.
Tensor3x3 gen3d_tf2(const Tensor2& a);

/// 3D gradient of a lifted tensor field given its x and y derivatives.
/// The derivative index is the last one: G[i][j][0] = d_x L_ij, G[i][j][1] = d_y L_ij,
/// G[i][j][2] = 0.
Tensor3 grad3d_of_2(const Tensor3x3& d_dx, const Tensor3x3& d_dy);

/// Average over all six index permutations.
Tensor3 sym3d3(const Tensor3& b);

/// Symmetric trace-free part: sym(B) minus the 1/5 trace corrections.
Tensor3 stf3d3(const Tensor3& b);

double inner2(const Tensor3x3& a, const Tensor3x3& b);
double inner3(const Tensor3& a, const Tensor3& b);

}  // namespace r13
