#include "r13fem/tensorops.hpp"

namespace r13 {

Tensor2 stf3d2(const Tensor2& a) {
  const double tr3 = (a[0][0] + a[1][1]) / 3.0;
  const double off = 0.5 * (a[0][1] + a[1][0]);
  return {{{a[0][0] - tr3, off}, {off, a[1][1] - tr3}}};
}

Tensor3x3 gen3d_tf2(const Tensor2& a) {
  return {{{a[0][0], a[0][1], 0.0}, {a[1][0], a[1][1], 0.0}, {0.0, 0.0, -a[0][0] - a[1][1]}}};
}

Tensor3 grad3d_of_2(const Tensor3x3& d_dx, const Tensor3x3& d_dy) {
  Tensor3 g{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      g[i][j][0] = d_dx[i][j];
      g[i][j][1] = d_dy[i][j];
      g[i][j][2] = 0.0;
    }
  }
  return g;
}

Tensor3 sym3d3(const Tensor3& b) {
  Tensor3 s{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        s[i][j][k] = (b[i][j][k] + b[i][k][j] + b[j][i][k] + b[j][k][i] + b[k][i][j] + b[k][j][i]) / 6.0;
      }
    }
  }
  return s;
}

Tensor3 stf3d3(const Tensor3& b) {
  Tensor3 s = sym3d3(b);
  // For a symmetric tensor the three traces coincide: v_i = S_ill.
  double v[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) v[i] += s[i][l][l];
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        double corr = 0.0;
        if (j == k) corr += v[i];
        if (i == k) corr += v[j];
        if (i == j) corr += v[k];
        s[i][j][k] -= corr / 5.0;
      }
    }
  }
  return s;
}

double inner2(const Tensor3x3& a, const Tensor3x3& b) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r += a[i][j] * b[i][j];
  }
  return r;
}

double inner3(const Tensor3& a, const Tensor3& b) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) r += a[i][j][k] * b[i][j][k];
    }
  }
  return r;
}

}  // namespace r13
