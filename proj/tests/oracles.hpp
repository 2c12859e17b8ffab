#pragma once

// Independent closed forms used as test oracles.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace oracle {

using cd = std::complex<double>;
using M4 = Eigen::Matrix4cd;

inline cd a_of(cd l) { return 0.5 * (l + 1.0 / l); }
inline cd b_of(cd l) { return cd(0, 0.5) * (l - 1.0 / l); }

/// The closed-form Case 3 frame.
inline M4 example_frame(double u, double v, cd l) {
  const cd a = a_of(l), b = b_of(l);
  const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
  M4 f;
  f << cu, -su * sv, a * su * cv, b * su * cv,
       0.0, cv, a * sv, b * sv,
       -a * su, -a * cu * sv, a * a * cu * cv + b * b, a * b * (cu * cv - 1.0),
       -b * su, -b * cu * sv, a * b * (cu * cv - 1.0), b * b * cu * cv + a * a;
  return f;
}

/// du-component of the closed-form Maurer–Cartan form.
inline M4 example_mc_u(double /*u*/, double v, cd l) {
  const cd a = a_of(l), b = b_of(l);
  const double sv = std::sin(v), cv = std::cos(v);
  M4 m = M4::Zero();
  m(0, 1) = -sv;
  m(1, 0) = sv;
  m(0, 2) = a * cv;
  m(0, 3) = b * cv;
  m(2, 0) = -a * cv;
  m(3, 0) = -b * cv;
  return m;
}

/// dv-component of the closed-form Maurer–Cartan form.
inline M4 example_mc_v(double /*u*/, double /*v*/, cd l) {
  const cd a = a_of(l), b = b_of(l);
  M4 m = M4::Zero();
  m(1, 2) = a;
  m(1, 3) = b;
  m(2, 1) = -a;
  m(3, 1) = -b;
  return m;
}

/// Third column of the closed-form frame.
inline Eigen::Vector4cd example_column(double u, double v, cd l) {
  const cd s = l + 1.0 / l, d = l - 1.0 / l;
  Eigen::Vector4cd f;
  f << 0.5 * s * std::sin(u) * std::cos(v), 0.5 * s * std::sin(v),
      0.25 * s * s * std::cos(u) * std::cos(v) - 0.25 * d * d,
      cd(0, 0.25) * s * d * (std::cos(u) * std::cos(v) - 1.0);
  return f;
}

/// ±4/(λ+λ⁻¹)².
inline double curvature(cd l, int sign) {
  const cd s = l + 1.0 / l;
  return (double(sign) * 4.0 / (s * s)).real();
}

}  // namespace oracle
