#include "loopframe/immersions.hpp"

#include "loopframe/finite_diff.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace loopframe {

namespace {

using RMatrix = Eigen::MatrixXd;

double form_dot(const RVector& a, const RVector& b, const SignatureForm& j) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += j[i] * a[i] * b[i];
  return s;
}

// Derivative of surface samples along an axis.
RVector surface_derivative(const ImmersionSurface& s, int axis, int i, int j, int accuracy, int order = 1) {
  const Grid& g = s.grid;
  if (axis == 0) return line_derivative([&](int p) { return s.at(p, j); }, i, g.nu(), g.u.step(), accuracy, order);
  return line_derivative([&](int p) { return s.at(i, p); }, j, g.nv(), g.v.step(), accuracy, order);
}

template <typename Field>
double field_derivative(const Field& f, const Grid& g, int axis, int i, int j, int accuracy, int order = 1) {
  if (axis == 0) return line_derivative([&](int p) { return f[g.index(p, j)]; }, i, g.nu(), g.u.step(), accuracy, order);
  return line_derivative([&](int p) { return f[g.index(i, p)]; }, j, g.nv(), g.v.step(), accuracy, order);
}

// J-Gram–Schmidt: removes the components along an orthonormal list with signs.
RVector j_orthogonalize(RVector y, const std::vector<RVector>& basis, const std::vector<int>& signs,
                        const SignatureForm& j) {
  for (std::size_t b = 0; b < basis.size(); ++b) y -= double(signs[b]) * form_dot(y, basis[b], j) * basis[b];
  return y;
}

}  // namespace

OneFormField AdaptedFrameData::eta_field() const {
  OneFormField e(form.grid, k + 1);
  for (int i = 0; i < form.grid.nu(); ++i)
    for (int j = 0; j < form.grid.nv(); ++j)
      for (int a = 0; a < 2; ++a) e.at(a, i, j) = eta(a, i, j);
  return e;
}

InsertionScales insertion_scales(double c, int j0) {
  if (j0 != 1 && j0 != -1) throw DomainError("position sign must be +1 or -1");
  if (!std::isfinite(c) || c == 0.0) throw DomainError("insertion needs nonzero finite curvature");
  if (c == double(j0))
    throw DomainError("curvature c = " + std::to_string(j0) +
                      " is totally geodesic: the second fundamental form cannot be recovered");
  const cd s = std::sqrt(cd(j0 * c));
  const cd r = std::sqrt(cd(1.0 - j0 * c));
  return {s / 2.0, s / (2.0 * r), (1.0 + r) / s};
}

ConnectionFamily insert_lambda(const AdaptedFrameData& data, double c) {
  const InsertionScales sc = insertion_scales(c, data.j0());
  const int m = data.m, k = data.k, n = data.n();
  const Grid& g = data.form.grid;
  CMatrix j2 = CMatrix::Zero(k + 1, k + 1);
  for (int p = 0; p <= k; ++p) j2(p, p) = double(data.frame_form[m + p]);

  ConnectionFamily fam(g, n);
  OneFormField a0(g, n), ap(g, n), am(g, n);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j)
      for (int axis = 0; axis < 2; ++axis) {
        CMatrix& d0 = a0.at(axis, i, j);
        d0.topLeftCorner(m, m) = data.omega(axis, i, j);
        CMatrix eta = data.eta(axis, i, j);
        eta.row(0).setZero();
        eta.col(0).setZero();
        d0.bottomRightCorner(k + 1, k + 1) = eta;
        for (int sign : {1, -1}) {
          CMatrix b(m, k + 1);
          b.col(0) = sc.theta * data.theta(axis, i, j);
          b.rightCols(k) = double(sign) * sc.beta * data.beta(axis, i, j);
          CMatrix& d = sign > 0 ? ap.at(axis, i, j) : am.at(axis, i, j);
          d.topRightCorner(m, k + 1) = b;
          d.bottomLeftCorner(k + 1, m) = -j2 * b.transpose();
        }
      }
  fam.set(0, a0);
  fam.set(1, ap);
  fam.set(-1, am);
  return fam;
}

ImmersionSurface evaluate_family(const FrameGrid& f, cd lambda, const CatalogRow& row, const EvaluateOptions& opts) {
  if (opts.check_range && !admissible(row.range, lambda)) {
    std::ostringstream os;
    os << "lambda " << lambda << " outside the range " << to_string(row.range) << " of case " << row.case_id
       << " row " << row.row << " (or too close to 0, +-i)";
    throw DomainError(os.str());
  }
  if (f.dim() != row.n()) throw DimensionError("frame size does not match the catalog row");
  const int m = row.m;
  ImmersionSurface s;
  s.grid = f.grid;
  s.ambient = row.target_form;
  s.quadric_sign = row.quadric_sign;
  s.points.reserve(f.values.size());
  for (const CMatrix& frame : f.values) {
    const CVector col = opts.left_factor ? CVector(*opts.left_factor * frame.col(m)) : CVector(frame.col(m));
    CVector x(col.size());
    for (int r = 0; r < col.size(); ++r) x[r] = row.t(r, r) * col[r] / row.t(m, m);
    s.max_imag = std::max(s.max_imag, x.imag().cwiseAbs().maxCoeff());
    s.points.push_back(x.real());
  }
  if (s.max_imag > opts.imag_tolerance) {
    std::ostringstream os;
    os << "evaluated column has imaginary part " << s.max_imag << " > " << opts.imag_tolerance
       << " (reality condition does not match case " << row.case_id << " row " << row.row << ")";
    throw NumericalError(os.str());
  }
  return s;
}

ImmersionSurface evaluate_family(const FrameFamily& f, cd lambda, const CatalogRow& row, const EvaluateOptions& opts) {
  for (std::size_t p = 0; p < f.lambdas.size(); ++p)
    if (std::abs(f.lambdas[p] - lambda) <= 1e-12) return evaluate_family(f.frames[p], lambda, row, opts);
  throw DomainError("lambda is not one of the family's samples");
}

CatalogRow direct_row(const AdaptedFrameData& data) {
  CatalogRow r;
  r.case_id = 0;
  r.row = 0;
  r.m = data.m;
  r.k = data.k;
  r.base_form = data.frame_form;
  r.target_form = data.ambient;
  r.t = CMatrix::Identity(data.n(), data.n());
  r.quadric_sign = data.j0();
  r.curvature_sign = data.j0();
  r.range = LambdaRange::Real;
  r.target_label = "ambient";
  return r;
}

CurvatureField gauss_curvature_estimate(const ImmersionSurface& s, int accuracy, double degeneracy) {
  const Grid& g = s.grid;
  const int np = g.size();
  std::vector<double> e(np), f(np), gg(np);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      const RVector xu = surface_derivative(s, 0, i, j, accuracy);
      const RVector xv = surface_derivative(s, 1, i, j, accuracy);
      const int p = g.index(i, j);
      e[p] = form_dot(xu, xu, s.ambient);
      f[p] = form_dot(xu, xv, s.ambient);
      gg[p] = form_dot(xv, xv, s.ambient);
    }
  // F_u sampled everywhere, then differentiated along v
  std::vector<double> fu(np);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) fu[g.index(i, j)] = field_derivative(f, g, 0, i, j, accuracy);

  CurvatureField out;
  out.grid = g;
  out.values.assign(np, std::numeric_limits<double>::quiet_NaN());
  out.valid.assign(np, false);
  const int margin = std::max(1, accuracy / 2);
  for (int i = margin; i < g.nu() - margin; ++i)
    for (int j = margin; j < g.nv() - margin; ++j) {
      const int p = g.index(i, j);
      const double det = e[p] * gg[p] - f[p] * f[p];
      if (!(std::abs(det) > degeneracy * std::max(1.0, e[p] * e[p] + gg[p] * gg[p]))) {
        ++out.skipped;
        continue;
      }
      const double eu = field_derivative(e, g, 0, i, j, accuracy), ev = field_derivative(e, g, 1, i, j, accuracy);
      const double gu = field_derivative(gg, g, 0, i, j, accuracy), gv = field_derivative(gg, g, 1, i, j, accuracy);
      const double fv = field_derivative(f, g, 1, i, j, accuracy);
      const double evv = field_derivative(e, g, 1, i, j, accuracy, 2);
      const double guu = field_derivative(gg, g, 0, i, j, accuracy, 2);
      const double fuv = field_derivative(fu, g, 1, i, j, accuracy);
      const double fu_p = fu[p];
      Eigen::Matrix3d m1, m2;
      m1 << -0.5 * evv + fuv - 0.5 * guu, 0.5 * eu, fu_p - 0.5 * ev,
            fv - 0.5 * gu, e[p], f[p],
            0.5 * gv, f[p], gg[p];
      m2 << 0.0, 0.5 * ev, 0.5 * gu,
            0.5 * ev, e[p], f[p],
            0.5 * gu, f[p], gg[p];
      out.values[p] = (m1.determinant() - m2.determinant()) / (det * det);
      out.valid[p] = true;
    }
  return out;
}

double quadric_residual(const ImmersionSurface& s) {
  double r = 0.0;
  for (const RVector& x : s.points) r = std::max(r, std::abs(form_dot(x, x, s.ambient) - s.quadric_sign));
  return r;
}

double second_fundamental_form_estimate(const ImmersionSurface& s, int accuracy) {
  const Grid& g = s.grid;
  const int n = s.dim();
  const int margin = std::max(1, accuracy / 2);
  RMatrix jm = RMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p) jm(p, p) = s.ambient[p];
  double r = 0.0;
  for (int i = margin; i < g.nu() - margin; ++i)
    for (int j = margin; j < g.nv() - margin; ++j) {
      const RVector xu = surface_derivative(s, 0, i, j, accuracy);
      const RVector xv = surface_derivative(s, 1, i, j, accuracy);
      const RVector xuu = surface_derivative(s, 0, i, j, accuracy, 2);
      const RVector xvv = surface_derivative(s, 1, i, j, accuracy, 2);
      const RVector xuv = line_derivative([&](int q) { return surface_derivative(s, 0, i, q, accuracy); }, j, g.nv(),
                                          g.v.step(), accuracy);
      RMatrix span(3, n);
      span.row(0) = (jm * s.at(i, j)).transpose();
      span.row(1) = (jm * xu).transpose();
      span.row(2) = (jm * xv).transpose();
      Eigen::JacobiSVD<RMatrix> svd(span, Eigen::ComputeFullV);
      for (int c = 3; c < n; ++c) {
        RVector xi = svd.matrixV().col(c);
        const double norm2 = std::abs(form_dot(xi, xi, s.ambient));
        if (norm2 < 1e-12) continue;
        xi /= std::sqrt(norm2);
        for (const RVector* d : {&xuu, &xuv, &xvv}) r = std::max(r, std::abs(form_dot(*d, xi, s.ambient)));
      }
    }
  return r;
}

double normal_flatness_residual(const OneFormField& eta) { return curvature_residual(eta); }

int coframe_rank(const ConnectionFamily& a, cd lambda, int i, int j, int m, double threshold) {
  if (std::abs(lambda) <= kExclusionRadius) throw DomainError("coframe rank undefined at lambda = 0");
  if (m < 1 || m >= a.n) throw DimensionError("tangent dimension does not fit the connection");
  CMatrix c(m, 2);
  for (int axis = 0; axis < 2; ++axis) c.col(axis) = a.value(axis, i, j, lambda).block(0, m, m, 1);
  Eigen::JacobiSVD<CMatrix> svd(c);
  int rank = 0;
  for (int p = 0; p < svd.singularValues().size(); ++p)
    if (svd.singularValues()[p] > threshold) ++rank;
  return rank;
}

CatalogRow row_for_lambda(int case_id, cd lambda, int m, int k) {
  for (int row : {3, 2, 1}) {
    const CatalogRow r = case_catalog(case_id, row, m, k);
    if (admissible(r.range, lambda)) return r;
  }
  std::ostringstream os;
  os << "lambda " << lambda << " lies in none of the ranges of case " << case_id;
  throw DomainError(os.str());
}

MetricRatio metric_ratio(const ConnectionFamily& a, cd lambda1, cd lambda2, int case_id, int m,
                         const std::vector<std::pair<int, int>>& probes, double tolerance) {
  const int k = a.n - m - 1;
  const CatalogRow r1 = row_for_lambda(case_id, lambda1, m, k), r2 = row_for_lambda(case_id, lambda2, m, k);
  if (probes.empty()) throw DomainError("metric_ratio needs probe points");
  auto metric = [&](const CatalogRow& row, cd lambda, int i, int j) {
    Eigen::MatrixXd th(m, 2);
    for (int axis = 0; axis < 2; ++axis) {
      const CMatrix x = a.value(axis, i, j, lambda);
      for (int r = 0; r < m; ++r) th(r, axis) = (row.t(r, r) * x(r, m) / row.t(m, m)).real();
    }
    return Eigen::Matrix2d(th.transpose() * th);
  };
  std::vector<double> ratios;
  double mismatch = 0.0;
  for (auto [i, j] : probes) {
    const Eigen::Matrix2d g1 = metric(r1, lambda1, i, j), g2 = metric(r2, lambda2, i, j);
    const double n1 = g1.squaredNorm();
    if (n1 <= 1e-24) throw DomainError("metric_ratio probe at a degenerate point");
    const double q = (g1.array() * g2.array()).sum() / n1;
    ratios.push_back(q);
    mismatch = std::max(mismatch, (g2 - q * g1).norm() / std::max(g2.norm(), 1e-300));
  }
  MetricRatio out;
  double sum = 0.0;
  for (double q : ratios) sum += q;
  out.ratio = sum / ratios.size();
  for (double q : ratios) out.spread = std::max(out.spread, std::abs(q - out.ratio) / std::abs(out.ratio));
  out.spread = std::max(out.spread, mismatch);
  if (out.spread > tolerance) {
    std::ostringstream os;
    os << "induced metrics are not constant multiples (relative spread " << out.spread << ")";
    throw NumericalError(os.str());
  }
  return out;
}

AdaptedFrameData extract_adapted_frame(const ImmersionSurface& s, const ExtractOptions& opts) {
  const Grid& g = s.grid;
  const int n = s.dim(), m = 2, k = n - m - 1;
  if (k < 0) throw DimensionError("surface needs at least 3 ambient coordinates");
  const SignatureForm& jh = s.ambient;

  // normal seeds: complete {e1, e2, x} at the base point from the standard basis
  auto tangent_frame = [&](int i, int j, std::vector<RVector>& basis, std::vector<int>& signs) {
    const RVector x = s.at(i, j);
    RVector t[2] = {surface_derivative(s, 0, i, j, opts.accuracy), surface_derivative(s, 1, i, j, opts.accuracy)};
    if (opts.reverse_tangent_order) std::swap(t[0], t[1]);
    basis.clear();
    signs.clear();
    const double xx = form_dot(x, x, jh);
    if (std::abs(xx) < 1e-8) throw DomainError("surface point is null for the ambient form");
    for (int p = 0; p < 2; ++p) {
      RVector y = j_orthogonalize(t[p], basis, signs, jh);
      const double yy = form_dot(y, y, jh);
      if (!(yy > opts.rank_tolerance)) {
        std::ostringstream os;
        os << "tangent space degenerate at grid point (" << i << ", " << j << ")";
        throw DomainError(os.str());
      }
      basis.push_back(y / std::sqrt(yy));
      signs.push_back(1);
    }
    basis.push_back(x / std::sqrt(std::abs(xx)));
    signs.push_back(xx > 0 ? 1 : -1);
  };

  std::vector<RVector> basis;
  std::vector<int> signs;
  tangent_frame(g.base_i, g.base_j, basis, signs);
  std::vector<RVector> seeds;
  {
    std::vector<RVector> b = basis;
    std::vector<int> sg = signs;
    for (int c = 0; c < k; ++c) {
      RVector best;
      double best_norm = 0.0;
      for (int e = 0; e < n; ++e) {
        RVector y = j_orthogonalize(RVector::Unit(n, e), b, sg, jh);
        const double yy = std::abs(form_dot(y, y, jh));
        if (yy > best_norm) {
          best_norm = yy;
          best = y;
        }
      }
      if (best_norm < 1e-8) throw DomainError("normal complement is degenerate");
      const double yy = form_dot(best, best, jh);
      b.push_back(best / std::sqrt(std::abs(yy)));
      sg.push_back(yy > 0 ? 1 : -1);
      seeds.push_back(b.back());
    }
  }

  std::vector<RMatrix> frames(g.size());
  std::vector<int> frame_signs;
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      tangent_frame(i, j, basis, signs);
      for (int c = 0; c < k; ++c) {
        RVector y = j_orthogonalize(seeds[c], basis, signs, jh);
        const double yy = form_dot(y, y, jh);
        if (std::abs(yy) < 1e-8) throw DomainError("normal complement is degenerate");
        basis.push_back(y / std::sqrt(std::abs(yy)));
        signs.push_back(yy > 0 ? 1 : -1);
      }
      RMatrix e(n, n);
      for (int c = 0; c < n; ++c) e.col(c) = basis[c];
      if (e.determinant() < 0) e.col(n - 1) *= -1.0;
      if (frame_signs.empty())
        frame_signs = signs;
      else if (frame_signs != signs)
        throw DomainError("signature of the adapted frame changes across the surface");
      frames[g.index(i, j)] = e;
    }

  AdaptedFrameData d;
  d.m = m;
  d.k = k;
  d.ambient = jh;
  d.frame_form = SignatureForm(frame_signs);
  d.form = OneFormField(g, n);
  d.base_frame = frames[g.index(g.base_i, g.base_j)].cast<cd>();
  const RMatrix jf = d.frame_form.matrix().real();
  const RMatrix ja = jh.matrix().real();
  RMatrix jn = jf.bottomRightCorner(k, k);
  RMatrix j2 = jf.bottomRightCorner(k + 1, k + 1);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      const RMatrix& e = frames[g.index(i, j)];
      const RMatrix einv = jf * e.transpose() * ja;
      for (int axis = 0; axis < 2; ++axis) {
        RMatrix de = axis == 0 ? line_derivative([&](int p) { return frames[g.index(p, j)]; }, i, g.nu(), g.u.step(),
                                                 opts.accuracy)
                               : line_derivative([&](int p) { return frames[g.index(i, p)]; }, j, g.nv(), g.v.step(),
                                                 opts.accuracy);
        const RMatrix x = einv * de;
        RMatrix clean = RMatrix::Zero(n, n);
        clean.topLeftCorner(m, m) = 0.5 * (x.topLeftCorner(m, m) - x.topLeftCorner(m, m).transpose());
        const RMatrix b = x.topRightCorner(m, k + 1);
        clean.topRightCorner(m, k + 1) = b;
        clean.bottomLeftCorner(k + 1, m) = -j2 * b.transpose();
        if (k > 0) {
          const RMatrix eta = x.bottomRightCorner(k, k);
          clean.bottomRightCorner(k, k) = 0.5 * (eta - jn * eta.transpose() * jn);
        }
        d.form.at(axis, i, j) = clean.cast<cd>();
      }
    }
  return d;
}

double surface_distance(const ImmersionSurface& a, const ImmersionSurface& b) {
  if (a.points.size() != b.points.size()) throw DimensionError("surfaces have different sizes");
  double r = 0.0;
  for (std::size_t p = 0; p < a.points.size(); ++p) r = std::max(r, (a.points[p] - b.points[p]).cwiseAbs().maxCoeff());
  return r;
}

}  // namespace loopframe
