#include "loopframe/flats.hpp"

#include <cmath>
#include <sstream>

namespace loopframe {

FlatResiduals flat_residuals(const OneFormField& eta) { return {closedness_residual(eta), wedge_residual(eta)}; }

double CurvedFlatData::off_block_residual() const {
  const CMatrix pm = p.matrix();
  double r = 0.0;
  for (int a = 0; a < 2; ++a)
    for (const CMatrix& x : eta.components[a]) r = std::max(r, max_abs(pm * x * pm + x));
  return r;
}

double family_fixed_residual(const FrameFamily& f, const InvolutionSpec& s) {
  s.check_dimension(f.dim());
  double r = 0.0;
  for (std::size_t a = 0; a < f.lambdas.size(); ++a) {
    const cd image = s.map_lambda(f.lambdas[a]);
    for (std::size_t b = 0; b < f.lambdas.size(); ++b) {
      if (std::abs(f.lambdas[b] - image) > 1e-12 * std::max(1.0, std::abs(image))) continue;
      const auto& fa = f.frames[a].values;
      const auto& fb = f.frames[b].values;
      for (std::size_t p = 0; p < fa.size(); ++p) r = std::max(r, max_abs(fa[p] - s.apply_matrix(fb[p])));
      break;
    }
  }
  return r;
}

OneFormField gauge_normalize(const OneFormField& a0, const OneFormField& a1, double tolerance, FrameGrid* gauge) {
  if (!(a0.grid == a1.grid) || a0.n != a1.n) throw DimensionError("gauge_normalize needs fields on one grid");
  IntegrationOptions opts;
  opts.holonomy_tolerance = tolerance;
  FrameGrid k;
  try {
    k = integrate_frame(ConnectionFamily::single(a0, 0), 1.0, opts);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("A0 is not integrable: ") + e.what());
  }
  OneFormField out(a1.grid, a1.n);
  for (int a = 0; a < 2; ++a)
    for (std::size_t p = 0; p < k.values.size(); ++p)
      out.components[a][p] = k.values[p] * a1.components[a][p] * k.values[p].inverse();
  if (gauge) *gauge = std::move(k);
  return out;
}

namespace {

void require_flat(const FlatResiduals& r, double threshold) {
  if (r.closed > threshold || r.wedge > threshold) {
    std::ostringstream os;
    os << "curved flat equations violated: |d eta| = " << r.closed << ", |eta ^ eta| = " << r.wedge << " > "
       << threshold;
    throw NumericalError(os.str());
  }
}

}  // namespace

FrameFamily curved_flat_from_eta(const OneFormField& eta, const std::vector<cd>& lambdas,
                                 const CurvedFlatOptions& opts) {
  require_flat(flat_residuals(eta), opts.residual_threshold);
  return integrate_family(ConnectionFamily::single(eta, 1), lambdas, opts.integration);
}

FrameFamily curved_flat_from_eta(const ExprForm& eta, const Grid& g, const std::vector<cd>& lambdas,
                                 const CurvedFlatOptions& opts) {
  if (eta.terms.size() != 1 || eta.terms.begin()->first != 1)
    throw DomainError("a normalized curved flat has a Maurer-Cartan form of pure degree 1");
  const ConnectionFamily c = eta.family(g);
  require_flat(flat_residuals(c.coeffs.at(1)), opts.residual_threshold);
  return integrate_family(c, lambdas, opts.integration);
}

void ComplexStrip::validate() const {
  for (int a = 0; a < 2; ++a) {
    if (!(eps[a] > 0.0) || !std::isfinite(eps[a])) throw DomainError("strip half-width must be positive");
    if (counts[a] < 1 || counts[a] % 2 == 0) throw DomainError("imaginary sample counts must be odd");
  }
}

ComplexStrip ComplexStrip::scaled(double factor) const {
  ComplexStrip s = *this;
  s.eps[0] *= factor;
  s.eps[1] *= factor;
  return s;
}

CMatrix ComplexifiedForm::coefficient(int degree, int axis, int i, int j, int k1, int k2) const {
  return form.coefficient(degree, axis, strip.z(0, i, k1), strip.z(1, j, k2));
}

CMatrix ComplexifiedForm::value(int axis, int i, int j, int k1, int k2, cd lambda) const {
  return form.eval(axis, strip.z(0, i, k1), strip.z(1, j, k2), lambda);
}

namespace {

bool finite_everywhere(const ExprForm& form, const ComplexStrip& s) {
  for (int i = 0; i < s.base.nu(); ++i)
    for (int j = 0; j < s.base.nv(); ++j)
      for (int k1 = 0; k1 < s.counts[0]; ++k1)
        for (int k2 = 0; k2 < s.counts[1]; ++k2)
          for (const auto& [d, parts] : form.terms)
            for (int a = 0; a < 2; ++a)
              if (!all_finite(form.coefficient(d, a, s.z(0, i, k1), s.z(1, j, k2)))) return false;
  return true;
}

}  // namespace

ComplexifiedForm complexify_eta(const ExprForm& form, const ComplexStrip& strip, const ComplexifyOptions& opts) {
  strip.validate();
  ComplexifiedForm c;
  c.form = form;
  c.strip = strip;
  c.requested_eps = std::max(strip.eps[0], strip.eps[1]);
  const std::vector<Expr> factors = form.singular_factors();
  for (;;) {
    const PoleReport pole = find_poles(factors, c.strip.base, c.strip.eps);
    const bool ok = !pole.found && finite_everywhere(form, c.strip);
    if (ok) return c;
    if (!opts.auto_shrink || c.halvings >= opts.max_halvings) {
      std::ostringstream os;
      os << "closed form is not holomorphic on the strip of half-width " << std::max(c.strip.eps[0], c.strip.eps[1]);
      if (pole.found)
        os << ": factor " << pole.factor << " vanishes near u = " << pole.location_u << ", v = " << pole.location_v;
      else
        os << ": evaluation overflow";
      os << "; try --strip-eps " << 0.5 * std::max(c.strip.eps[0], c.strip.eps[1]);
      throw DomainError(os.str());
    }
    c.strip = c.strip.scaled(0.5);
    ++c.halvings;
  }
}

double real_slice_error(const ComplexifiedForm& c, const ConnectionFamily& real) {
  const ComplexStrip& s = c.strip;
  if (!(s.base == real.grid)) throw DimensionError("strip and connection grids differ");
  double r = 0.0;
  for (const auto& [d, field] : real.coeffs)
    for (int i = 0; i < s.base.nu(); ++i)
      for (int j = 0; j < s.base.nv(); ++j)
        for (int a = 0; a < 2; ++a)
          r = std::max(r, max_abs(c.coefficient(d, a, i, j, s.centre(0), s.centre(1)) - field.at(a, i, j)));
  return r;
}

namespace {

// Samples of one complexified component over the whole strip.
std::vector<CMatrix> sample(const ComplexStrip& s, const std::function<CMatrix(cd, cd)>& f) {
  std::vector<CMatrix> out(s.size());
  for (int i = 0; i < s.base.nu(); ++i)
    for (int j = 0; j < s.base.nv(); ++j)
      for (int k1 = 0; k1 < s.counts[0]; ++k1)
        for (int k2 = 0; k2 < s.counts[1]; ++k2) out[s.index(i, j, k1, k2)] = f(s.z(0, i, k1), s.z(1, j, k2));
  return out;
}

// Holomorphic derivative of holomorphic samples: ∂_z = ∂_x.
template <typename Fn>
double max_over_strip(const ComplexStrip& s, Fn fn) {
  double r = 0.0;
  for (int i = 0; i < s.base.nu(); ++i)
    for (int j = 0; j < s.base.nv(); ++j)
      for (int k1 = 0; k1 < s.counts[0]; ++k1)
        for (int k2 = 0; k2 < s.counts[1]; ++k2) r = std::max(r, fn(i, j, k1, k2));
  return r;
}

}  // namespace

FlatResiduals holomorphic_flat_residuals(const ComplexifiedForm& c, int degree, int accuracy) {
  const ComplexStrip& s = c.strip;
  const auto e1 = sample(s, [&](cd u, cd v) { return c.form.coefficient(degree, 0, u, v); });
  const auto e2 = sample(s, [&](cd u, cd v) { return c.form.coefficient(degree, 1, u, v); });
  auto get1 = [&](int i, int j, int k1, int k2) { return e1[s.index(i, j, k1, k2)]; };
  auto get2 = [&](int i, int j, int k1, int k2) { return e2[s.index(i, j, k1, k2)]; };
  FlatResiduals r;
  r.closed = max_over_strip(s, [&](int i, int j, int k1, int k2) {
    const CMatrix d = strip_derivative(s, get2, 0, false, i, j, k1, k2, accuracy) -
                      strip_derivative(s, get1, 1, false, i, j, k1, k2, accuracy);
    return max_abs(d);
  });
  r.wedge = max_over_strip(s, [&](int i, int j, int k1, int k2) {
    const int p = s.index(i, j, k1, k2);
    return max_abs(commutator(e1[p], e2[p]));
  });
  return r;
}

double holomorphic_mc_residual(const ComplexifiedForm& c, cd lambda, int accuracy) {
  const ComplexStrip& s = c.strip;
  const auto a1 = sample(s, [&](cd u, cd v) { return c.form.eval(0, u, v, lambda); });
  const auto a2 = sample(s, [&](cd u, cd v) { return c.form.eval(1, u, v, lambda); });
  auto get1 = [&](int i, int j, int k1, int k2) { return a1[s.index(i, j, k1, k2)]; };
  auto get2 = [&](int i, int j, int k1, int k2) { return a2[s.index(i, j, k1, k2)]; };
  return max_over_strip(s, [&](int i, int j, int k1, int k2) {
    const int p = s.index(i, j, k1, k2);
    const CMatrix d = strip_derivative(s, get2, 0, false, i, j, k1, k2, accuracy) -
                      strip_derivative(s, get1, 1, false, i, j, k1, k2, accuracy) + commutator(a1[p], a2[p]);
    return max_abs(d);
  });
}

StripFrames::StripFrames(const ComplexStrip& s, int dim) : strip(s), values(s.size(), CMatrix::Identity(dim, dim)) {}

FrameGrid StripFrames::slice(int k1, int k2) const {
  FrameGrid g(strip.base, dim());
  for (int i = 0; i < strip.base.nu(); ++i)
    for (int j = 0; j < strip.base.nv(); ++j) g.at(i, j) = at(i, j, k1, k2);
  return g;
}

FrameGrid StripFrames::real_slice() const { return slice(strip.centre(0), strip.centre(1)); }

FrameFamily StripFamily::slice(int k1, int k2) const {
  FrameFamily f;
  f.lambdas = lambdas;
  for (const auto& s : frames) f.frames.push_back(s.slice(k1, k2));
  return f;
}

FrameFamily StripFamily::real_slice() const { return slice(strip().centre(0), strip().centre(1)); }

StripFamily extend_frame_holo(const ComplexifiedForm& c, const std::vector<cd>& lambdas, const HoloOptions& opts) {
  const ComplexStrip& s = c.strip;
  s.validate();
  const int n = c.form.n;
  const ConnectionFamily real = c.form.family(s.base);
  const int first = opts.first_axis, second = 1 - opts.first_axis;
  StripFamily out;
  out.lambdas = lambdas;
  for (cd lambda : lambdas) {
    const FrameGrid base = integrate_frame(real, lambda, opts.real);
    StripFrames f(s, n);
    const cd I(0.0, 1.0);
    for (int i = 0; i < s.base.nu(); ++i)
      for (int j = 0; j < s.base.nv(); ++j) {
        const int real_index[2] = {i, j};
        const cd x[2] = {s.base.u.at(i), s.base.v.at(j)};
        auto z_at = [&](int axis, double y) { return x[axis] + I * y; };
        // along y_first from 0, then y_second from 0 on every first-axis offset
        const int c1 = s.centre(first), c2 = s.centre(second);
        std::vector<CMatrix> first_line(s.counts[first]);
        first_line[c1] = base.at(i, j);
        for (int dir : {1, -1})
          for (int k = c1 + dir; k >= 0 && k < s.counts[first]; k += dir) {
            const double h = dir * s.y_step(first);
            auto a = [&](double y) {
              cd z[2];
              z[first] = z_at(first, y);
              z[second] = x[second];
              return CMatrix(I * c.form.eval(first, z[0], z[1], lambda));
            };
            first_line[k] = first_line[k - dir] * line_propagator(a, s.y(first, k - dir), h, opts.substeps);
          }
        for (int k = 0; k < s.counts[first]; ++k) {
          std::vector<CMatrix> line(s.counts[second]);
          line[c2] = first_line[k];
          for (int dir : {1, -1})
            for (int q = c2 + dir; q >= 0 && q < s.counts[second]; q += dir) {
              const double h = dir * s.y_step(second);
              auto a = [&](double y) {
                cd z[2];
                z[first] = z_at(first, s.y(first, k));
                z[second] = z_at(second, y);
                return CMatrix(I * c.form.eval(second, z[0], z[1], lambda));
              };
              line[q] = line[q - dir] * line_propagator(a, s.y(second, q - dir), h, opts.substeps);
            }
          for (int q = 0; q < s.counts[second]; ++q) {
            int kk[2];
            kk[first] = k;
            kk[second] = q;
            f.at(real_index[0], real_index[1], kk[0], kk[1]) = line[q];
          }
        }
      }
    out.frames.push_back(std::move(f));
  }
  if (opts.cr_tolerance >= 0.0) {
    const double r = cr_residual(out, opts.cr_accuracy);
    if (r > opts.cr_tolerance) {
      std::ostringstream os;
      os << "holomorphic extension has Cauchy-Riemann residual " << r << " > " << opts.cr_tolerance;
      throw NumericalError(os.str());
    }
  }
  return out;
}

double cr_residual(const StripFrames& f, int accuracy) {
  const ComplexStrip& s = f.strip;
  const cd I(0.0, 1.0);
  auto get = [&](int i, int j, int k1, int k2) { return f.at(i, j, k1, k2); };
  return max_over_strip(s, [&](int i, int j, int k1, int k2) {
    double r = 0.0;
    for (int a = 0; a < 2; ++a) {
      if (s.counts[a] < 3) continue;
      const CMatrix dbar = 0.5 * (strip_derivative(s, get, a, false, i, j, k1, k2, accuracy) +
                                  I * strip_derivative(s, get, a, true, i, j, k1, k2, accuracy));
      r = std::max(r, max_abs(dbar));
    }
    return r;
  });
}

double cr_residual(const StripFamily& f, int accuracy) {
  double r = 0.0;
  for (const auto& s : f.frames) r = std::max(r, cr_residual(s, accuracy));
  return r;
}

}  // namespace loopframe
