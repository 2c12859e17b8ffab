#include "loopframe/factorization.hpp"

#include "loopframe/parallel.hpp"

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace loopframe {

namespace {

// c_d = (1/N) Σ_k X(λ_k) λ_k^{−d} for −N/2 < d < N/2.
std::map<int, CMatrix> fourier(const std::vector<CMatrix>& v) {
  const int count = static_cast<int>(v.size());
  if (count == 0) throw DomainError("empty circle sampling");
  const int n = static_cast<int>(v.front().rows());
  std::map<int, CMatrix> c;
  for (int j = 0; j < count; ++j) {
    if (2 * j == count) continue;
    c.emplace(2 * j < count ? j : j - count, CMatrix::Zero(n, n));
  }
  Eigen::FFT<double> fft;
  std::vector<cd> in(count), out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < count; ++k) in[k] = v[k](a, b);
      fft.fwd(out, in);
      for (int j = 0; j < count; ++j) {
        if (2 * j == count) continue;
        c.at(2 * j < count ? j : j - count)(a, b) = out[j] / double(count);
      }
    }
  return c;
}

std::vector<CMatrix> evaluate(const std::map<int, CMatrix>& c, int n, int count) {
  const std::vector<cd> pts = circle_points(count);
  std::vector<CMatrix> out(count, CMatrix::Zero(n, n));
  for (const auto& [d, m] : c) {
    for (int k = 0; k < count; ++k) {
      const int e = ((static_cast<long long>(k) * d) % count + count) % count;
      out[k] += pts[e] * m;
    }
  }
  return out;
}

double coeff_norm(const CMatrix& m) { return max_abs(m); }

std::vector<CMatrix> mirrored(const std::vector<CMatrix>& v) {
  const int count = static_cast<int>(v.size());
  std::vector<CMatrix> out(count);
  for (int k = 0; k < count; ++k) out[k] = v[(count - k) % count];
  return out;
}

SplitResult left_split(const std::vector<CMatrix>& l, const SplitOptions& o) {
  const int count = static_cast<int>(l.size());
  const int n = static_cast<int>(l.front().rows());
  const int bw = o.bandwidth;
  if (bw < 1) throw DomainError("bandwidth must be positive");
  if (count < 4 * bw) throw DomainError("need at least 4x bandwidth circle samples");
  const std::map<int, CMatrix> c = fourier(l);
  double scale = 0.0;
  for (const auto& [d, m] : c) scale = std::max(scale, coeff_norm(m));
  const double floor = 1e-15 * std::max(scale, 1.0);
  int dmax = 0, dmin = 0;
  for (const auto& [d, m] : c)
    if (coeff_norm(m) > floor) {
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
  const int dcount = bw + dmax;

  // [X_1 .. X_B]·T = −[L_1 .. L_D] with T(j, d) = L_{d−j}
  CMatrix t = CMatrix::Zero(n * bw, n * dcount);
  CMatrix r = CMatrix::Zero(n, n * dcount);
  for (int j = 1; j <= bw; ++j)
    for (int d = 1; d <= dcount; ++d) {
      const int k = d - j;
      if (k >= dmin && k <= dmax) t.block(n * (j - 1), n * (d - 1), n, n) = c.at(k);
    }
  for (int d = 1; d <= dmax; ++d) r.block(0, n * (d - 1), n, n) = c.at(d);

  // pivoted QR; the ratio of extreme diagonal entries of R estimates the condition
  const Eigen::ColPivHouseholderQR<CMatrix> qr(t.transpose());
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  const double lo = diag.minCoeff(), hi = diag.maxCoeff();
  SplitResult out;
  out.side = Side::Left;
  out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  const CMatrix y = qr.solve(CMatrix(-r.transpose())).transpose();

  std::map<int, CMatrix> xc;
  xc.emplace(0, CMatrix::Identity(n, n));
  for (int j = 1; j <= bw; ++j) xc.emplace(j, y.block(0, n * (j - 1), n, n));
  const std::vector<CMatrix> x = evaluate(xc, n, count);

  std::vector<CMatrix> xl(count);
  for (int k = 0; k < count; ++k) xl[k] = x[k] * l[k];
  std::map<int, CMatrix> minus_c = fourier(xl);
  for (auto it = minus_c.begin(); it != minus_c.end();) it = it->first > 0 ? minus_c.erase(it) : std::next(it);
  out.minus.values = evaluate(minus_c, n, count);

  out.plus.values.resize(count);
  for (int k = 0; k < count; ++k) out.plus.values[k] = x[k].inverse();
  const std::map<int, CMatrix> plus_c = fourier(out.plus.values);
  double support = coeff_norm(plus_c.at(0) - CMatrix::Identity(n, n));
  for (const auto& [d, m] : plus_c)
    if (d < 0) support = std::max(support, coeff_norm(m));
  out.support_defect = support;

  double res = 0.0;
  for (int k = 0; k < count; ++k) res = std::max(res, max_abs(out.plus.values[k] * out.minus.values[k] - l[k]));
  out.residual = res;
  out.in_big_cell = std::isfinite(out.condition) && out.condition <= o.condition_threshold &&
                    res <= o.residual_tolerance && support <= o.support_tolerance && all_finite(y);
  return out;
}

}  // namespace

CMatrix FourierLoop::coeff(int d) const {
  const auto it = coeffs.find(d);
  return it == coeffs.end() ? CMatrix(CMatrix::Zero(n, n)) : it->second;
}

CMatrix FourierLoop::operator()(cd lambda) const {
  CMatrix m = CMatrix::Zero(n, n);
  for (const auto& [d, c] : coeffs) m += std::pow(lambda, d) * c;
  return m;
}

double FourierLoop::max_norm(int lo, int hi) const {
  double r = 0.0;
  for (const auto& [d, c] : coeffs)
    if (d >= lo && d <= hi) r = std::max(r, coeff_norm(c));
  return r;
}

FourierLoop CircleSampling::coefficients() const {
  FourierLoop f;
  f.n = dim();
  f.coeffs = fourier(values);
  return f;
}

CircleSampling CircleSampling::from_coefficients(const FourierLoop& c, int count) {
  return CircleSampling(evaluate(c.coeffs, c.n, count));
}

double CircleSampling::spectral_tail() const {
  const FourierLoop c = coefficients();
  const int cut = (3 * size() + 7) / 8;
  return std::max(c.max_norm(cut, size()), c.max_norm(-size(), -cut));
}

CircleSampling CircleSampling::inverse() const {
  CircleSampling s;
  for (const auto& m : values) s.values.push_back(m.inverse());
  return s;
}

CircleSampling operator*(const CircleSampling& a, const CircleSampling& b) {
  if (a.size() != b.size()) throw DimensionError("circle samplings differ in size");
  CircleSampling s;
  for (int k = 0; k < a.size(); ++k) s.values.push_back(a.values[k] * b.values[k]);
  return s;
}

double max_distance(const CircleSampling& a, const CircleSampling& b) {
  if (a.size() != b.size()) throw DimensionError("circle samplings differ in size");
  double r = 0.0;
  for (int k = 0; k < a.size(); ++k) r = std::max(r, max_abs(a.values[k] - b.values[k]));
  return r;
}

namespace {

// Index permutation k ↦ k' with λ_{k'} = φ(λ_k).
std::vector<int> image_indices(const InvolutionSpec& s, int count) {
  const std::vector<cd> pts = circle_points(count);
  std::vector<int> idx(count);
  for (int k = 0; k < count; ++k) {
    const cd image = s.map_lambda(pts[k]);
    long j = std::lround(std::arg(image) / (2.0 * std::numbers::pi) * count);
    j = ((j % count) + count) % count;
    if (std::abs(pts[j] - image) > 1e-9)
      throw DomainError(to_string(s.kind()) + " does not map the circle samples onto themselves");
    idx[k] = static_cast<int>(j);
  }
  return idx;
}

}  // namespace

CircleSampling apply_involution(const InvolutionSpec& s, const CircleSampling& x) {
  const std::vector<int> idx = image_indices(s, x.size());
  CircleSampling out;
  for (int k = 0; k < x.size(); ++k) out.values.push_back(s.apply_matrix(x.values[idx[k]]));
  return out;
}

SplitResult birkhoff_split(const CircleSampling& l, Side side, const SplitOptions& opts) {
  if (l.size() == 0) throw DomainError("empty circle sampling");
  for (const auto& m : l.values)
    if (!all_finite(m)) throw DomainError("loop has non-finite samples");
  if (side == Side::Left) return left_split(l.values, opts);
  // L(λ) = L₋(λ)L₊(λ) ⇔ L(1/λ) = L₋(1/λ)L₊(1/λ) is a left split
  SplitResult m = left_split(mirrored(l.values), opts);
  SplitResult out;
  out.side = Side::Right;
  out.minus.values = mirrored(m.plus.values);
  out.plus.values = mirrored(m.minus.values);
  out.residual = m.residual;
  out.condition = m.condition;
  out.support_defect = m.support_defect;
  out.in_big_cell = m.in_big_cell;
  return out;
}

SplitResult birkhoff_split(const LaurentLoop& l, Side side, int samples, const SplitOptions& opts) {
  return birkhoff_split(CircleSampling::from(l, samples), side, opts);
}

BigCellVerdict in_big_cell(const CircleSampling& l, const SplitOptions& opts) {
  const SplitResult r = birkhoff_split(l, Side::Left, opts);
  return {r.in_big_cell, r.condition, r.residual};
}

BigCellVerdict in_big_cell(const LaurentLoop& l, int samples, const SplitOptions& opts) {
  return in_big_cell(CircleSampling::from(l, samples), opts);
}

void require_circle_samples(const std::vector<cd>& lambdas) {
  const std::vector<cd> pts = circle_points(static_cast<int>(lambdas.size()));
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (std::abs(pts[k] - lambdas[k]) > 1e-12)
      throw DomainError("family must be sampled at the roots of unity e^{2 pi i k/N}");
}

namespace {

// values[l][node] ↦ per-node loops and back.
using Table = std::vector<std::vector<CMatrix>*>;
using ConstTable = std::vector<const std::vector<CMatrix>*>;

CircleSampling loop_at(const ConstTable& t, int node) {
  CircleSampling s;
  for (const auto* v : t) s.values.push_back((*v)[node]);
  return s;
}

void store(Table& t, int node, const CircleSampling& s) {
  for (std::size_t l = 0; l < t.size(); ++l) (*t[l])[node] = s.values[l];
}

void report_failures(const std::vector<PointDiagnostic>& d, const char* what) {
  std::vector<int> bad;
  for (const auto& p : d)
    if (!p.ok) bad.push_back(p.node);
  if (bad.empty()) return;
  std::ostringstream os;
  os << what << " failed at " << bad.size() << " point(s), first node " << bad.front();
  for (const auto& p : d)
    if (!p.ok) {
      os << " (residual " << p.residual << ", condition " << p.condition << ")";
      break;
    }
  throw BigCellError(os.str(), bad);
}

void forward_nodes(const ConstTable& in, Table& out, int nodes, const SplitOptions& opts,
                   std::vector<PointDiagnostic>* diagnostics) {
  std::vector<PointDiagnostic> d(nodes);
  parallel_for(nodes, [&](int p) {
    const SplitResult r = birkhoff_split(loop_at(in, p), Side::Left, opts);
    d[p] = {p, r.residual, r.condition, r.in_big_cell};
    store(out, p, r.plus);
  });
  if (diagnostics) *diagnostics = d;
  report_failures(d, "Birkhoff splitting");
}

void backward_nodes(const ConstTable& in, Table& out, int nodes, const InvolutionSpec& tau,
                    const BackwardOptions& opts, std::vector<PointDiagnostic>* diagnostics) {
  if (!tau.inverts_lambda() || !tau.antilinear())
    throw DomainError("the backward step needs a reality condition exchanging the disc and its exterior");
  std::vector<PointDiagnostic> d(nodes);
  parallel_for(nodes, [&](int p) {
    const CircleSampling plus = loop_at(in, p);
    const CircleSampling w = apply_involution(tau, plus).inverse() * plus;
    const SplitResult r = birkhoff_split(w, Side::Left, opts.split);
    const CMatrix c = r.minus.coefficients().coeff(0);
    const CMatrix root = c.sqrt();
    CircleSampling f;
    for (int k = 0; k < plus.size(); ++k) f.values.push_back(plus.values[k] * r.minus.values[k].inverse() * root);
    const double fixed = max_distance(f, apply_involution(tau, f));
    d[p] = {p, std::max(r.residual, fixed), r.condition, r.in_big_cell && fixed <= opts.fixed_tolerance};
    store(out, p, f);
  });
  if (diagnostics) *diagnostics = d;
  report_failures(d, "backward splitting");
}

template <typename Family>
Table table_of(Family& f) {
  Table t;
  for (auto& fr : f.frames) t.push_back(&fr.values);
  return t;
}

template <typename Family>
ConstTable const_table_of(const Family& f) {
  ConstTable t;
  for (const auto& fr : f.frames) t.push_back(&fr.values);
  return t;
}

}  // namespace

FrameFamily dpw_forward(const FrameFamily& f, const SplitOptions& opts, std::vector<PointDiagnostic>* diagnostics) {
  require_circle_samples(f.lambdas);
  FrameFamily out = f;
  Table t = table_of(out);
  forward_nodes(const_table_of(f), t, f.grid().size(), opts, diagnostics);
  return out;
}

StripFamily dpw_forward(const StripFamily& f, const SplitOptions& opts, std::vector<PointDiagnostic>* diagnostics) {
  require_circle_samples(f.lambdas);
  StripFamily out = f;
  Table t = table_of(out);
  forward_nodes(const_table_of(f), t, f.strip().size(), opts, diagnostics);
  return out;
}

FrameFamily dpw_backward(const FrameFamily& plus, const InvolutionSpec& tau, const BackwardOptions& opts,
                         std::vector<PointDiagnostic>* diagnostics) {
  require_circle_samples(plus.lambdas);
  FrameFamily out = plus;
  Table t = table_of(out);
  backward_nodes(const_table_of(plus), t, plus.grid().size(), tau, opts, diagnostics);
  return out;
}

StripFamily dpw_backward(const StripFamily& plus, const InvolutionSpec& tau, const BackwardOptions& opts,
                         std::vector<PointDiagnostic>* diagnostics) {
  require_circle_samples(plus.lambdas);
  StripFamily out = plus;
  Table t = table_of(out);
  backward_nodes(const_table_of(plus), t, plus.strip().size(), tau, opts, diagnostics);
  return out;
}

FrameFamily renormalize_at(const FrameFamily& f, int qi, int qj) {
  FrameFamily out = f;
  for (auto& fr : out.frames) fr = renormalize_at(fr, qi, qj);
  return out;
}

OneFormField mc_coefficient(const FrameFamily& f, int degree, int accuracy) {
  require_circle_samples(f.lambdas);
  std::vector<OneFormField> forms;
  for (const auto& fr : f.frames) forms.push_back(mc_form(fr, accuracy));
  OneFormField out(f.grid(), f.dim());
  for (int a = 0; a < 2; ++a)
    for (std::size_t p = 0; p < out.components[a].size(); ++p) {
      std::vector<CMatrix> s;
      for (const auto& form : forms) s.push_back(form.components[a][p]);
      out.components[a][p] = fourier(s).at(degree);
    }
  return out;
}

double mc_off_degree(const FrameFamily& f, int lo, int hi, int accuracy) {
  require_circle_samples(f.lambdas);
  std::vector<OneFormField> forms;
  for (const auto& fr : f.frames) forms.push_back(mc_form(fr, accuracy));
  double r = 0.0;
  for (int a = 0; a < 2; ++a)
    for (std::size_t p = 0; p < forms.front().components[a].size(); ++p) {
      std::vector<CMatrix> s;
      for (const auto& form : forms) s.push_back(form.components[a][p]);
      for (const auto& [d, m] : fourier(s))
        if (d < lo || d > hi) r = std::max(r, coeff_norm(m));
    }
  return r;
}

PluriharmonicResidual pluriharmonic_residual(const StripFamily& f, const InvolutionSpec& tau, int accuracy) {
  require_circle_samples(f.lambdas);
  const ComplexStrip& s = f.strip();
  if (s.counts[0] < 3 || s.counts[1] < 3) throw DomainError("pluriharmonic residual needs >= 3 imaginary samples per axis");
  const cd I(0.0, 1.0);
  PluriharmonicResidual out;
  const int count = static_cast<int>(f.lambdas.size());
  std::vector<CMatrix> holo(count), anti(count);
  for (int i = 0; i < s.base.nu(); ++i)
    for (int j = 0; j < s.base.nv(); ++j)
      for (int k1 = 0; k1 < s.counts[0]; ++k1)
        for (int k2 = 0; k2 < s.counts[1]; ++k2)
          for (int a = 0; a < 2; ++a) {
            for (int l = 0; l < count; ++l) {
              const StripFrames& fr = f.frames[l];
              auto get = [&](int p, int q, int r1, int r2) { return fr.at(p, q, r1, r2); };
              const CMatrix dx = strip_derivative(s, get, a, false, i, j, k1, k2, accuracy);
              const CMatrix dy = strip_derivative(s, get, a, true, i, j, k1, k2, accuracy);
              const CMatrix inv = fr.at(i, j, k1, k2).inverse();
              holo[l] = inv * (0.5 * (dx - I * dy));
              anti[l] = inv * (0.5 * (dx + I * dy));
            }
            const auto ha = fourier(holo);
            const auto an = fourier(anti);
            out.top = std::max(out.top, coeff_norm(an.at(1)));
            out.conjugate = std::max(out.conjugate, coeff_norm(an.at(-1) - tau.apply_matrix(ha.at(1))));
          }
  return out;
}

double reality_residual(const StripFamily& f, const InvolutionSpec& rho, int k1, int k2) {
  require_circle_samples(f.lambdas);
  const ComplexStrip& s = f.strip();
  double r = 0.0;
  for (int i = 0; i < s.base.nu(); ++i)
    for (int j = 0; j < s.base.nv(); ++j) {
      CircleSampling loop;
      for (const auto& fr : f.frames) loop.values.push_back(fr.at(i, j, k1, k2));
      r = std::max(r, max_distance(loop, apply_involution(rho, loop)));
    }
  return r;
}

double reality_residual_on_M(const StripFamily& f, const InvolutionSpec& rho) {
  return reality_residual(f, rho, f.strip().centre(0), f.strip().centre(1));
}

double column_agreement(const FrameFamily& a, const FrameFamily& b, int column) {
  if (a.frames.size() != b.frames.size()) throw DimensionError("families have different lambda samples");
  double r = 0.0;
  for (std::size_t l = 0; l < a.frames.size(); ++l) {
    const auto& x = a.frames[l].values;
    const auto& y = b.frames[l].values;
    if (x.size() != y.size()) throw DimensionError("families live on different grids");
    for (std::size_t p = 0; p < x.size(); ++p) r = std::max(r, max_abs(x[p].col(column) - y[p].col(column)));
  }
  return r;
}

CMatrix block_invariant(const CMatrix& f, const SignatureForm& p) { return f * p.matrix() * f.inverse(); }

double gluing_defect(const StripFamily& a, const StripFamily& b, const SignatureForm& p) {
  if (a.frames.size() != b.frames.size()) throw DimensionError("families have different lambda samples");
  double r = 0.0;
  for (std::size_t l = 0; l < a.frames.size(); ++l) {
    const auto& x = a.frames[l].values;
    const auto& y = b.frames[l].values;
    if (x.size() != y.size()) throw DimensionError("families live on different strips");
    for (std::size_t q = 0; q < x.size(); ++q) r = std::max(r, max_abs(block_invariant(x[q], p) - block_invariant(y[q], p)));
  }
  return r;
}

StripFamily with_antiholomorphic_factor(const StripFamily& plus, const CMatrix& n, double scale) {
  StripFamily out = plus;
  const ComplexStrip& s = plus.strip();
  for (std::size_t l = 0; l < out.frames.size(); ++l) {
    const cd lambda = plus.lambdas[l];
    for (int i = 0; i < s.base.nu(); ++i)
      for (int j = 0; j < s.base.nv(); ++j)
        for (int k1 = 0; k1 < s.counts[0]; ++k1)
          for (int k2 = 0; k2 < s.counts[1]; ++k2) {
            const cd zbar = std::conj(s.z(0, i, k1));
            CMatrix& m = out.frames[l].at(i, j, k1, k2);
            m = m * CMatrix(lambda * scale * zbar * n).exp();
          }
  }
  return out;
}

ExtensionResult pluriharmonic_extend_at(const ExprForm& mc, const FrameFamily& input, int case_id,
                                        const ComplexStrip& strip, int qi, int qj, const ExtensionOptions& opts) {
  if (!strip.base.contains(qi, qj)) throw DomainError("renormalization point outside the grid");
  const int n = mc.n, m = 2, k = n - m - 1;
  if (k < 0) throw DimensionError("closed form too small for a surface");
  const auto [rho, tau] = extension_pair(case_id, m, k);
  const std::vector<cd> lambdas = circle_points(opts.samples);

  ComplexStrip local = strip;
  local.base.base_i = qi;
  local.base.base_j = qj;
  ExtensionResult out;
  out.case_id = case_id;
  out.target_label = symmetric_space_label(case_id);
  const ComplexifiedForm c = complexify_eta(mc, local, opts.complexify);
  out.eps = std::max(c.strip.eps[0], c.strip.eps[1]);
  out.halvings = c.halvings;

  const StripFamily holo = extend_frame_holo(c, lambdas, opts.holo);
  out.cr = cr_residual(holo, opts.holo.cr_accuracy);
  const StripFamily plus = dpw_forward(holo, opts.split, &out.forward);
  out.plus_off_degree = mc_off_degree(plus.real_slice(), 1, 1, 6);
  out.frames = dpw_backward(plus, tau, opts.backward, &out.backward);

  // R̂ ↦ F(q, λ)·R̂, with F(q, λ) from the input or from integrating the form at the grid base
  FrameFamily reference = input;
  if (reference.frames.empty()) reference = integrate_family(mc.family(strip.base), lambdas);
  require_circle_samples(reference.lambdas);
  if (reference.lambdas.size() != lambdas.size()) throw DimensionError("input family has the wrong number of circle samples");
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    const CMatrix fq = reference.frames[l].at(qi, qj);
    for (auto& v : out.frames.frames[l].values) v = fq * v;
  }
  out.pluriharmonic = pluriharmonic_residual(out.frames, tau, opts.accuracy);
  out.reality = reality_residual_on_M(out.frames, rho);
  out.columns = column_agreement(out.frames.real_slice(), reference, m);
  return out;
}

ExtensionResult pluriharmonic_extend(const ExprForm& mc, const FrameFamily& input, int case_id,
                                     const ComplexStrip& strip, const ExtensionOptions& opts) {
  return pluriharmonic_extend_at(mc, input, case_id, strip, strip.base.base_i, strip.base.base_j, opts);
}

}  // namespace loopframe
