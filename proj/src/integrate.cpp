#include "loopframe/integrate.hpp"

#include "loopframe/finite_diff.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace loopframe {

namespace {

const double kGaussOffset = std::sqrt(3.0) / 6.0;

// A(λ) along one grid line, as a function of the fractional index along `axis`.
class LineSampler {
 public:
  LineSampler(const ConnectionFamily& a, cd lambda) : a_(a), lambda_(lambda) {
    if (!a.has_analytic()) sampled_ = a.at(lambda);
  }

  std::function<CMatrix(double)> line(int axis, int fixed) const {
    if (a_.has_analytic()) {
      const Grid& g = a_.grid;
      if (axis == 0) return [this, &g, fixed](double t) { return a_.analytic(0, g.u.at(t), g.v.at(fixed), lambda_); };
      return [this, &g, fixed](double t) { return a_.analytic(1, g.u.at(fixed), g.v.at(t), lambda_); };
    }
    const OneFormField& f = sampled_;
    const int count = f.grid.axis(axis).count;
    if (axis == 0)
      return [&f, fixed, count](double t) {
        return CMatrix(line_interpolate([&](int i) { return f.at(0, i, fixed); }, t, count));
      };
    return [&f, fixed, count](double t) {
      return CMatrix(line_interpolate([&](int j) { return f.at(1, fixed, j); }, t, count));
    };
  }

 private:
  const ConnectionFamily& a_;
  cd lambda_;
  OneFormField sampled_;
};

// Propagators P_u(i,j): (i,j)→(i+1,j) and P_v(i,j): (i,j)→(i,j+1), in index units.
struct EdgePropagators {
  std::vector<CMatrix> pu, pv;
};

EdgePropagators edge_propagators(const ConnectionFamily& a, cd lambda, int substeps) {
  const Grid& g = a.grid;
  LineSampler sampler(a, lambda);
  EdgePropagators e;
  e.pu.resize(g.size());
  e.pv.resize(g.size());
  const double hu = g.u.step(), hv = g.v.step();
  for (int j = 0; j < g.nv(); ++j) {
    auto line = sampler.line(0, j);
    // rescale: the ODE is in coordinates, the line in index units
    auto scaled = [&](double t) { return CMatrix(line(t) * hu); };
    for (int i = 0; i + 1 < g.nu(); ++i) e.pu[g.index(i, j)] = line_propagator(scaled, i, 1.0, substeps);
  }
  for (int i = 0; i < g.nu(); ++i) {
    auto line = sampler.line(1, i);
    auto scaled = [&](double t) { return CMatrix(line(t) * hv); };
    for (int j = 0; j + 1 < g.nv(); ++j) e.pv[g.index(i, j)] = line_propagator(scaled, j, 1.0, substeps);
  }
  return e;
}

IntegrationReport holonomy_from_edges(const Grid& g, const EdgePropagators& e) {
  IntegrationReport r;
  for (int i = 0; i + 1 < g.nu(); ++i)
    for (int j = 0; j + 1 < g.nv(); ++j) {
      const CMatrix lhs = e.pu[g.index(i, j)] * e.pv[g.index(i + 1, j)];
      const CMatrix rhs = e.pv[g.index(i, j)] * e.pu[g.index(i, j + 1)];
      const double d = max_abs(lhs - rhs);
      if (d > r.max_holonomy_defect || r.worst_i < 0) {
        r.max_holonomy_defect = d;
        r.worst_i = i;
        r.worst_j = j;
      }
    }
  return r;
}

struct CellParts {
  CMatrix au, av, dau_dv, dav_du;
};

CellParts cell_parts(const OneFormField& a, int i, int j) {
  const double hu = a.grid.u.step(), hv = a.grid.v.step();
  const CMatrix au_b = 0.5 * (a.at(0, i, j) + a.at(0, i + 1, j));
  const CMatrix au_t = 0.5 * (a.at(0, i, j + 1) + a.at(0, i + 1, j + 1));
  const CMatrix av_l = 0.5 * (a.at(1, i, j) + a.at(1, i, j + 1));
  const CMatrix av_r = 0.5 * (a.at(1, i + 1, j) + a.at(1, i + 1, j + 1));
  return {0.5 * (au_b + au_t), 0.5 * (av_l + av_r), (au_t - au_b) / hv, (av_r - av_l) / hu};
}

template <typename F>
double max_over_cells(const OneFormField& a, F f) {
  double r = 0.0;
  for (int i = 0; i + 1 < a.grid.nu(); ++i)
    for (int j = 0; j + 1 < a.grid.nv(); ++j) r = std::max(r, max_abs(f(cell_parts(a, i, j))));
  return r;
}

}  // namespace

CMatrix magnus_exponent(const CMatrix& a1, const CMatrix& a2, double h) {
  return (0.5 * h) * (a1 + a2) + (std::sqrt(3.0) / 12.0 * h * h) * commutator(a1, a2);
}

CMatrix line_propagator(const std::function<CMatrix(double)>& a, double t0, double h, int substeps) {
  if (substeps < 1) throw DomainError("substeps must be positive");
  const double hs = h / substeps;
  CMatrix p;
  for (int s = 0; s < substeps; ++s) {
    const double t = t0 + s * hs;
    const CMatrix a1 = a(t + (0.5 - kGaussOffset) * hs);
    const CMatrix a2 = a(t + (0.5 + kGaussOffset) * hs);
    const CMatrix step = magnus_exponent(a1, a2, hs).exp();
    p = s == 0 ? step : CMatrix(p * step);
  }
  return p;
}

CMatrix project_to_group(const CMatrix& f, const SignatureForm& j) {
  const int n = static_cast<int>(f.rows());
  const CMatrix defect = group_inverse(f, j) * f - CMatrix::Identity(n, n);
  return f * (CMatrix::Identity(n, n) - 0.5 * defect);
}

IntegrationReport holonomy_defect(const ConnectionFamily& a, cd lambda, int substeps) {
  return holonomy_from_edges(a.grid, edge_propagators(a, lambda, substeps));
}

FrameGrid integrate_frame(const ConnectionFamily& a, cd lambda, const IntegrationOptions& opts,
                          IntegrationReport* report) {
  const Grid& g = a.grid;
  if (a.n == 0) throw DimensionError("empty connection");
  if (opts.project_to && opts.project_to->size() != a.n) throw DimensionError("projection form does not match frame size");
  const EdgePropagators e = edge_propagators(a, lambda, opts.substeps);
  if (opts.check_integrability || report) {
    const IntegrationReport r = holonomy_from_edges(g, e);
    if (report) *report = r;
    if (opts.check_integrability && r.max_holonomy_defect > opts.holonomy_tolerance) {
      std::ostringstream os;
      os << "connection is not integrable: holonomy defect " << r.max_holonomy_defect << " at cell (" << r.worst_i
         << ", " << r.worst_j << ") exceeds " << opts.holonomy_tolerance;
      throw NumericalError(os.str());
    }
  }

  FrameGrid f(g, a.n);
  auto finish = [&](CMatrix m) { return opts.project_to ? project_to_group(m, *opts.project_to) : m; };
  // walk from (i,j) to the neighbour in direction `axis`, forward or backward
  auto walk = [&](int i, int j, int axis, bool forward) {
    const auto& props = axis == 0 ? e.pu : e.pv;
    if (axis == 0) {
      if (forward)
        f.at(i + 1, j) = finish(f.at(i, j) * props[g.index(i, j)]);
      else
        f.at(i - 1, j) = finish(f.at(i, j) * props[g.index(i - 1, j)].inverse());
    } else {
      if (forward)
        f.at(i, j + 1) = finish(f.at(i, j) * props[g.index(i, j)]);
      else
        f.at(i, j - 1) = finish(f.at(i, j) * props[g.index(i, j - 1)].inverse());
    }
  };

  const int first = opts.columns_first ? 1 : 0;
  const int second = 1 - first;
  const int count1 = g.axis(first).count, count2 = g.axis(second).count;
  const int base1 = first == 0 ? g.base_i : g.base_j;
  const int base2 = first == 0 ? g.base_j : g.base_i;
  auto ij = [&](int p1, int p2) { return first == 0 ? std::pair{p1, p2} : std::pair{p2, p1}; };

  for (int p = base1; p + 1 < count1; ++p) {
    auto [i, j] = ij(p, base2);
    walk(i, j, first, true);
  }
  for (int p = base1; p > 0; --p) {
    auto [i, j] = ij(p, base2);
    walk(i, j, first, false);
  }
  for (int p1 = 0; p1 < count1; ++p1) {
    for (int p = base2; p + 1 < count2; ++p) {
      auto [i, j] = ij(p1, p);
      walk(i, j, second, true);
    }
    for (int p = base2; p > 0; --p) {
      auto [i, j] = ij(p1, p);
      walk(i, j, second, false);
    }
  }
  return f;
}

FrameFamily integrate_family(const ConnectionFamily& a, const std::vector<cd>& lambdas, const IntegrationOptions& opts) {
  FrameFamily fam;
  fam.lambdas = lambdas;
  for (cd l : lambdas) fam.frames.push_back(integrate_frame(a, l, opts));
  return fam;
}

OneFormField mc_form(const FrameGrid& f, int accuracy) {
  const Grid& g = f.grid;
  OneFormField out(g, f.dim());
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      Eigen::PartialPivLU<CMatrix> lu(f.at(i, j));
      if (!(std::abs(lu.determinant()) > 1e-300)) throw NumericalError("mc_form: singular frame matrix");
      const CMatrix du = line_derivative([&](int p) { return f.at(p, j); }, i, g.nu(), g.u.step(), accuracy);
      const CMatrix dv = line_derivative([&](int p) { return f.at(i, p); }, j, g.nv(), g.v.step(), accuracy);
      out.at(0, i, j) = lu.solve(du);
      out.at(1, i, j) = lu.solve(dv);
    }
  return out;
}

double curvature_residual(const OneFormField& a) {
  return max_over_cells(a, [](const CellParts& c) { return CMatrix(c.dav_du - c.dau_dv + commutator(c.au, c.av)); });
}

double closedness_residual(const OneFormField& a) {
  return max_over_cells(a, [](const CellParts& c) { return CMatrix(c.dav_du - c.dau_dv); });
}

double wedge_residual(const OneFormField& a) {
  return max_over_cells(a, [](const CellParts& c) { return commutator(c.au, c.av); });
}

double mc_residual(const ConnectionFamily& a, cd lambda) { return curvature_residual(a.at(lambda)); }

double frame_distance(const FrameGrid& f, const FrameGrid& g) {
  if (f.values.size() != g.values.size()) throw DimensionError("frame grids differ in size");
  double r = 0.0;
  for (std::size_t p = 0; p < f.values.size(); ++p) r = std::max(r, max_abs(f.values[p] - g.values[p]));
  return r;
}

FrameGrid renormalize_at(const FrameGrid& f, int qi, int qj) {
  if (!f.grid.contains(qi, qj)) throw DomainError("renormalization point outside grid");
  const CMatrix inv = f.at(qi, qj).inverse();
  FrameGrid r = f;
  for (auto& m : r.values) m = inv * m;
  r.at(qi, qj) = CMatrix::Identity(f.dim(), f.dim());
  return r;
}

}  // namespace loopframe
