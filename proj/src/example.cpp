#include "loopframe/example.hpp"

namespace loopframe {

namespace {

const cd I(0.0, 1.0);

struct Ab {
  cd a, b;
};

Ab ab_of(cd lambda) {
  if (lambda == cd(0)) throw DomainError("example frame undefined at lambda = 0");
  return {0.5 * (lambda + 1.0 / lambda), 0.5 * I * (lambda - 1.0 / lambda)};
}

}  // namespace

CMatrix example_frame(cd u, cd v, cd lambda) {
  const auto [a, b] = ab_of(lambda);
  const cd su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
  CMatrix f(4, 4);
  f << cu, -su * sv, a * su * cv, b * su * cv,
       0.0, cv, a * sv, b * sv,
       -a * su, -a * cu * sv, a * a * cu * cv + b * b, a * b * (cu * cv - 1.0),
       -b * su, -b * cu * sv, a * b * (cu * cv - 1.0), b * b * cu * cv + a * a;
  return f;
}

CVector example_column(cd u, cd v, cd lambda) { return example_frame(u, v, lambda).col(2); }

std::array<CMatrix, 2> example_frame_derivatives(cd u, cd v, cd lambda) {
  const auto [a, b] = ab_of(lambda);
  const cd su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
  CMatrix du(4, 4), dv(4, 4);
  du << -su, -cu * sv, a * cu * cv, b * cu * cv,
        0.0, 0.0, 0.0, 0.0,
        -a * cu, a * su * sv, -a * a * su * cv, -a * b * su * cv,
        -b * cu, b * su * sv, -a * b * su * cv, -b * b * su * cv;
  dv << 0.0, -su * cv, -a * su * sv, -b * su * sv,
        0.0, -sv, a * cv, b * cv,
        0.0, -a * cu * cv, -a * a * cu * sv, -a * b * cu * sv,
        0.0, -b * cu * cv, -a * b * cu * sv, -b * b * cu * sv;
  return {du, dv};
}

CMatrix example_mc(int axis, cd u, cd v, cd lambda) {
  return example_mc_loop(axis, u, v)(lambda);
}

LaurentLoop example_mc_loop(int axis, cd /*u*/, cd v) {
  // a = (λ + λ⁻¹)/2 and b = (iλ − iλ⁻¹)/2 split into λ^{±1} parts
  CMatrix a_slots = CMatrix::Zero(4, 4), b_slots = CMatrix::Zero(4, 4), rest = CMatrix::Zero(4, 4);
  if (axis == 0) {
    const cd sv = std::sin(v), cv = std::cos(v);
    rest(0, 1) = -sv;
    rest(1, 0) = sv;
    a_slots(0, 2) = cv;
    a_slots(2, 0) = -cv;
    b_slots(0, 3) = cv;
    b_slots(3, 0) = -cv;
  } else if (axis == 1) {
    a_slots(1, 2) = 1.0;
    a_slots(2, 1) = -1.0;
    b_slots(1, 3) = 1.0;
    b_slots(3, 1) = -1.0;
  } else {
    throw DomainError("axis must be 0 or 1");
  }
  LaurentLoop l(4);
  l.set(-1, 0.5 * a_slots - 0.5 * I * b_slots);
  l.set(0, rest);
  l.set(1, 0.5 * a_slots + 0.5 * I * b_slots);
  return l;
}

ConnectionFamily example_connection(const Grid& g) {
  ConnectionFamily c = ConnectionFamily::from_analytic(g, 4, [](int axis, cd u, cd v, cd lambda) {
    return example_mc(axis, u, v, lambda);
  });
  std::map<int, OneFormField> fields;
  for (int d = -1; d <= 1; ++d) fields.emplace(d, OneFormField(g, 4));
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j)
      for (int axis = 0; axis < 2; ++axis) {
        const LaurentLoop l = example_mc_loop(axis, g.u.at(i), g.v.at(j));
        for (int d = -1; d <= 1; ++d) fields.at(d).at(axis, i, j) = l.coeff(d);
      }
  c.coeffs = std::move(fields);
  return c;
}

FrameFamily example_family(const Grid& g, const std::vector<cd>& lambdas) {
  FrameFamily fam;
  fam.lambdas = lambdas;
  for (cd l : lambdas) {
    FrameGrid f(g, 4);
    for (int i = 0; i < g.nu(); ++i)
      for (int j = 0; j < g.nv(); ++j) f.at(i, j) = example_frame(g.u.at(i), g.v.at(j), l);
    fam.frames.push_back(std::move(f));
  }
  // normalized only when the base point is the origin
  fam.normalized = std::abs(g.u.at(g.base_i)) < 1e-15 && std::abs(g.v.at(g.base_j)) < 1e-15;
  return fam;
}

}  // namespace loopframe
