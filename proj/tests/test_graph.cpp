#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gmcf/graph.hpp"
#include "gmcf/solver.hpp"
#include "support.hpp"

using gmcf::Domain;
using gmcf::GridFunction;
using gmcf::Vecd;

namespace {

GridFunction on(const Domain& d, double (*fn)(const Vecd&)) {
  return GridFunction::sample(d, [fn](const Vecd& x) { return fn(x); });
}

bool interior(const Domain& d, gmcf::Index k, double margin) {
  return d.depth(d.node_position(k)) > margin;
}

}  // namespace

TEST_CASE("flat graph") {
  for (const Domain& d : {Domain::interval(0.0, 1.0, 21), Domain::disk(1.0, 24)}) {
    const GridFunction u(d);
    const auto q = gmcf::compute_quantities(u);
    for (const auto k : d.grid().active) {
      CHECK(q.v[k] == 1.0);
      CHECK(q.h[k] == 0.0);
      CHECK(q.a2[k] == 0.0);
      CHECK(q.normal(k, d.dim()) == 1.0);
      CHECK(q.normal.row(k).head(d.dim()).norm() == 0.0);
    }
  }
}

TEST_CASE("parabola curvature at the origin") {
  const Domain d = Domain::interval(-1.0, 1.0, 41);
  const auto u = on(d, [](const Vecd& x) { return x(0) * x(0); });
  const auto q = gmcf::compute_quantities(u);
  for (const auto k : d.grid().active) {
    if (!interior(d, k, 1e-9)) continue;
    const double x = d.node_position(k)(0);
    // 1-D curvature oracle: h = -u'' / (1 + u'^2)^{3/2}.
    const double oracle = -2.0 / std::pow(1.0 + 4.0 * x * x, 1.5);
    CHECK(q.h[k] == doctest::Approx(oracle).epsilon(1e-12));
  }
  const auto k0 = d.grid().index(20);
  CHECK(std::abs(q.du(k0, 0)) < 1e-14);
  CHECK(q.v[k0] == doctest::Approx(1.0));
  CHECK(q.h[k0] == doctest::Approx(-2.0));
}

TEST_CASE("affine graph") {
  const Domain d = Domain::interval(0.0, 1.0, 21);
  const auto u = on(d, [](const Vecd& x) { return x(0); });
  const auto q = gmcf::compute_quantities(u);
  for (const auto k : d.grid().active) {
    if (!interior(d, k, 1e-9)) continue;
    CHECK(q.v[k] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(q.h[k]) < 1e-12);
    CHECK(std::abs(q.a2[k]) < 1e-20);
    CHECK(std::abs(q.normal.row(k).norm() - 1.0) < 1e-12);
  }
  CHECK(gmcf::surface_area(u) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("h^2 <= n |A|^2 on random smooth graphs") {
  testing::Sampler s(5);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = s.uniform(-2, 2), b = s.uniform(-2, 2), c = s.uniform(0.5, 3);
    const Domain d = trial % 2 ? Domain::disk(1.0, 33) : Domain::interval(-1.0, 1.0, 33);
    const auto u = GridFunction::sample(d, [&](const Vecd& x) {
      double v = a * std::sin(c * x(0));
      if (x.size() == 2) v += b * std::cos(c * x(1)) * x(0);
      return v;
    });
    const auto q = gmcf::compute_quantities(u);
    for (const auto k : d.grid().active) {
      CHECK(q.v[k] >= 1.0);
      CHECK(q.h[k] * q.h[k] <= d.dim() * q.a2[k] * (1.0 + 1e-12) + 1e-14);
      CHECK(std::abs(q.normal.row(k).norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("second fundamental form of a cylinder graph") {
  // u = sqrt(4 - x^2) over the disk of radius 1 is a piece of a radius-2
  // cylinder: principal curvatures 1/2 and 0, so |A|^2 = 1/4 and h = 1/2.
  const Domain d = Domain::disk(1.0, 129);
  const auto u = on(d, [](const Vecd& x) { return std::sqrt(4.0 - x(0) * x(0)); });
  const auto q = gmcf::compute_quantities(u);
  double ea = 0.0, eh = 0.0;
  for (const auto k : d.grid().active) {
    if (!interior(d, k, 0.1)) continue;
    ea = std::max(ea, std::abs(q.a2[k] - 0.25));
    eh = std::max(eh, std::abs(std::abs(q.h[k]) - 0.5));
  }
  CHECK(ea < 1e-3);
  CHECK(eh < 1e-3);
}

TEST_CASE("Laplace-Beltrami on the flat disk") {
  const Domain d = Domain::disk(1.0, 65);
  const GridFunction u(d);
  const auto phi = on(d, [](const Vecd& x) { return x(0) * x(0); });
  const auto lb = gmcf::laplace_beltrami(u, phi);
  for (const auto k : d.grid().active) {
    if (!interior(d, k, 3 * d.spacing())) continue;
    CHECK(lb[k] == doctest::Approx(2.0).epsilon(1e-10));
  }
  const auto c = on(d, [](const Vecd&) { return 7.5; });
  const auto bumpy = on(d, [](const Vecd& x) { return std::sin(3 * x(0)) * x(1); });
  const auto zero = gmcf::laplace_beltrami(bumpy, c);
  for (const auto k : d.grid().active) CHECK(zero[k] == 0.0);
}

TEST_CASE("Laplace-Beltrami converges on a curved 1-D graph") {
  // Oracle: Delta phi = (1/v) (phi' / v)' = phi''/v^2 - phi' u' u'' / v^4.
  auto err_at = [](int nodes) {
    const Domain d = Domain::interval(-1.0, 1.0, nodes);
    const auto u = GridFunction::sample(d, [](const Vecd& x) { return std::sin(2 * x(0)); });
    const auto phi = GridFunction::sample(d, [](const Vecd& x) { return std::cos(x(0)); });
    const auto lb = gmcf::laplace_beltrami(u, phi);
    double err = 0.0;
    for (const auto k : d.grid().active) {
      const double x = d.node_position(k)(0);
      if (std::abs(x) > 0.8) continue;
      const double u1 = 2 * std::cos(2 * x), u2 = -4 * std::sin(2 * x);
      const double p1 = -std::sin(x), p2 = -std::cos(x);
      const double v2 = 1 + u1 * u1;
      err = std::max(err, std::abs(lb[k] - (p2 / v2 - p1 * u1 * u2 / (v2 * v2))));
    }
    return std::make_pair(d.spacing(), err);
  };
  std::vector<double> hs, es;
  for (int n : {41, 81, 161}) {
    const auto [h, e] = err_at(n);
    hs.push_back(h);
    es.push_back(e);
  }
  CHECK(testing::loglog_slope(hs, es) > 1.8);
}

TEST_CASE("divergence form agrees with the non-divergence operator") {
  // v^2 Delta_Gamma u = v div(du / v) = a_ij u_ij.
  const Domain d = Domain::disk(1.0, 97);
  const auto u = GridFunction::sample(d, [](const Vecd& x) { return 0.5 * std::sin(2 * x(0)) * std::cos(x(1)); });
  const auto lb = gmcf::laplace_beltrami(u, u);
  const auto q = gmcf::compute_quantities(u);
  const auto op = gmcf::discrete_operator(u, gmcf::TransportField::zero(2), 0.0);
  double err = 0.0;
  for (std::size_t a = 0; a < d.grid().active.size(); ++a) {
    const auto k = d.grid().active[a];
    if (!interior(d, k, 0.2)) continue;
    err = std::max(err, std::abs(q.v[k] * q.v[k] * lb[k] - op[static_cast<gmcf::Index>(a)]));
  }
  CHECK(err < 5e-3);
}

TEST_CASE("tangential gradient") {
  const Vecd e1 = Vecd::Unit(2, 0), e2 = Vecd::Unit(2, 1);
  CHECK(gmcf::tangential_gradient(e2, e2).norm() == 0.0);
  CHECK((gmcf::tangential_gradient(e1, e2) - e1).norm() == 0.0);
  Vecd n(2);
  n << -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Vecd tg = gmcf::tangential_gradient(e1, n);
  CHECK(tg(0) == doctest::Approx(0.5));
  CHECK(tg(1) == doctest::Approx(0.5));
  CHECK(tg.squaredNorm() == doctest::Approx(1.0 - std::pow(e1.dot(n), 2)));

  const Domain d = Domain::interval(0.0, 1.0, 21);
  const auto u = on(d, [](const Vecd& x) { return x(0); });
  const auto phi = on(d, [](const Vecd& x) { return x(0); });
  const auto g = gmcf::tangential_gradient(u, phi);
  const auto k = d.grid().index(10);
  CHECK(g(k, 0) == doctest::Approx(0.5));
  CHECK(g(k, 1) == doctest::Approx(0.5));
}

TEST_CASE("|D_Gamma v|^2 >= |dv|^2 / v^2") {
  const Domain d = Domain::disk(1.0, 49);
  const auto u = GridFunction::sample(d, [](const Vecd& x) { return std::sin(3 * x(0) + x(1)) + x(1) * x(1); });
  const auto q = gmcf::compute_quantities(u);
  GridFunction v(d);
  v.values() = q.v;
  const auto tg = gmcf::tangential_gradient(u, v);
  for (const auto k : d.grid().active) {
    const Vecd dv = gmcf::grid_gradient(v, k);
    CHECK(tg.row(k).squaredNorm() >= dv.squaredNorm() / (q.v[k] * q.v[k]) * (1 - 1e-12) - 1e-12);
  }
}

TEST_CASE("surface integrals") {
  const Domain unit = Domain::interval(0.0, 1.0, 21);
  CHECK(gmcf::surface_area(GridFunction(unit)) == doctest::Approx(1.0).epsilon(1e-15));
  const Domain disk = Domain::disk(1.0, 128);
  CHECK(std::abs(gmcf::surface_area(GridFunction(disk)) - M_PI) / M_PI < 0.01);
  // Radial graph u = (r^2 - 1)^2 / 4 (zero normal slope on the circle); the
  // oracle is the 1-D radial integral 2 pi int_0^1 r sqrt(1 + u_r^2) dr by Simpson.
  const auto cap = on(disk, [](const Vecd& x) {
    const double q = x.squaredNorm() - 1.0;
    return 0.25 * q * q;
  });
  double exact = 0.0;
  const int m = 2000;
  for (int i = 0; i <= m; ++i) {
    const double r = static_cast<double>(i) / m;
    const double ur = r * (r * r - 1.0);
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    exact += w * r * std::sqrt(1.0 + ur * ur);
  }
  exact *= 2.0 * M_PI / (3.0 * m);
  CHECK(std::abs(gmcf::surface_area(cap) - exact) / exact < 0.01);
}
