#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gmcf/diagnostics.hpp"
#include "gmcf/graph.hpp"
#include "gmcf/manufactured.hpp"
#include "support.hpp"

using gmcf::Domain;
using gmcf::Exponent;
using gmcf::GridFunction;
using gmcf::KernelSpec;
using gmcf::NormExponents;
using gmcf::Scheme;
using gmcf::SolverConfig;
using gmcf::TransportField;
using gmcf::Vecd;

namespace {

SolverConfig config(double dt, double T) {
  SolverConfig c;
  c.scheme = Scheme::SemiImplicit;
  c.dt = dt;
  c.final_time = T;
  return c;
}

NormExponents exps(int n, const char* p, const char* q) {
  return NormExponents{n, Exponent::parse(p), Exponent::parse(q)};
}

Vecd vec(std::initializer_list<double> xs) {
  Vecd v(static_cast<gmcf::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Simpson's rule on [a, b] with m (even) panels.
template <typename F>
double simpson(F f, double a, double b, int m) {
  double acc = f(a) + f(b);
  const double h = (b - a) / m;
  for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("monitored quantity bookkeeping and CSV") {
  gmcf::MonitoredQuantity m;
  m.tag = gmcf::QuantityTag::Monotonicity;
  m.pole = vec({0.5, 0.0});
  m.s = 0.25;
  m.append(0.0, 1.0);
  m.append(0.1, 0.5);
  CHECK_THROWS_AS(m.append(0.1, 0.4), gmcf::Error);
  CHECK_THROWS_AS(m.append(0.2, NAN), gmcf::Error);
  std::ostringstream out;
  m.write_csv(out);
  CHECK(out.str() ==
        "t,value,tag,pole_1,pole_2,pole_3,s,p,q\n"
        "0,1,monotonicity,0.5,0,,0.25,,\n"
        "0.10000000000000001,0.5,monotonicity,0.5,0,,0.25,,\n");
}

TEST_CASE("transport norms") {
  const Domain d = Domain::interval(0.0, 1.0, 21);
  const auto zero = gmcf::run(GridFunction(d), TransportField::zero(1), config(0.05, 1.0));
  CHECK(gmcf::transport_norm(zero, TransportField::zero(1), exps(1, "2", "2"), 1.0) == 0.0);

  const auto unit = TransportField::constant_vertical(1, 1.0);
  const auto lifted = gmcf::run(GridFunction(d), unit, config(0.05, 1.0));
  CHECK(gmcf::transport_norm(lifted, unit, exps(1, "2", "2"), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gmcf::transport_norm(lifted, unit, exps(1, "inf", "inf"), 1.0) == 1.0);

  // f = (0, t) keeps the graph flat, so the norm is (int_0^tau t^q dt)^{1/q}.
  const TransportField ramp("ramp", 1, [](const Vecd&, double, double t) { return vec({0.0, t}); });
  const auto traj = gmcf::run(GridFunction(d), ramp, config(1e-3, 1.0));
  double prev = 0.0;
  for (double tau : {0.25, 0.5, 0.7505, 1.0}) {
    const double norm = gmcf::transport_norm(traj, ramp, exps(1, "2", "2"), tau);
    CHECK(norm == doctest::Approx(std::sqrt(tau * tau * tau / 3.0)).epsilon(1e-6));
    CHECK(norm > prev);
    prev = norm;
  }
  CHECK(gmcf::transport_norm(traj, ramp, exps(1, "3", "4"), 1.0) == doctest::Approx(std::pow(0.2, 0.25)).epsilon(1e-6));
  CHECK_THROWS_AS(gmcf::transport_norm(traj, ramp, exps(1, "2", "2"), 0.0), gmcf::Error);
  CHECK_THROWS_AS(gmcf::transport_norm(traj, ramp, exps(1, "2", "2"), 1.5), gmcf::Error);

  // For p = q the iterated norm is the space-time L^p norm on the graph;
  // oracle: direct space-time trapezoid over the snapshots of a curved run.
  const auto f = TransportField::smooth_bounded(1, 0.7);
  const auto curved = gmcf::run(GridFunction::sample(d, [](const Vecd& x) { return 0.2 * std::cos(M_PI * x(0)); }),
                                f, config(0.01, 0.3));
  double st = 0.0;
  for (std::size_t i = 1; i < curved.size(); ++i) {
    auto slab = [&](const GridFunction& u) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(d.grid().size());
      for (const auto k : d.grid().active) g[k] = f(d.node_position(k), u[k], u.time()).squaredNorm();
      return gmcf::surface_integral(u, g);
    };
    st += 0.5 * (slab(curved.snapshots[i - 1]) + slab(curved.snapshots[i])) *
          (curved.snapshots[i].time() - curved.snapshots[i - 1].time());
  }
  CHECK(gmcf::transport_norm(curved, f, exps(1, "2", "2"), 0.3) == doctest::Approx(std::sqrt(st)).epsilon(1e-12));
}

TEST_CASE("gradient bound monitor") {
  const Domain d = Domain::interval(0.0, 1.0, 41);
  const auto flat = gmcf::run(GridFunction(d), TransportField::zero(1), config(0.05, 1.0));
  const auto rep = gmcf::gradient_bound_monitor(flat, flat.front());
  CHECK(rep.bound == 4.0);
  CHECK_FALSE(rep.first_violation);
  CHECK(rep.certified_time == doctest::Approx(1.0));
  for (double v : rep.sup_v.values()) CHECK(v == 1.0);

  const auto u0 = GridFunction::sample(d, [](const Vecd& x) { return 0.1 * std::cos(M_PI * x(0)); });
  const auto forced = gmcf::run(u0, TransportField::smooth_bounded(1, 1.0), config(0.01, 0.2));
  const auto r2 = gmcf::gradient_bound_monitor(forced, u0);
  CHECK_FALSE(r2.first_violation);
  CHECK(r2.certified_time > 0.0);
  CHECK(r2.running_max.back() >= r2.sup_v.values().front());

  // Self-similar family with alpha = 0: sup |du| = tau^{-1/2} sup |d phi|.
  const gmcf::SelfSimilarSolution sol(0.0, gmcf::BumpProfile{1, 0.2, 0.5});
  const Domain fine = Domain::interval(-1.0, 1.0, 2001);
  SolverConfig c = config(0.0, 1.0 - 2e-3);
  c.step_schedule = [](double t) { return 0.02 * (1.0 - t); };
  c.output_every = 10;
  const auto blow = gmcf::run(sol.sample(fine, 0.0), sol.transport_field(), c);
  const auto r3 = gmcf::gradient_bound_monitor(blow, blow.front());
  REQUIRE(r3.first_violation);
  CHECK(*r3.first_violation < 1.0);
  CHECK(r3.certified_time < *r3.first_violation);
}

TEST_CASE("Gaussian integral on a flat disk") {
  const Domain d = Domain::disk(1.0, 129);
  const GridFunction u(d);
  const double R = 8.0;  // plateau radius 0.5
  auto oracle = [&](double tau) {
    return simpson([&](double r) {
      const auto eta = gmcf::cutoff<double>(r * r, R);
      return 2 * M_PI * r * eta.value * std::exp(-r * r / (4 * tau)) / (4 * M_PI * tau);
    }, 0.0, 1.0, 4000);
  };
  for (double tau : {0.05, 0.01, 1e-3, 1e-4}) {
    KernelSpec spec{vec({0.0, 0.0, 0.0}), tau, R};
    const double q = gmcf::kernel_integral(u, spec, gmcf::Weight::One, gmcf::KernelTerms::Rho1);
    CHECK(q == doctest::Approx(oracle(tau)).epsilon(2e-3));
    CHECK(q <= 1.0 + 2e-3);
  }
}

TEST_CASE("monotonicity on a stationary flat graph") {
  const Domain d = Domain::disk(1.0, 97);
  const auto traj = gmcf::run(GridFunction(d), TransportField::zero(2), config(0.002, 0.02));
  const KernelSpec spec{vec({0.1, -0.05, 0.0}), 0.02, 8.0};
  const auto m = gmcf::monotonicity_quantity(traj, spec, gmcf::Weight::One, gmcf::KernelTerms::Rho1);
  const auto vals = m.values();
  REQUIRE(vals.size() == traj.size() - 1);
  for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1] - 1e-3);
  for (double v : vals) CHECK(v <= 1.0 + 2e-3);
  CHECK(vals.back() == doctest::Approx(1.0).epsilon(2e-3));

  const KernelSpec late{vec({0.0, 0.0, 0.0}), 0.5, 8.0};
  CHECK_THROWS_AS(gmcf::monotonicity_quantity(traj, late, gmcf::Weight::One), gmcf::Error);
  try {
    gmcf::monotonicity_quantity(traj, late, gmcf::Weight::One);
  } catch (const gmcf::Error& e) {
    CHECK(e.code() == gmcf::ErrorCode::PoleNotCovered);
  }
}

TEST_CASE("boundary pole: reflected and direct kernels contribute equally") {
  const Domain d = Domain::interval(0.0, 1.0, 2001);
  const GridFunction u(d);
  const double R = d.curvature_radius();
  for (double tau : {1e-4, 2e-5}) {
    const KernelSpec spec{vec({0.0, 0.0}), tau, R};
    const double one = gmcf::kernel_integral(u, spec, gmcf::Weight::One, gmcf::KernelTerms::Rho1);
    const double both = gmcf::kernel_integral(u, spec, gmcf::Weight::One, gmcf::KernelTerms::Rho1PlusRho2);
    CHECK(both - one == doctest::Approx(one).epsilon(1e-9));
    const double half = simpson([&](double x) {
      return gmcf::cutoff<double>(x * x, R).value * std::exp(-x * x / (4 * tau)) / std::sqrt(4 * M_PI * tau);
    }, 0.0, R / 8.0, 20000);
    CHECK(both == doctest::Approx(2.0 * half).epsilon(1e-4));
  }
}

TEST_CASE("weighted quantity") {
  CHECK(gmcf::eta_weight(0.3, 0.0, 2.0) == 1.0);
  double prev = 1.0;
  for (double t = 0.01; t <= 0.3; t += 0.01) {
    const double e = gmcf::eta_weight(0.3, t, 2.0);
    CHECK(e <= prev);
    prev = e;
  }
  CHECK(gmcf::eta_weight(0.3, 0.3, 2.0) == doctest::Approx(std::exp(-2.0 * std::pow(0.3, 0.25))));

  const Domain d = Domain::disk(1.0, 49);
  const auto u0 = GridFunction::sample(d, [](const Vecd& x) { return 0.1 * std::cos(M_PI * x.squaredNorm()); });
  const auto traj = gmcf::run(u0, TransportField::zero(2), config(0.01, 0.05));
  const KernelSpec spec{vec({0.0, 0.0, 0.0}), 0.05, 1.0};
  const auto plain = gmcf::monotonicity_quantity(traj, spec, gmcf::Weight::V);
  const auto w0 = gmcf::weighted_quantity(traj, spec, 0.0);
  CHECK(plain.values() == w0.values());
  CHECK(w0.tag == gmcf::QuantityTag::WeightedMonotonicity);
}

TEST_CASE("evolution residual") {
  const Domain d = Domain::disk(1.0, 33);
  const auto flat = gmcf::run(GridFunction(d), TransportField::zero(2), config(0.01, 0.05));
  for (double r : gmcf::evolution_residual(flat, TransportField::zero(2)).values()) CHECK(r == 0.0);
  const auto short_run = gmcf::run(GridFunction(d), TransportField::zero(2), config(0.01, 0.01));
  try {
    gmcf::evolution_residual(short_run, TransportField::zero(2));
    FAIL("expected InsufficientSnapshots");
  } catch (const gmcf::Error& e) {
    CHECK(e.code() == gmcf::ErrorCode::InsufficientSnapshots);
  }

  // Manufactured solution on the interval, joint refinement of h and dt.
  const gmcf::SelfSimilarSolution sol(1.0, gmcf::BumpProfile{1, 0.5, 0.9});
  std::vector<double> scale, res;
  for (int level = 0; level < 3; ++level) {
    const int nodes = 64 << level;
    const Domain line = Domain::interval(-1.0, 1.0, nodes + 1);
    const double dt = 0.01 / (1 << level);
    const auto traj = gmcf::run(sol.sample(line, 0.0), sol.transport_field(), config(dt, 0.1));
    const auto r = gmcf::evolution_residual(traj, sol.transport_field());
    double worst = 0.0;
    for (double x : r.values()) worst = std::max(worst, x);
    scale.push_back(line.spacing() + dt);
    res.push_back(worst);
  }
  CHECK(testing::loglog_slope(scale, res) >= 0.8);
}

TEST_CASE("boundary sign") {
  const Domain line = Domain::interval(0.0, 1.0, 41);
  const auto u0 = GridFunction::sample(line, [](const Vecd& x) { return 0.3 * std::cos(M_PI * x(0)); });
  const auto traj = gmcf::run(u0, TransportField::zero(1), config(0.01, 0.1));
  const auto r1 = gmcf::boundary_sign_check(traj);
  CHECK(std::abs(r1.max_direct) < 1e-12);
  CHECK(r1.max_identity == 0.0);

  const Domain disk = Domain::disk(1.0, 33);
  const auto flat = gmcf::run(GridFunction(disk), TransportField::zero(2), config(0.01, 0.05));
  const auto r2 = gmcf::boundary_sign_check(flat);
  CHECK(r2.max_direct == 0.0);
  CHECK(r2.max_disagreement == 0.0);

  // u = x y (2 - |x|^2) satisfies the Neumann condition on the unit circle
  // with tangential slope cos(2 theta), so B(du, du)/v = -cos^2(2 theta)/v.
  std::vector<double> hs, gaps;
  for (int nodes : {33, 65, 129}) {
    const Domain dd = Domain::disk(1.0, nodes);
    const auto w = GridFunction::sample(dd, [](const Vecd& x) { return x(0) * x(1) * (2.0 - x.squaredNorm()); });
    gmcf::SolutionTrajectory one;
    one.snapshots.push_back(w);
    const auto rep = gmcf::boundary_sign_check(one, 256);
    CHECK(rep.max_direct <= rep.max_identity + rep.max_disagreement + 1e-12);
    CHECK(rep.max_identity <= 0.0);
    hs.push_back(dd.spacing());
    gaps.push_back(rep.max_disagreement);
  }
  CHECK(testing::loglog_slope(hs, gaps) > 0.8);
}

TEST_CASE("boundary flux term vanishes on a flat graph") {
  const Domain d = Domain::disk(1.0, 33);
  const auto flat = gmcf::run(GridFunction(d), TransportField::zero(2), config(0.01, 0.05));
  const KernelSpec spec{vec({0.95, 0.0, 0.0}), 0.06, 1.0};
  for (double v : gmcf::boundary_flux_quantity(flat, spec).values()) CHECK(v == 0.0);
}

TEST_CASE("Hoelder quotient") {
  const auto pairs = gmcf::sample_pairs(vec({0.0, -1.0}), vec({1.0, 1.0}), 0.0, 1.0, 2000, 42);
  CHECK(gmcf::holder_constant_estimate(TransportField::constant_vertical(1, 2.0), 0.5, pairs) == 0.0);
  // Same seed, same sample.
  const auto again = gmcf::sample_pairs(vec({0.0, -1.0}), vec({1.0, 1.0}), 0.0, 1.0, 2000, 42);
  CHECK(again[17].first.X == pairs[17].first.X);

  // f = (0, x_1) with a = 1 is Lipschitz with constant 1: the estimate stays
  // below 1 and approaches it as the sample grows.
  const TransportField linear("linear", 1, [](const Vecd& x, double, double) { return vec({0.0, x(0)}); });
  double prev = 0.0;
  for (int count : {10, 100, 10000}) {
    const double k = gmcf::holder_constant_estimate(
        linear, 1.0, gmcf::sample_pairs(vec({0.0, -1.0}), vec({1.0, 1.0}), 0.5, 0.5, count, 7));
    CHECK(k <= 1.0);
    CHECK(k >= prev);
    prev = k;
  }
  CHECK(prev > 0.99);

  std::vector<std::pair<gmcf::SpaceTimePoint, gmcf::SpaceTimePoint>> same{{{vec({0.1, 0.2}), 0.3}, {vec({0.1, 0.2}), 0.3}}};
  CHECK(gmcf::holder_constant_estimate(linear, 1.0, same) == 0.0);

  // The self-similar transport loses Hoelder control as t -> 1.
  const gmcf::SelfSimilarSolution sol(0.46875, gmcf::BumpProfile{1, 1.0, 0.5});
  const auto f = sol.transport_field();
  double last = 0.0;
  for (double gap : {1e-1, 1e-2, 1e-3}) {
    const double k = gmcf::holder_constant_estimate(
        f, 0.5, gmcf::sample_pairs(vec({-0.5, -1.0}), vec({0.5, 1.0}), 1.0 - gap, 1.0 - gap / 2, 4000, 3));
    CHECK(k > last);
    last = k;
  }
}
