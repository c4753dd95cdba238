#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gmcf/exponents.hpp"
#include "gmcf/kernels.hpp"
#include "gmcf/solver.hpp"

namespace gmcf {

enum class QuantityTag {
  SupV,
  InnerTransportNorm,
  Monotonicity,
  WeightedMonotonicity,
  BoundaryFlux,
  EvolutionResidual,
  BoundarySign,
};

std::string_view to_string(QuantityTag tag);

/// Time series of one monitored quantity with its run metadata.
struct MonitoredQuantity {
  QuantityTag tag = QuantityTag::SupV;
  std::vector<std::pair<double, double>> series;
  std::optional<Vecd> pole;
  std::optional<double> s;
  std::optional<NormExponents> exps;

  /// Appends (t, value); times must increase strictly and values be finite.
  void append(double t, double value);
  std::vector<double> times() const;
  std::vector<double> values() const;

  /// Columns: t, value, tag, pole_1, pole_2, pole_3, s, p, q. Absent
  /// metadata is written as an empty field. Numbers use %.17g.
  void write_csv(std::ostream& out) const;
};

/// Writes a number with %.17g so that output is byte-stable.
std::string format_number(double x);

// Transport norms ----------------------------------------------------------

/// (int_Gamma_t |f(x, u, t)|^p dH^n)^{1/p}; the maximum over nodes for p = inf.
double inner_transport_norm(const GridFunction& u, const TransportField& f, const Exponent& p);

/// Inner norm at every snapshot.
MonitoredQuantity inner_transport_series(const SolutionTrajectory& traj, const TransportField& f,
                                         const NormExponents& exps);

/// Iterated L^q_t L^p_x norm over [t_0, tau]: trapezoid in t over the
/// snapshots, the integrand interpolated linearly at tau when it falls
/// between two snapshots; the maximum over snapshots for q = inf.
double transport_norm(const SolutionTrajectory& traj, const TransportField& f, const NormExponents& exps,
                      double tau);

// Gradient bound ------------------------------------------------------------

struct GradientBoundReport {
  double bound = 0.0;                 // 4 (1 + ||du_0||_inf^2)
  MonitoredQuantity sup_v;            // sup_Omega v(., t) per snapshot
  std::vector<double> running_max;    // M_T: running maximum of sup v
  std::optional<double> first_violation;
  double certified_time = 0.0;        // largest T with the bound on [t_0, T]
};

GradientBoundReport gradient_bound_monitor(const SolutionTrajectory& traj, const GridFunction& u0);

// Kernel-weighted integrals -------------------------------------------------

enum class Weight { One, V };
enum class KernelTerms { Rho1, Rho1PlusRho2 };

/// int_Gamma_t phi (rho_1 + rho_2) dH^n at a single time level, by node-wise
/// quadrature refined with 4x subsampling per axis inside B(y, 4 sqrt(s - t)).
double kernel_integral(const GridFunction& u, const KernelSpec& spec, Weight weight, KernelTerms terms);

/// kernel_integral at every snapshot with t < s. Throws PoleNotCovered when
/// the trajectory ends before s.
MonitoredQuantity monotonicity_quantity(const SolutionTrajectory& traj, const KernelSpec& spec, Weight weight,
                                        KernelTerms terms = KernelTerms::Rho1PlusRho2);

/// eta(t) = exp(-c (s^{1/4} - (s - t)^{1/4})).
double eta_weight(double s, double t, double c);

/// eta(t) int_Gamma_t v (rho_1 + rho_2) dH^n.
MonitoredQuantity weighted_quantity(const SolutionTrajectory& traj, const KernelSpec& spec, double c13,
                                    KernelTerms terms = KernelTerms::Rho1PlusRho2);

/// Boundary term int_{dGamma_t} (rho_1 + rho_2)(D_Gamma v . nu) dH^{n-1},
/// exported without an asserted sign. The disk boundary uses `samples` points.
MonitoredQuantity boundary_flux_quantity(const SolutionTrajectory& traj, const KernelSpec& spec,
                                         int samples = 256);

// Pointwise identities ------------------------------------------------------

/// Sup over active nodes of the residual of the evolution equation for v,
///   d_t v - Lap_Gamma v - (du/v . dv)(d_t u / v) + |A|^2 v
///     + 2 |D_Gamma v|^2 / v - du . d(f . n),
/// at every interior snapshot, with time derivatives by centred differences
/// over neighbouring snapshots. Nodes within `margin` of the boundary are
/// skipped.
MonitoredQuantity evolution_residual(const SolutionTrajectory& traj, const TransportField& f,
                                     double margin = 0.0);

struct BoundarySignReport {
  double max_direct = 0.0;        // max of D_Gamma v . nu over boundary points and times
  double max_identity = 0.0;      // max of B(du, du) / v
  double max_disagreement = 0.0;  // max |direct - identity|
  MonitoredQuantity series;       // per-snapshot max of the direct value
};

/// D_Gamma v . nu and B(du, du)/v on the boundary at every snapshot. Interval:
/// the end nodes. Disk: `samples` boundary points, with du and d^2 u carried
/// from the nearest active node by a first-order Taylor step.
BoundarySignReport boundary_sign_check(const SolutionTrajectory& traj, int samples = 128);

// Hoelder quotient -----------------------------------------------------------

struct SpaceTimePoint {
  Vecd X;  // n + 1 coordinates
  double t = 0.0;
};

/// Maximum of |f(X,t) - f(Y,s)| / (|X - Y|^a + |t - s|^{a/2}) over pairs;
/// coincident pairs are skipped. Returns 0 when no pair is usable.
double holder_constant_estimate(const TransportField& f, double a,
                                const std::vector<std::pair<SpaceTimePoint, SpaceTimePoint>>& pairs);

/// Uniform random pairs in box x [t_lo, t_hi] from a seeded generator; the
/// box is given by per-coordinate bounds of X.
std::vector<std::pair<SpaceTimePoint, SpaceTimePoint>> sample_pairs(const Vecd& lo, const Vecd& hi, double t_lo,
                                                                    double t_hi, int count, std::uint64_t seed);

}  // namespace gmcf
