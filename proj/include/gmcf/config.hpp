#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "gmcf/diagnostics.hpp"
#include "gmcf/domain.hpp"
#include "gmcf/exponents.hpp"
#include "gmcf/grid_function.hpp"
#include "gmcf/manufactured.hpp"
#include "gmcf/solver.hpp"
#include "gmcf/transport.hpp"

namespace gmcf {

// Run configuration. The file is INI text with the sections [domain],
// [initial], [transport], [solver], [diagnostics] and [output]; the keys,
// their units and defaults are listed in docs/config.md. Unknown sections or
// keys are rejected with ConfigInvalid naming "section.key".

struct DomainSpec {
  DomainKind kind = DomainKind::Interval;
  double lower = 0.0;   // length
  double upper = 1.0;   // length
  double radius = 1.0;  // length
  int nodes = 65;       // per axis
  std::optional<double> cutoff_radius;  // length; interval only

  Domain build(int nodes_per_axis) const;
  Domain build() const { return build(nodes); }
};

enum class InitialKind { Zero, Cosine, Saddle, Bump, SelfSimilar, Table };

struct InitialSpec {
  InitialKind kind = InitialKind::Zero;
  double amplitude = 0.0;   // length
  int wavenumber = 1;       // dimensionless
  double radius = 0.5;      // length; bump only
  std::filesystem::path table;
};

enum class TransportKind { Zero, ConstantVertical, SmoothBounded, SelfSimilar };

struct TransportSpec {
  TransportKind kind = TransportKind::Zero;
  double value = 0.0;       // length / time
  double amplitude = 0.0;   // length / time
  std::optional<Rational> alpha;  // unset with kind self-similar means alpha0(p, q)
  double profile_amplitude = 1.0;  // length
  double profile_radius = 0.5;     // self-similar variable units
};

enum class Study { Single, Convergence, Residual, Blowup, Scaling };

struct SolverSpec {
  SolverConfig solver;
  double step_fraction = 0.0;  // dimensionless; > 0 selects dt = step_fraction (1 - t)
  Study study = Study::Single;
  std::vector<int> levels;     // node counts per axis for studies
  std::vector<double> level_steps;  // time
  int time_nodes = 0;
  std::vector<double> time_steps;   // time
  double time_final_time = 0.0;     // time
  double solver_gap = 0.05;         // time
  double scale = 0.5;               // dimensionless
};

enum class Regime { None, Theorem1 };

struct DiagnosticsSpec {
  std::vector<int> criteria;
  Regime regime = Regime::None;
  std::vector<std::string> quantities;
  std::optional<Exponent> p;
  std::optional<Exponent> q;
  std::vector<double> pole;     // length; n + 1 coordinates
  double s = 0.0;               // time
  double kernel_radius = 1.0;   // length
  double c13 = 0.0;             // time^{-1/4}
  KernelTerms kernel_terms = KernelTerms::Rho1PlusRho2;
  double margin = 0.0;          // length
  int boundary_samples = 128;
  double tolerance_constant = 1.0;   // C in the tolerances 1e-8 + C h
  double holder_alpha = 1.0;
  int holder_pairs = 1000;
  std::uint64_t seed = 1;

  std::optional<NormExponents> exponents(int n) const;
};

struct OutputSpec {
  std::filesystem::path directory = "out";
  bool snapshots = false;
};

struct RunConfig {
  std::string name;
  DomainSpec domain;
  InitialSpec initial;
  TransportSpec transport;
  SolverSpec solver;
  DiagnosticsSpec diagnostics;
  OutputSpec output;
  std::filesystem::path base_directory;  // resolves relative table paths

  int dim() const { return domain.kind == DomainKind::Interval ? 1 : 2; }
  /// Self-similar solution named by the transport section, if any.
  std::optional<SelfSimilarSolution> self_similar() const;
  TransportField transport_field() const;
  GridFunction initial_data(const Domain& d) const;
};

/// Parses and validates; `name` labels the run in reports.
RunConfig parse_config(const boost::property_tree::ptree& tree, const std::string& name);
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides = {});
boost::property_tree::ptree read_config_tree(const std::filesystem::path& path);

/// "section.key=v1,v2,..." into the key and its values.
std::pair<std::string, std::vector<std::string>> parse_sweep_param(const std::string& text);

}  // namespace gmcf
