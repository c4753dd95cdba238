#include "gmcf/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>

namespace gmcf {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"domain", {"kind", "lower", "upper", "radius", "nodes", "cutoff_radius"}},
      {"initial", {"kind", "amplitude", "wavenumber", "radius", "table"}},
      {"transport", {"kind", "value", "amplitude", "alpha", "profile_amplitude", "profile_radius"}},
      {"solver",
       {"scheme", "dt", "final_time", "output_every", "blowup_ceiling", "step_fraction", "picard_tolerance",
        "picard_max_iterations", "linear_tolerance", "study", "levels", "level_steps", "time_nodes", "time_steps",
        "time_final_time", "solver_gap", "scale"}},
      {"diagnostics",
       {"criteria", "regime", "quantities", "p", "q", "pole", "s", "kernel_radius", "c13", "margin",
        "boundary_samples", "tolerance_constant", "kernel_terms", "holder_alpha", "holder_pairs", "seed"}},
      {"output", {"directory", "snapshots"}},
  };
  return keys;
}

const std::set<std::string>& known_quantities() {
  static const std::set<std::string> q{"sup-v", "inner-transport-norm", "transport-norm", "monotonicity",
                                       "weighted-monotonicity", "boundary-flux", "evolution-residual",
                                       "boundary-sign", "holder"};
  return q;
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  fail(ErrorCode::ConfigInvalid, key + ": " + why);
}

class Section {
 public:
  Section(const pt::ptree& tree, std::string name) : name_(std::move(name)) {
    if (auto child = tree.get_child_optional(name_)) node_ = &*child;
  }

  std::optional<std::string> raw(const std::string& key) const {
    if (!node_) return std::nullopt;
    auto v = node_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return boost::trim_copy(*v);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return raw(key).value_or(fallback);
  }

  template <typename T>
  T number(const std::string& key, T fallback) const {
    auto v = raw(key);
    return v ? convert<T>(key, *v) : fallback;
  }

  template <typename T>
  std::optional<T> maybe(const std::string& key) const {
    auto v = raw(key);
    if (!v) return std::nullopt;
    return convert<T>(key, *v);
  }

  template <typename T>
  std::vector<T> list(const std::string& key) const {
    std::vector<T> out;
    auto v = raw(key);
    if (!v || v->empty()) return out;
    std::vector<std::string> parts;
    boost::split(parts, *v, boost::is_any_of(","));
    for (auto& p : parts) out.push_back(convert<T>(key, boost::trim_copy(p)));
    return out;
  }

  bool flag(const std::string& key, bool fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    invalid(full(key), "expected true or false, got '" + *v + "'");
  }

  template <typename E>
  E choice(const std::string& key, const std::map<std::string, E>& options, E fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    auto it = options.find(*v);
    if (it == options.end()) invalid(full(key), "unknown value '" + *v + "'");
    return it->second;
  }

  std::string full(const std::string& key) const { return name_ + "." + key; }

 private:
  template <typename T>
  T convert(const std::string& key, const std::string& v) const {
    if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else {
      try {
        T x = boost::lexical_cast<T>(v);
        if constexpr (std::is_floating_point_v<T>) {
          if (!std::isfinite(x)) invalid(full(key), "value must be finite");
        }
        return x;
      } catch (const boost::bad_lexical_cast&) {
        invalid(full(key), "cannot parse '" + v + "'");
      }
    }
  }

  std::string name_;
  const pt::ptree* node_ = nullptr;
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) invalid(section, "unknown section");
    if (!body.data().empty() && body.empty()) invalid(section, "key outside any section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) invalid(section + "." + key, "unknown key");
    }
  }
}

Exponent parse_exponent(const Section& s, const std::string& key) {
  try {
    return Exponent::parse(*s.raw(key));
  } catch (const Error& e) {
    invalid(s.full(key), e.what());
  }
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) invalid(key, why);
}

}  // namespace

Domain DomainSpec::build(int nodes_per_axis) const {
  return kind == DomainKind::Interval ? Domain::interval(lower, upper, nodes_per_axis, cutoff_radius)
                                      : Domain::disk(radius, nodes_per_axis);
}

std::optional<NormExponents> DiagnosticsSpec::exponents(int n) const {
  if (!p || !q) return std::nullopt;
  return NormExponents{n, *p, *q};
}

std::optional<SelfSimilarSolution> RunConfig::self_similar() const {
  if (transport.kind != TransportKind::SelfSimilar) return std::nullopt;
  Rational alpha;
  if (transport.alpha) {
    alpha = *transport.alpha;
  } else {
    alpha = BlowupParameters{*diagnostics.exponents(dim())}.alpha0();
  }
  return SelfSimilarSolution(to_double(alpha),
                             BumpProfile{dim(), transport.profile_amplitude, transport.profile_radius});
}

TransportField RunConfig::transport_field() const {
  switch (transport.kind) {
    case TransportKind::Zero: return TransportField::zero(dim());
    case TransportKind::ConstantVertical: return TransportField::constant_vertical(dim(), transport.value);
    case TransportKind::SmoothBounded: return TransportField::smooth_bounded(dim(), transport.amplitude);
    case TransportKind::SelfSimilar: return self_similar()->transport_field();
  }
  return TransportField::zero(dim());
}

GridFunction RunConfig::initial_data(const Domain& d) const {
  const double A = initial.amplitude;
  const double k = initial.wavenumber * M_PI;
  switch (initial.kind) {
    case InitialKind::Zero: return GridFunction(d);
    case InitialKind::Cosine:
      if (d.kind() == DomainKind::Interval) {
        const double a = d.lower(), len = d.upper() - d.lower();
        return GridFunction::sample(d, [=](const Vecd& x) { return A * std::cos(k * (x(0) - a) / len); });
      } else {
        const double r2 = d.radius() * d.radius();
        return GridFunction::sample(d, [=](const Vecd& x) { return A * std::cos(k * x.squaredNorm() / r2); });
      }
    case InitialKind::Saddle: {
      const double r2 = d.radius() * d.radius();
      return GridFunction::sample(
          d, [=](const Vecd& x) { return A * x(0) * x(1) * (2.0 * r2 - x.squaredNorm()) / (r2 * r2); });
    }
    case InitialKind::Bump: {
      const BumpProfile b{d.dim(), A, initial.radius};
      return GridFunction::sample(d, [&](const Vecd& x) { return b.value(x); });
    }
    case InitialKind::SelfSimilar: return self_similar()->sample(d, 0.0);
    case InitialKind::Table: {
      const auto path = initial.table.is_absolute() ? initial.table : base_directory / initial.table;
      std::ifstream in(path);
      if (!in) invalid("initial.table", "cannot open " + path.string());
      std::string line;
      std::getline(in, line);
      const auto& active = d.grid().active;
      Eigen::VectorXd values(static_cast<Index>(active.size()));
      std::size_t row = 0;
      while (std::getline(in, line)) {
        if (boost::trim_copy(line).empty()) continue;
        std::vector<std::string> cols;
        boost::split(cols, line, boost::is_any_of(","));
        if (cols.size() != static_cast<std::size_t>(d.dim() + 1)) {
          invalid("initial.table", "row " + std::to_string(row + 1) + " has the wrong number of columns");
        }
        if (row >= active.size()) invalid("initial.table", "more rows than active nodes");
        const Vecd x = d.node_position(active[row]);
        try {
          for (int i = 0; i < d.dim(); ++i) {
            if (std::abs(boost::lexical_cast<double>(boost::trim_copy(cols[static_cast<std::size_t>(i)])) - x(i)) >
                1e-9 * (1.0 + std::abs(x(i)))) {
              invalid("initial.table", "row " + std::to_string(row + 1) + " is not at the expected node");
            }
          }
          values[static_cast<Index>(row)] = boost::lexical_cast<double>(boost::trim_copy(cols.back()));
        } catch (const boost::bad_lexical_cast&) {
          invalid("initial.table", "row " + std::to_string(row + 1) + " is not numeric");
        }
        ++row;
      }
      if (row != active.size()) invalid("initial.table", "fewer rows than active nodes");
      return GridFunction::from_active(d, values, 0.0);
    }
  }
  return GridFunction(d);
}

RunConfig parse_config(const pt::ptree& tree, const std::string& name) {
  check_keys(tree);
  RunConfig cfg;
  cfg.name = name;

  const Section dom(tree, "domain");
  cfg.domain.kind = dom.choice<DomainKind>("kind", {{"interval", DomainKind::Interval}, {"disk", DomainKind::Disk}},
                                           DomainKind::Interval);
  cfg.domain.lower = dom.number("lower", 0.0);
  cfg.domain.upper = dom.number("upper", 1.0);
  cfg.domain.radius = dom.number("radius", 1.0);
  cfg.domain.nodes = dom.number("nodes", 65);
  cfg.domain.cutoff_radius = dom.maybe<double>("cutoff_radius");
  if (cfg.domain.kind == DomainKind::Interval) {
    require(cfg.domain.lower < cfg.domain.upper, "domain.upper", "must exceed domain.lower");
    require(cfg.domain.nodes >= 3, "domain.nodes", "an interval needs at least 3 nodes");
    require(!cfg.domain.cutoff_radius || *cfg.domain.cutoff_radius > 0.0, "domain.cutoff_radius", "must be positive");
  } else {
    require(cfg.domain.radius > 0.0, "domain.radius", "must be positive");
    require(cfg.domain.nodes >= 5, "domain.nodes", "a disk needs at least 5 nodes per axis");
    require(!cfg.domain.cutoff_radius, "domain.cutoff_radius", "applies to intervals only");
  }

  const Section ini(tree, "initial");
  cfg.initial.kind = ini.choice<InitialKind>("kind",
                                             {{"zero", InitialKind::Zero},
                                              {"cosine", InitialKind::Cosine},
                                              {"saddle", InitialKind::Saddle},
                                              {"bump", InitialKind::Bump},
                                              {"self-similar", InitialKind::SelfSimilar},
                                              {"table", InitialKind::Table}},
                                             InitialKind::Zero);
  cfg.initial.amplitude = ini.number("amplitude", 0.0);
  cfg.initial.wavenumber = ini.number("wavenumber", 1);
  cfg.initial.radius = ini.number("radius", 0.5);
  cfg.initial.table = ini.text("table", "");
  require(cfg.initial.kind != InitialKind::Saddle || cfg.domain.kind == DomainKind::Disk, "initial.kind",
          "saddle data needs a disk");
  require(cfg.initial.kind != InitialKind::Table || !cfg.initial.table.empty(), "initial.table",
          "required for table data");
  require(cfg.initial.radius > 0.0, "initial.radius", "must be positive");

  const Section tr(tree, "transport");
  cfg.transport.kind = tr.choice<TransportKind>("kind",
                                                {{"zero", TransportKind::Zero},
                                                 {"constant-vertical", TransportKind::ConstantVertical},
                                                 {"smooth-bounded", TransportKind::SmoothBounded},
                                                 {"self-similar", TransportKind::SelfSimilar}},
                                                TransportKind::Zero);
  cfg.transport.value = tr.number("value", 0.0);
  cfg.transport.amplitude = tr.number("amplitude", 0.0);
  if (auto a = tr.raw("alpha"); a && *a != "alpha0") {
    try {
      cfg.transport.alpha = parse_rational(*a);
    } catch (const Error& e) {
      invalid("transport.alpha", e.what());
    }
  }
  cfg.transport.profile_amplitude = tr.number("profile_amplitude", 1.0);
  cfg.transport.profile_radius = tr.number("profile_radius", 0.5);

  const Section sol(tree, "solver");
  auto& sc = cfg.solver.solver;
  sc.scheme = sol.choice<Scheme>("scheme",
                                 {{"semi-implicit", Scheme::SemiImplicit},
                                  {"explicit", Scheme::Explicit},
                                  {"picard", Scheme::Picard}},
                                 Scheme::SemiImplicit);
  sc.dt = sol.number("dt", 0.0);
  sc.final_time = sol.number("final_time", 0.0);
  sc.output_every = sol.number("output_every", 1);
  sc.blowup_ceiling = sol.number("blowup_ceiling", 1e3);
  sc.picard_tolerance = sol.number("picard_tolerance", 1e-10);
  sc.picard_max_iterations = sol.number("picard_max_iterations", 50);
  sc.linear_tolerance = sol.number("linear_tolerance", 1e-10);
  cfg.solver.step_fraction = sol.number("step_fraction", 0.0);
  cfg.solver.study = sol.choice<Study>("study",
                                       {{"single", Study::Single},
                                        {"convergence", Study::Convergence},
                                        {"residual", Study::Residual},
                                        {"blowup", Study::Blowup},
                                        {"scaling", Study::Scaling}},
                                       Study::Single);
  cfg.solver.levels = sol.list<int>("levels");
  cfg.solver.level_steps = sol.list<double>("level_steps");
  cfg.solver.time_nodes = sol.number("time_nodes", 0);
  cfg.solver.time_steps = sol.list<double>("time_steps");
  cfg.solver.time_final_time = sol.number("time_final_time", 0.0);
  cfg.solver.solver_gap = sol.number("solver_gap", 0.05);
  cfg.solver.scale = sol.number("scale", 0.5);
  require(sc.final_time >= 0.0, "solver.final_time", "must be nonnegative");
  require(sc.output_every >= 1, "solver.output_every", "must be at least 1");
  require(sc.blowup_ceiling > 0.0, "solver.blowup_ceiling", "must be positive");
  require(cfg.solver.step_fraction >= 0.0 && cfg.solver.step_fraction < 1.0, "solver.step_fraction",
          "must lie in [0, 1)");
  if (cfg.solver.step_fraction > 0.0) {
    const double frac = cfg.solver.step_fraction;
    sc.step_schedule = [frac](double t) { return frac * (1.0 - t); };
  }
  for (int n : cfg.solver.levels) require(n >= 3, "solver.levels", "node counts must be at least 3");
  for (double dt : cfg.solver.level_steps) require(dt > 0.0, "solver.level_steps", "steps must be positive");
  for (double dt : cfg.solver.time_steps) require(dt > 0.0, "solver.time_steps", "steps must be positive");
  require(cfg.solver.scale > 0.0, "solver.scale", "must be positive");

  const Section dia(tree, "diagnostics");
  cfg.diagnostics.criteria = dia.list<int>("criteria");
  for (int c : cfg.diagnostics.criteria) {
    require(c >= 5 && c <= 12, "diagnostics.criteria", "run configurations cover criteria 5 to 12");
  }
  cfg.diagnostics.regime =
      dia.choice<Regime>("regime", {{"none", Regime::None}, {"theorem1", Regime::Theorem1}}, Regime::None);
  cfg.diagnostics.quantities = dia.list<std::string>("quantities");
  for (const auto& q : cfg.diagnostics.quantities) {
    require(known_quantities().count(q) > 0, "diagnostics.quantities", "unknown quantity '" + q + "'");
  }
  if (dia.raw("p")) cfg.diagnostics.p = parse_exponent(dia, "p");
  if (dia.raw("q")) cfg.diagnostics.q = parse_exponent(dia, "q");
  cfg.diagnostics.pole = dia.list<double>("pole");
  cfg.diagnostics.s = dia.number("s", 0.0);
  cfg.diagnostics.kernel_radius = dia.number("kernel_radius", 1.0);
  cfg.diagnostics.c13 = dia.number("c13", 0.0);
  cfg.diagnostics.kernel_terms = dia.choice<KernelTerms>(
      "kernel_terms", {{"rho1", KernelTerms::Rho1}, {"rho1+rho2", KernelTerms::Rho1PlusRho2}},
      KernelTerms::Rho1PlusRho2);
  cfg.diagnostics.margin = dia.number("margin", 0.0);
  cfg.diagnostics.boundary_samples = dia.number("boundary_samples", 128);
  cfg.diagnostics.tolerance_constant = dia.number("tolerance_constant", 1.0);
  cfg.diagnostics.holder_alpha = dia.number("holder_alpha", 1.0);
  cfg.diagnostics.holder_pairs = dia.number("holder_pairs", 1000);
  cfg.diagnostics.seed = dia.number<std::uint64_t>("seed", 1);
  require(cfg.diagnostics.p.has_value() == cfg.diagnostics.q.has_value(), "diagnostics.q",
          "p and q are given together");
  require(cfg.diagnostics.kernel_radius > 0.0, "diagnostics.kernel_radius", "must be positive");
  require(cfg.diagnostics.boundary_samples >= 1, "diagnostics.boundary_samples", "must be positive");
  require(cfg.diagnostics.holder_alpha > 0.0 && cfg.diagnostics.holder_alpha <= 1.0, "diagnostics.holder_alpha",
          "must lie in (0, 1]");

  const Section out(tree, "output");
  cfg.output.directory = out.text("directory", name.empty() ? "out" : name);
  cfg.output.snapshots = out.flag("snapshots", false);

  // Cross-section rules.
  const auto exps = cfg.diagnostics.exponents(cfg.dim());
  if (cfg.diagnostics.regime == Regime::Theorem1) {
    require(exps.has_value(), "diagnostics.regime", "the gradient-bound regime needs p and q");
    require(exps->subcritical(), "diagnostics.regime",
            "n/p + 2/q = " + to_string(Rational(1) - exps->gap()) + " is not below 1 (gap " + to_string(exps->gap()) +
                ")");
  }
  const bool needs_exps = [&] {
    for (const auto& q : cfg.diagnostics.quantities) {
      if (q == "inner-transport-norm" || q == "transport-norm") return true;
    }
    return cfg.solver.study == Study::Blowup;
  }();
  require(!needs_exps || exps.has_value(), "diagnostics.p", "required by the requested quantities");
  for (const auto& q : cfg.diagnostics.quantities) {
    if (q == "monotonicity" || q == "weighted-monotonicity" || q == "boundary-flux") {
      require(static_cast<int>(cfg.diagnostics.pole.size()) == cfg.dim() + 1, "diagnostics.pole",
              "needs n + 1 coordinates");
      require(cfg.diagnostics.s > 0.0, "diagnostics.s", "must be positive");
    }
  }
  if (cfg.transport.kind == TransportKind::SelfSimilar) {
    if (!cfg.transport.alpha) {
      require(exps.has_value(), "transport.alpha", "alpha0 needs diagnostics.p and diagnostics.q");
      require(exps->gap() < Rational(0), "transport.alpha", "alpha0 needs n/p + 2/q > 1");
    }
    const double extent = cfg.domain.kind == DomainKind::Interval
                              ? std::min(-cfg.domain.lower, cfg.domain.upper)
                              : cfg.domain.radius;
    require(cfg.transport.profile_radius < extent, "transport.profile_radius",
            "the profile support must lie inside the domain");
    require(sc.final_time < 1.0, "solver.final_time", "the self-similar family is singular at t = 1");
  }
  require(cfg.initial.kind != InitialKind::SelfSimilar || cfg.transport.kind == TransportKind::SelfSimilar,
          "initial.kind", "self-similar data needs a self-similar transport");
  const bool manufactured = cfg.solver.study == Study::Convergence || cfg.solver.study == Study::Residual ||
                            cfg.solver.study == Study::Blowup;
  require(!manufactured || cfg.transport.kind == TransportKind::SelfSimilar, "solver.study",
          "manufactured studies need a self-similar transport");
  if (cfg.solver.study == Study::Convergence) {
    require(cfg.solver.levels.size() >= 2, "solver.levels", "a convergence study needs two levels");
    require(cfg.solver.level_steps.size() == 1, "solver.level_steps", "one step for the spatial ladder");
  }
  if (cfg.solver.study == Study::Residual) {
    require(cfg.solver.levels.size() >= 2 && cfg.solver.levels.size() == cfg.solver.level_steps.size(),
            "solver.level_steps", "one step per level");
  }
  if (cfg.solver.study == Study::Blowup) {
    require(!cfg.transport.alpha, "transport.alpha", "the blow-up study runs at alpha0");
    require(!cfg.solver.levels.empty(), "solver.levels", "the blow-up study needs a ladder");
  }
  return cfg;
}

pt::ptree read_config_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigInvalid, path.string() + ": cannot open");
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::ConfigInvalid, path.string() + ": line " + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
  pt::ptree tree = read_config_tree(path);
  for (const auto& [key, value] : overrides) {
    if (key.find('.') == std::string::npos) invalid(key, "override keys have the form section.key");
    tree.put(key, value);
  }
  RunConfig cfg = parse_config(tree, path.stem().string());
  cfg.base_directory = path.parent_path();
  return cfg;
}

std::pair<std::string, std::vector<std::string>> parse_sweep_param(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) invalid(text, "expected section.key=v1,v2,...");
  std::string key = boost::trim_copy(text.substr(0, eq));
  std::vector<std::string> values;
  boost::split(values, text.substr(eq + 1), boost::is_any_of(","));
  for (auto& v : values) {
    boost::trim(v);
    if (v.empty()) invalid(key, "empty sweep value");
  }
  return {key, values};
}

}  // namespace gmcf
