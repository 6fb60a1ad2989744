#include "wgf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wgf/csv_io.hpp"
#include "wgf/errors.hpp"

namespace wgf {
namespace {

struct RawConfig {
  // section -> key -> (value, line number)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> data;
  std::filesystem::path dir;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

RawConfig read_raw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path.string());
  RawConfig raw;
  raw.dir = path.parent_path();
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                          ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || section.empty())
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": key outside a section or empty key");
    if (raw.data[section].count(key))
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    raw.data[section][key] = {value, lineno};
  }
  return raw;
}

class ConfigReader {
public:
  ConfigReader(RawConfig raw, std::filesystem::path file)
      : raw_(std::move(raw)), file_(std::move(file)) {}

  bool has(const std::string& sec, const std::string& key) const {
    auto s = raw_.data.find(sec);
    return s != raw_.data.end() && s->second.count(key) > 0;
  }
  std::string str(const std::string& sec, const std::string& key,
                  const std::string& fallback = "") {
    consume(sec, key);
    auto s = raw_.data.find(sec);
    if (s == raw_.data.end() || !s->second.count(key)) return fallback;
    return s->second.at(key).first;
  }
  double num(const std::string& sec, const std::string& key, double fallback) {
    if (!has(sec, key)) {
      consume(sec, key);
      return fallback;
    }
    return parse_num(str(sec, key), sec, key);
  }
  double required_num(const std::string& sec, const std::string& key) {
    if (!has(sec, key)) {
      fail(sec + "." + key + " is required");
      return 0.0;
    }
    return parse_num(str(sec, key), sec, key);
  }
  long integer(const std::string& sec, const std::string& key, long fallback) {
    const double v = num(sec, key, static_cast<double>(fallback));
    return static_cast<long>(v);
  }
  bool flag(const std::string& sec, const std::string& key, bool fallback) {
    if (!has(sec, key)) {
      consume(sec, key);
      return fallback;
    }
    const std::string v = str(sec, key);
    if (v == "yes" || v == "true" || v == "on" || v == "1") return true;
    if (v == "no" || v == "false" || v == "off" || v == "0") return false;
    fail(sec + "." + key + ": expected yes/no, got '" + v + "'");
    return fallback;
  }
  std::vector<double> num_list(const std::string& sec, const std::string& key) {
    std::vector<double> out;
    if (!has(sec, key)) {
      consume(sec, key);
      return out;
    }
    std::istringstream in(str(sec, key));
    std::string tok;
    while (in >> tok) out.push_back(parse_num(tok, sec, key));
    return out;
  }

  void fail(const std::string& msg) { errors_.push_back(msg); }

  /// After parsing, every present key must have been consumed and every
  /// error reported at once.
  void finish() {
    for (const auto& [sec, kv] : raw_.data)
      for (const auto& [key, val] : kv)
        if (!consumed_.count(sec + "." + key))
          errors_.push_back("unknown key '" + key + "' in section [" + sec +
                            "] (line " + std::to_string(val.second) + ")");
    if (!errors_.empty()) {
      std::string msg = file_.string() + ": scenario validation failed:";
      for (const auto& e : errors_) msg += "\n  - " + e;
      throw ConfigError(msg);
    }
  }

  const std::filesystem::path& dir() const { return raw_.dir; }

private:
  void consume(const std::string& sec, const std::string& key) {
    consumed_.insert(sec + "." + key);
  }
  double parse_num(const std::string& v, const std::string& sec,
                   const std::string& key) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
      fail(sec + "." + key + ": not a number: '" + v + "'");
      return 0.0;
    }
    return x;
  }

  RawConfig raw_;
  std::filesystem::path file_;
  std::set<std::string> consumed_;
  std::vector<std::string> errors_;
};

bool filesystem_safe(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return true;
}

} // namespace

Scenario parse_scenario(const std::filesystem::path& path) {
  ConfigReader cfg(read_raw(path), path);
  Scenario sc;

  sc.id = cfg.str("scenario", "id");
  if (!filesystem_safe(sc.id))
    cfg.fail("scenario.id must be non-empty and filesystem-safe");

  // --- domain ---
  const std::string dk = cfg.str("domain", "kind");
  sc.n_cells = static_cast<int>(cfg.integer("domain", "n_cells", 256));
  if (sc.n_cells < 4) cfg.fail("domain.n_cells must be at least 4");
  if (dk == "torus") {
    const double period = cfg.num("domain", "period", 1.0);
    if (period > 0.0)
      sc.domain = Domain::torus(period);
    else
      cfg.fail("domain.period must be positive");
  } else if (dk == "interval") {
    const double left = cfg.required_num("domain", "left");
    const double right = cfg.required_num("domain", "right");
    const bool trunc = cfg.flag("domain", "truncation_of_line", false);
    if (right > left)
      sc.domain = Domain::interval(left, right, trunc);
    else
      cfg.fail("domain.right must exceed domain.left");
  } else {
    cfg.fail("domain.kind must be 'torus' or 'interval'");
  }

  // --- model ---
  const std::string internal = cfg.str("model", "internal", "none");
  if (internal == "none") {
    sc.model.internal = EnergyModel::Internal::None;
  } else if (internal == "entropy") {
    sc.model.internal = EnergyModel::Internal::Entropy;
    sc.model.internal_scale = cfg.num("model", "internal_scale", 1.0);
  } else if (internal == "power") {
    sc.model.internal = EnergyModel::Internal::Power;
    sc.model.internal_scale = cfg.num("model", "internal_scale", 1.0);
    sc.model.power_m = cfg.num("model", "power_m", 2.0);
    if (!(sc.model.power_m > 1.0)) cfg.fail("model.power_m must exceed 1");
  } else {
    cfg.fail("model.internal must be none/entropy/power");
  }
  if (sc.model.internal != EnergyModel::Internal::None &&
      !(sc.model.internal_scale > 0.0))
    cfg.fail("model.internal_scale must be positive");

  const std::string pot = cfg.str("model", "potential", "zero");
  if (pot == "zero") {
    sc.model.potential = Potential::zero();
  } else if (pot == "weak_log") {
    const int dim = static_cast<int>(cfg.integer("model", "potential_dim", 1));
    if (dim >= 1)
      sc.model.potential = Potential::weak_log(dim);
    else
      cfg.fail("model.potential_dim must be >= 1");
  } else if (pot == "quadratic") {
    sc.model.potential = Potential::quadratic(cfg.num("model", "potential_a", 1.0));
  } else if (pot == "bistable") {
    sc.model.potential = Potential::bistable(cfg.num("model", "potential_a", 1.0),
                                             cfg.num("model", "potential_b", 1.0));
  } else if (pot == "confinement") {
    sc.model.potential = Potential::confinement(cfg.num("model", "potential_a", 1.0));
  } else {
    cfg.fail("model.potential must be zero/weak_log/quadratic/bistable/confinement");
  }

  const std::string ker = cfg.str("model", "kernel", "zero");
  if (ker == "zero") {
    sc.model.kernel = Kernel::zero();
  } else if (ker == "kuramoto") {
    const double kap = cfg.num("model", "kernel_kappa", 1.0);
    if (kap > 0.0)
      sc.model.kernel = Kernel::kuramoto(kap);
    else
      cfg.fail("model.kernel_kappa: kappa must be positive");
  } else if (ker == "quadratic_attraction") {
    const double kap = cfg.num("model", "kernel_kappa", 1.0);
    if (kap > 0.0)
      sc.model.kernel = Kernel::quadratic_attraction(kap);
    else
      cfg.fail("model.kernel_kappa: kappa must be positive");
  } else if (ker == "hk") {
    const double radius = cfg.num("model", "hk_radius", 1.0);
    const double norm = cfg.num("model", "hk_normalization", 1.0);
    if (radius > 0.0 && norm > 0.0)
      sc.model.kernel = Kernel::hk(BumpSpec::smooth(radius, norm));
    else
      cfg.fail("model.hk_radius and model.hk_normalization must be positive");
  } else if (ker == "nonconvex") {
    sc.model.kernel = Kernel::nonconvex();
  } else {
    cfg.fail("model.kernel must be zero/kuramoto/quadratic_attraction/hk/nonconvex");
  }

  sc.model.wasserstein_p = cfg.num("model", "wasserstein_p", 2.0);
  if (!(sc.model.wasserstein_p > 1.0))
    cfg.fail("model.wasserstein_p must exceed 1");

  sc.selfsimilar_pme = cfg.flag("model", "selfsimilar_pme", false);
  if (sc.selfsimilar_pme) {
    if (sc.model.internal != EnergyModel::Internal::Power)
      cfg.fail("selfsimilar_pme requires internal = power");
    if (sc.domain.is_torus())
      cfg.fail("selfsimilar_pme requires an interval domain");
    // the runner derives the scale and confinement from m
    const double m = sc.model.power_m;
    sc.model.internal_scale = 1.0 / (m - 1.0);
    sc.model.potential = Potential::confinement(1.0 / ((m - 1.0) + 2.0));
    sc.model.kernel = Kernel::zero();
  }

  // --- initial ---
  const std::string it = cfg.str("initial", "type", "uniform");
  if (it == "uniform") {
    sc.initial.type = InitialSpec::Type::Uniform;
  } else if (it == "gaussian_like") {
    sc.initial.type = InitialSpec::Type::GaussianLike;
    sc.initial.center = cfg.num("initial", "center", 0.0);
    sc.initial.width = cfg.num("initial", "width", 1.0);
    if (!(sc.initial.width > 0.0)) cfg.fail("initial.width must be positive");
  } else if (it == "box") {
    sc.initial.type = InitialSpec::Type::Box;
    sc.initial.center = cfg.num("initial", "center", 0.0);
    sc.initial.width = cfg.num("initial", "width", 1.0);
    if (!(sc.initial.width > 0.0)) cfg.fail("initial.width must be positive");
  } else if (it == "atoms") {
    sc.initial.type = InitialSpec::Type::Atoms;
    sc.initial.positions = cfg.num_list("initial", "positions");
    sc.initial.weights = cfg.num_list("initial", "weights");
    if (sc.initial.positions.empty() ||
        sc.initial.positions.size() != sc.initial.weights.size())
      cfg.fail("initial.positions and initial.weights must be non-empty lists "
               "of equal length");
  } else if (it == "perturbed_uniform") {
    sc.initial.type = InitialSpec::Type::PerturbedUniform;
    sc.initial.amplitude = cfg.num("initial", "amplitude", 0.1);
    sc.initial.mode = static_cast<int>(cfg.integer("initial", "mode", 1));
    sc.initial.center = cfg.num("initial", "center", 0.0);
    if (!(std::fabs(sc.initial.amplitude) < 1.0))
      cfg.fail("initial.amplitude must satisfy |amplitude| < 1");
    if (sc.initial.mode < 1) cfg.fail("initial.mode must be >= 1");
  } else if (it == "from_file") {
    sc.initial.type = InitialSpec::Type::FromFile;
    const std::string f = cfg.str("initial", "file");
    if (f.empty()) {
      cfg.fail("initial.file is required for from_file");
    } else {
      sc.initial.file = cfg.dir() / f;
      if (!std::filesystem::exists(sc.initial.file))
        cfg.fail("initial.file does not exist: " + sc.initial.file.string());
    }
  } else {
    cfg.fail("initial.type must be uniform/gaussian_like/box/atoms/"
             "perturbed_uniform/from_file");
  }
  if (sc.initial.type == InitialSpec::Type::Atoms &&
      !sc.model.pure_interaction())
    cfg.fail("atoms initial data requires a pure interaction model");

  // --- time / controls ---
  sc.t_end = cfg.required_num("time", "t_end");
  if (!(sc.t_end > 0.0)) cfg.fail("time.t_end must be positive");
  const int snapshots = static_cast<int>(cfg.integer("time", "snapshots", 192));
  if (snapshots < 2) cfg.fail("time.snapshots must be at least 2");
  sc.grid_controls.snapshots = snapshots;
  sc.particle_controls.snapshots = snapshots;
  sc.grid_controls.cfl = cfg.num("time", "cfl", 0.4);
  sc.grid_controls.diffusion_number = cfg.num("time", "diffusion_number", 0.45);
  if (!(sc.grid_controls.cfl > 0.0 && sc.grid_controls.cfl <= 0.5))
    cfg.fail("time.cfl must lie in (0, 0.5]");
  if (!(sc.grid_controls.diffusion_number > 0.0 &&
        sc.grid_controls.diffusion_number <= 0.5))
    cfg.fail("time.diffusion_number must lie in (0, 0.5]");
  sc.grid_controls.mass_defect_bound = cfg.num("time", "mass_defect_abort", 1e-6);
  sc.grid_controls.max_steps = cfg.integer("time", "max_steps", 400000000L);
  sc.particle_controls.max_steps = sc.grid_controls.max_steps;
  sc.particle_controls.dt = cfg.num("time", "dt", 0.0);
  sc.particle_controls.startup_steps = cfg.integer("time", "startup_steps", 0);
  sc.particle_controls.startup_subdiv = cfg.integer("time", "startup_subdiv", 1);

  // --- equilibria ---
  if (cfg.flag("equilibria", "uniform", false)) {
    EquilibriaSpec e;
    e.kind = EquilibriaSpec::Kind::Uniform;
    e.label = "uniform";
    sc.equilibria.push_back(e);
  }
  if (cfg.has("equilibria", "kuramoto_center")) {
    EquilibriaSpec e;
    e.kind = EquilibriaSpec::Kind::Kuramoto;
    e.center = cfg.num("equilibria", "kuramoto_center", 0.0);
    e.label = "kuramoto_state";
    sc.equilibria.push_back(e);
  }
  if (cfg.flag("equilibria", "barenblatt", false)) {
    EquilibriaSpec e;
    e.kind = EquilibriaSpec::Kind::Barenblatt;
    e.label = "barenblatt";
    sc.equilibria.push_back(e);
  }
  if (cfg.has("equilibria", "parabolic_alpha")) {
    EquilibriaSpec e;
    e.kind = EquilibriaSpec::Kind::Parabolic;
    e.alpha = cfg.num("equilibria", "parabolic_alpha", 1.0);
    e.label = "parabolic";
    sc.equilibria.push_back(e);
  }
  if (cfg.has("equilibria", "weak_confinement_dim")) {
    EquilibriaSpec e;
    e.kind = EquilibriaSpec::Kind::WeakConfinement;
    e.dim = static_cast<int>(cfg.integer("equilibria", "weak_confinement_dim", 1));
    e.label = "weak_confinement";
    sc.equilibria.push_back(e);
  }
  if (cfg.has("equilibria", "picard_seeds")) {
    EquilibriaSpec e;
    e.kind = EquilibriaSpec::Kind::McKeanPicard;
    e.seed_centers = cfg.num_list("equilibria", "picard_seeds");
    e.alpha = cfg.num("equilibria", "picard_damping", 0.5);
    e.label = "picard";
    if (e.seed_centers.empty()) cfg.fail("equilibria.picard_seeds must be non-empty");
    sc.equilibria.push_back(e);
  } else {
    cfg.num("equilibria", "picard_damping", 0.5);  // consume when present
  }
  if (cfg.flag("equilibria", "dirac_lattice", false)) {
    EquilibriaSpec e;
    e.kind = EquilibriaSpec::Kind::DiracLattice;
    e.label = "dirac_lattice";
    sc.equilibria.push_back(e);
  }
  if (cfg.has("equilibria", "atoms_positions")) {
    EquilibriaSpec e;
    e.kind = EquilibriaSpec::Kind::Atoms;
    e.positions = cfg.num_list("equilibria", "atoms_positions");
    e.weights = cfg.num_list("equilibria", "atoms_weights");
    e.label = cfg.str("equilibria", "atoms_label", "atoms");
    if (e.positions.empty() || e.positions.size() != e.weights.size())
      cfg.fail("equilibria.atoms_positions/atoms_weights must be equal-length lists");
    sc.equilibria.push_back(e);
  } else {
    cfg.num_list("equilibria", "atoms_weights");
    cfg.str("equilibria", "atoms_label", "");
  }

  // --- checks ---
  sc.checks.energy_monotone = cfg.flag("checks", "energy_monotone", true);
  if (cfg.has("checks", "ms_residual_rel"))
    sc.checks.ms_residual_rel = cfg.num("checks", "ms_residual_rel", 0.05);
  if (cfg.has("checks", "convergence_tol")) {
    sc.checks.convergence_tol = cfg.num("checks", "convergence_tol", 1e-3);
    const std::string m = cfg.str("checks", "convergence_metric", "bl");
    try {
      sc.checks.convergence_metric = metric_from_name(m);
    } catch (const ValidationError&) {
      cfg.fail("checks.convergence_metric: unknown metric '" + m + "'");
    }
    sc.checks.convergence_window =
        static_cast<int>(cfg.integer("checks", "convergence_window", 8));
    sc.checks.translation_quotient =
        cfg.flag("checks", "translation_quotient", false);
  } else {
    cfg.str("checks", "convergence_metric", "bl");
    cfg.integer("checks", "convergence_window", 8);
    cfg.flag("checks", "translation_quotient", false);
  }
  if (cfg.has("checks", "omega_clusters"))
    sc.checks.omega_clusters =
        static_cast<int>(cfg.integer("checks", "omega_clusters", 1));
  if (cfg.has("checks", "energy_limit_tol"))
    sc.checks.energy_limit_tol = cfg.num("checks", "energy_limit_tol", 1e-3);
  sc.checks.energy_continuous = cfg.flag("checks", "energy_continuous", true);
  sc.checks.second_moment_monotone =
      cfg.flag("checks", "second_moment_monotone", false);
  if (cfg.has("checks", "fit_min_rate")) {
    sc.checks.fit_min_rate = cfg.num("checks", "fit_min_rate", 0.0);
    const auto window = cfg.num_list("checks", "fit_window");
    if (window.size() != 2 || !(window[0] < window[1]))
      cfg.fail("checks.fit_window must be 'lo hi' with lo < hi");
    else {
      sc.checks.fit_window_lo = window[0];
      sc.checks.fit_window_hi = window[1];
    }
  } else {
    cfg.num_list("checks", "fit_window");
  }
  if (cfg.has("checks", "com_drift_tol"))
    sc.checks.com_drift_tol = cfg.num("checks", "com_drift_tol", 1e-10);
  if (cfg.has("checks", "min_gap_margin"))
    sc.checks.min_gap_margin = cfg.num("checks", "min_gap_margin", 0.999999);
  sc.checks.expect_not_in_p2 = cfg.flag("checks", "expect_not_in_p2", false);

  cfg.finish();
  return sc;
}

Measure build_initial(const Scenario& sc) {
  const Domain& d = sc.domain;
  const int n = sc.n_cells;
  auto grid_with = [&](auto&& f) {
    std::vector<double> vals(static_cast<size_t>(n));
    const double h = d.length() / n;
    for (int i = 0; i < n; ++i) vals[static_cast<size_t>(i)] = f(d.left() + (i + 0.5) * h);
    return GridMeasure::normalized(d, std::move(vals));
  };
  switch (sc.initial.type) {
    case InitialSpec::Type::Uniform:
      return grid_with([](double) { return 1.0; });
    case InitialSpec::Type::GaussianLike: {
      const double c = sc.initial.center, w = sc.initial.width;
      return grid_with([c, w](double x) {
        const double z = (x - c) / w;
        return std::exp(-0.5 * z * z);
      });
    }
    case InitialSpec::Type::Box: {
      const double c = sc.initial.center, w = sc.initial.width;
      return grid_with(
          [c, w](double x) { return std::fabs(x - c) <= 0.5 * w ? 1.0 : 0.0; });
    }
    case InitialSpec::Type::PerturbedUniform: {
      const double a = sc.initial.amplitude, c = sc.initial.center;
      const int mode = sc.initial.mode;
      const double L = d.length(), left = d.left();
      return grid_with([a, c, mode, L, left](double x) {
        return 1.0 + a * std::cos(2.0 * M_PI * mode * (x - c) / L);
      });
    }
    case InitialSpec::Type::Atoms:
      return ParticleMeasure::canonical(d, sc.initial.positions,
                                        sc.initial.weights);
    case InitialSpec::Type::FromFile: {
      Measure m = read_measure_csv(sc.initial.file);
      if (domain_of(m) != d)
        throw ConfigError("initial.file domain does not match the scenario domain");
      if (const auto* g = std::get_if<GridMeasure>(&m);
          g && g->n_cells() != n)
        throw ConfigError("initial.file n_cells does not match the scenario");
      return m;
    }
  }
  throw ConfigError("build_initial: unhandled initial type");
}

} // namespace wgf
