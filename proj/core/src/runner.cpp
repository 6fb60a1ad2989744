#include "wgf/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wgf/csv_io.hpp"
#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {

using nlohmann::json;

namespace {

std::string provenance_name(EquilibriumMember::Provenance p) {
  switch (p) {
    case EquilibriumMember::Provenance::ClosedForm: return "closed_form";
    case EquilibriumMember::Provenance::FixedPoint: return "fixed_point";
    case EquilibriumMember::Provenance::DiracLattice: return "dirac_lattice";
  }
  return "?";
}

GridMeasure gaussian_seed(const Domain& d, int n, double center, double width) {
  std::vector<double> vals(static_cast<size_t>(n));
  const double h = d.length() / n;
  for (int i = 0; i < n; ++i) {
    const double x = d.left() + (i + 0.5) * h;
    const double z = (x - center) / width;
    vals[static_cast<size_t>(i)] = std::exp(-0.5 * z * z);
  }
  return GridMeasure::normalized(d, std::move(vals));
}

json verdicts_json(const std::vector<Verdict>& verdicts) {
  json arr = json::array();
  for (const auto& v : verdicts)
    arr.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  return arr;
}

} // namespace

bool RunSummary::all_pass() const {
  if (outcome != Outcome::Ok) return false;
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

std::string RunSummary::table_row() const {
  std::ostringstream out;
  out << (all_pass() ? "PASS" : "FAIL") << "  " << scenario_id;
  if (outcome == Outcome::ConfigFailed) out << "  [config: " << error << "]";
  else if (outcome == Outcome::NumericalFailed) out << "  [abort: " << error << "]";
  else {
    int failed = 0;
    for (const auto& v : verdicts)
      if (!v.pass) ++failed;
    out << "  (" << verdicts.size() - failed << "/" << verdicts.size()
        << " checks)";
  }
  return out.str();
}

EquilibriumSet build_equilibria(const Scenario& sc) {
  EquilibriumSet set;
  const Measure initial = build_initial(sc);
  for (const auto& spec : sc.equilibria) {
    switch (spec.kind) {
      case EquilibriaSpec::Kind::Uniform: {
        EquilibriumMember m;
        m.measure = uniform_state(sc.domain, sc.n_cells);
        m.label = spec.label;
        set.members.push_back(std::move(m));
        break;
      }
      case EquilibriaSpec::Kind::Kuramoto: {
        if (sc.model.kernel.kind() != Kernel::Kind::Kuramoto)
          throw ConfigError("equilibria.kuramoto_center requires the kuramoto kernel");
        EquilibriumMember m;
        m.measure =
            kuramoto_state(sc.model.kernel.kappa(), spec.center, sc.n_cells);
        m.label = spec.label;
        set.members.push_back(std::move(m));
        set.symmetry = EquilibriumSet::SymmetryClass::Translates;
        break;
      }
      case EquilibriaSpec::Kind::Barenblatt: {
        const double hw = 0.5 * sc.domain.length();
        EquilibriumMember m;
        m.measure = barenblatt(sc.model.power_m, sc.n_cells, hw);
        if (domain_of(m.measure) != sc.domain)
          throw ConfigError("barenblatt equilibrium needs a symmetric interval domain");
        m.label = spec.label;
        set.members.push_back(std::move(m));
        break;
      }
      case EquilibriaSpec::Kind::Parabolic: {
        const double hw = 0.5 * sc.domain.length();
        const double center = moments(initial).mean;
        GridMeasure prof = parabolic_steady_state(
            sc.model.power_m, spec.alpha, sc.n_cells, hw,
            0.5 * (sc.domain.left() + sc.domain.right()));
        // re-center on the conserved center of mass when it differs
        if (std::fabs(center - 0.5 * (sc.domain.left() + sc.domain.right())) >
            1e-12)
          throw ConfigError(
              "parabolic equilibrium expects the initial center of mass at "
              "the domain midpoint; got " + format_full(center));
        EquilibriumMember m;
        m.measure = std::move(prof);
        m.label = spec.label;
        set.members.push_back(std::move(m));
        break;
      }
      case EquilibriaSpec::Kind::WeakConfinement: {
        const double hw = 0.5 * sc.domain.length();
        EquilibriumMember m = weak_confinement_state(spec.dim, sc.n_cells, hw);
        if (domain_of(m.measure) != sc.domain)
          throw ConfigError("weak_confinement equilibrium needs a symmetric interval domain");
        set.members.push_back(std::move(m));
        break;
      }
      case EquilibriaSpec::Kind::McKeanPicard: {
        for (double c : spec.seed_centers) {
          EquilibriumMember m = mckean_vlasov_fixed_point(
              sc.model, gaussian_seed(sc.domain, sc.n_cells, c, 1.0),
              spec.alpha);
          m.label = "picard_seed_" + format_full(c);
          set.members.push_back(std::move(m));
        }
        break;
      }
      case EquilibriaSpec::Kind::DiracLattice: {
        if (sc.initial.type != InitialSpec::Type::Atoms)
          throw ConfigError("dirac_lattice equilibrium requires atoms initial data");
        set.members.push_back(dirac_lattice(sc.initial.weights,
                                            sc.initial.positions, sc.model,
                                            sc.domain));
        set.symmetry = EquilibriumSet::SymmetryClass::LatticeFamily;
        break;
      }
      case EquilibriaSpec::Kind::Atoms: {
        EquilibriumMember m;
        m.measure =
            ParticleMeasure::canonical(sc.domain, spec.positions, spec.weights);
        m.label = spec.label;
        m.residual = dissipation(sc.model, m.measure);
        set.members.push_back(std::move(m));
        break;
      }
    }
  }
  return set;
}

RunSummary run(const Scenario& sc, const std::filesystem::path& out_root,
               int snapshot_stride) {
  const auto t0 = std::chrono::steady_clock::now();
  RunSummary summary;
  summary.scenario_id = sc.id;
  summary.artifact_dir = out_root / sc.id;

  TrajectoryRecord record;
  EquilibriumSet eqs;
  LasalleReport report;
  try {
    const Measure initial = build_initial(sc);
    eqs = build_equilibria(sc);

    if (sc.particle_run()) {
      record = evolve_particles(sc.model, std::get<ParticleMeasure>(initial),
                                sc.t_end, sc.particle_controls);
    } else if (sc.selfsimilar_pme) {
      record = evolve_selfsimilar_pme(sc.model.power_m,
                                      std::get<GridMeasure>(initial), sc.t_end,
                                      sc.grid_controls);
    } else {
      record = evolve_grid(sc.model, std::get<GridMeasure>(initial), sc.t_end,
                           sc.grid_controls);
    }
  } catch (const ConfigError& e) {
    summary.outcome = RunSummary::Outcome::ConfigFailed;
    summary.error = e.what();
    return summary;
  } catch (const ValidationError& e) {
    summary.outcome = RunSummary::Outcome::ConfigFailed;
    summary.error = e.what();
    return summary;
  } catch (const Error& e) {
    summary.outcome = RunSummary::Outcome::NumericalFailed;
    summary.error = e.what();
    return summary;
  }
  summary.steps = record.steps;

  // --- equilibrium residual invariant ---
  {
    bool ok = true;
    double worst = 0.0;
    for (auto& m : eqs.members) {
      const double g = dissipation(sc.model, m.measure);
      if (m.residual == 0.0) m.residual = g;
      const double tol =
          std::holds_alternative<ParticleMeasure>(m.measure) ? 1e-10 : 1e-6;
      worst = std::max(worst, g);
      if (g > tol) ok = false;
    }
    if (!eqs.members.empty())
      summary.verdicts.push_back(
          {"equilibria_dissipation", ok,
           "max member dissipation " + format_full(worst)});
  }

  // --- checks ---
  if (sc.checks.energy_monotone) {
    report.energy_monotone = check_energy_monotone(record);
    summary.verdicts.push_back({"energy_monotone", report.energy_monotone.pass,
                                report.energy_monotone.detail});
  }
  report.gq_integral_value = gq_integral(record);
  if (sc.checks.ms_residual_rel) {
    const double t_lo = 0.02 * sc.t_end;
    const double sup =
        ms_residual_sup(record, sc.model.wasserstein_p, t_lo, sc.t_end);
    double dE_scale = 0.0;
    for (int k = 0; k + 1 < record.size(); ++k) {
      const auto& a = record.diag[static_cast<size_t>(k)];
      const auto& b = record.diag[static_cast<size_t>(k + 1)];
      if (a.t < t_lo) continue;
      dE_scale = std::max(dE_scale,
                          std::fabs((b.energy - a.energy) / (b.t - a.t)));
    }
    report.ms_residual_sup_value = sup;
    const double bound = *sc.checks.ms_residual_rel * std::max(dE_scale, 1e-12);
    summary.verdicts.push_back(
        {"ms_residual", sup <= bound,
         "sup residual " + format_full(sup) + " vs bound " + format_full(bound)});
  }
  if (sc.checks.convergence_tol) {
    if (eqs.members.empty())
      throw ConfigError("convergence check requires a non-empty equilibria set");
    report.convergence = check_convergence_to_set(
        record, eqs, sc.checks.convergence_metric, *sc.checks.convergence_tol,
        sc.checks.convergence_window, sc.model.wasserstein_p,
        sc.checks.translation_quotient);
    summary.verdicts.push_back(
        {"convergence", report.convergence->pass,
         "final distance " + format_full(report.convergence->final_distance) +
             " (" + metric_name(sc.checks.convergence_metric) + " < " +
             format_full(*sc.checks.convergence_tol) + ")"});
  }
  if (sc.checks.omega_clusters) {
    report.omega = extract_omega_limit(record);
    const int got = static_cast<int>(report.omega->representatives.size());
    summary.verdicts.push_back(
        {"omega_limit", got == *sc.checks.omega_clusters,
         std::to_string(got) + " cluster(s), scatter " +
             format_full(report.omega->scatter)});
  }
  if (sc.checks.energy_limit_tol) {
    if (!report.omega) report.omega = extract_omega_limit(record);
    std::vector<double> rep_energies;
    for (const auto& rep : report.omega->representatives)
      rep_energies.push_back(energy(sc.model, rep));
    report.energy_limit =
        check_energy_limit(record, rep_energies, *sc.checks.energy_limit_tol,
                           sc.checks.energy_continuous);
    summary.verdicts.push_back(
        {"energy_limit", report.energy_limit->pass,
         "E_infinity " + format_full(report.energy_limit->e_infinity) + "; " +
             report.energy_limit->detail});
  }
  if (sc.checks.second_moment_monotone) {
    report.second_moment = check_second_moment_monotone(record);
    summary.verdicts.push_back({"second_moment_monotone",
                                report.second_moment->pass,
                                report.second_moment->detail});
  }
  if (sc.checks.fit_min_rate) {
    std::vector<double> ts, ds;
    for (int k = 0; k < record.size(); ++k) {
      const double t = record.times[static_cast<size_t>(k)];
      if (t < sc.checks.fit_window_lo || t > sc.checks.fit_window_hi) continue;
      ts.push_back(t);
      ds.push_back(distance_to_set(record.snapshots[static_cast<size_t>(k)],
                                   eqs, sc.checks.convergence_metric,
                                   sc.model.wasserstein_p,
                                   sc.checks.translation_quotient));
    }
    try {
      report.rate = fit_exponential_rate(ts, ds, sc.checks.fit_window_lo,
                                         sc.checks.fit_window_hi);
      // the theoretical rate is a one-sided lower bound; allow 5% slack
      const bool pass = report.rate->rate >= 0.95 * *sc.checks.fit_min_rate;
      summary.verdicts.push_back(
          {"decay_rate", pass,
           "fitted rate " + format_full(report.rate->rate) + " (R^2 " +
               format_full(report.rate->goodness) + ") vs bound " +
               format_full(*sc.checks.fit_min_rate)});
    } catch (const ValidationError& e) {
      summary.verdicts.push_back({"decay_rate", false, e.what()});
    }
  }
  if (sc.checks.com_drift_tol) {
    const bool pass = record.com_drift <= *sc.checks.com_drift_tol;
    summary.verdicts.push_back(
        {"center_of_mass", pass, "drift " + format_full(record.com_drift)});
  }
  if (sc.checks.min_gap_margin) {
    const bool pass = record.gap_bound_available &&
                      record.min_gap_bound_margin >= *sc.checks.min_gap_margin &&
                      record.order_preserved;
    summary.verdicts.push_back(
        {"non_collision", pass,
         "min gap margin " + format_full(record.min_gap_bound_margin) +
             (record.order_preserved ? ", order preserved" : ", ORDER BROKEN")});
  }
  if (sc.checks.expect_not_in_p2) {
    bool flagged = false;
    for (const auto& m : eqs.members) flagged = flagged || m.not_in_p2;
    summary.verdicts.push_back(
        {"not_in_p2", flagged,
         flagged ? "limit flagged outside P2 (divergent second moment)"
                 : "expected a NotInP2 flag on the limit state"});
  }

  // --- artifacts ---
  namespace fs = std::filesystem;
  fs::create_directories(summary.artifact_dir / "snapshots");
  fs::create_directories(summary.artifact_dir / "equilibria");
  {
    std::ostringstream diag;
    diag << "t,energy,dissipation_q,metric_derivative,mean,second_moment,"
            "mass_defect";
    if (record.is_particle) diag << ",cloud_diameter,min_gap,center_of_mass";
    diag << "\n";
    for (const auto& row : record.diag) {
      diag << format_full(row.t) << "," << format_full(row.energy) << ","
           << format_full(row.dissipation_q) << ","
           << format_full(row.metric_derivative) << "," << format_full(row.mean)
           << "," << format_full(row.second_moment) << ","
           << format_full(row.mass_defect);
      if (record.is_particle)
        diag << "," << format_full(row.cloud_diameter) << ","
             << format_full(row.min_gap) << ","
             << format_full(row.center_of_mass);
      diag << "\n";
    }
    write_text_file(summary.artifact_dir / "diagnostics.csv", diag.str());
  }
  {
    std::ostringstream index;
    index << "index,t,file\n";
    const int stride = std::max(snapshot_stride, 1);
    for (int k = 0; k < record.size(); k += stride) {
      char name[32];
      std::snprintf(name, sizeof(name), "snap_%05d.csv", k);
      write_measure_csv(summary.artifact_dir / "snapshots" / name,
                        record.snapshots[static_cast<size_t>(k)]);
      index << k << "," << format_full(record.times[static_cast<size_t>(k)])
            << "," << name << "\n";
    }
    write_text_file(summary.artifact_dir / "snapshots" / "index.csv",
                    index.str());
  }
  {
    json manifest = json::array();
    for (const auto& m : eqs.members) {
      const std::string file = m.label + ".csv";
      write_measure_csv(summary.artifact_dir / "equilibria" / file, m.measure);
      manifest.push_back({{"label", m.label},
                          {"provenance", provenance_name(m.provenance)},
                          {"residual", m.residual},
                          {"iterations", m.iterations},
                          {"energy", energy(sc.model, m.measure)},
                          {"not_in_p2", m.not_in_p2},
                          {"truncated_tail_mass", m.truncated_tail_mass},
                          {"file", file}});
    }
    write_text_file(summary.artifact_dir / "equilibria" / "manifest.json",
                    manifest.dump(2) + "\n");
  }
  {
    json rep;
    rep["scenario"] = sc.id;
    rep["steps"] = record.steps;
    rep["gq_integral"] = report.gq_integral_value;
    if (report.ms_residual_sup_value)
      rep["ms_residual_sup"] = *report.ms_residual_sup_value;
    if (report.convergence) {
      rep["convergence"] = {{"final_distance", report.convergence->final_distance},
                            {"pass", report.convergence->pass}};
    }
    if (report.omega) {
      rep["omega_limit"] = {
          {"clusters", report.omega->representatives.size()},
          {"scatter", report.omega->scatter},
          {"oscillatory", report.omega->oscillatory}};
    }
    if (report.energy_limit)
      rep["energy_limit"] = {{"e_infinity", report.energy_limit->e_infinity},
                             {"pass", report.energy_limit->pass}};
    rep["verdicts"] = verdicts_json(summary.verdicts);
    write_text_file(summary.artifact_dir / "report.json", rep.dump(2) + "\n");
  }
  {
    std::ostringstream txt;
    txt << "scenario " << sc.id << "\n";
    for (const auto& v : summary.verdicts)
      txt << (v.pass ? "PASS" : "FAIL") << "  " << v.name << ": " << v.detail
          << "\n";
    write_text_file(summary.artifact_dir / "summary.txt", txt.str());
  }

  summary.outcome = RunSummary::Outcome::Ok;
  for (const auto& v : summary.verdicts)
    if (!v.pass) summary.outcome = RunSummary::Outcome::CheckFailed;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return summary;
}

std::vector<RunSummary> run_suite(const std::filesystem::path& dir, int jobs,
                                  const std::filesystem::path& out_root) {
  namespace fs = std::filesystem;
  std::vector<fs::path> cfgs;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".cfg") cfgs.push_back(entry.path());
  std::sort(cfgs.begin(), cfgs.end());
  if (cfgs.empty()) throw ConfigError("run_suite: no .cfg files in " + dir.string());

  std::vector<RunSummary> results(cfgs.size());
  std::mutex mtx;
  size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      size_t idx;
      {
        std::lock_guard<std::mutex> lock(mtx);
        if (next >= cfgs.size()) return;
        idx = next++;
      }
      RunSummary& slot = results[idx];
      try {
        const Scenario sc = parse_scenario(cfgs[idx]);
        slot = run(sc, out_root);
      } catch (const ConfigError& e) {
        slot.scenario_id = cfgs[idx].stem().string();
        slot.outcome = RunSummary::Outcome::ConfigFailed;
        slot.error = e.what();
      } catch (const Error& e) {
        slot.scenario_id = cfgs[idx].stem().string();
        slot.outcome = RunSummary::Outcome::NumericalFailed;
        slot.error = e.what();
      }
    }
  };
  const int n_threads = std::clamp(jobs, 1, 16);
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

std::filesystem::path default_out_root() {
  if (const char* env = std::getenv("WGF_OUT"); env && *env) return env;
  return "out";
}

} // namespace wgf
