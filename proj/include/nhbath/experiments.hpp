// experiments.hpp — config-driven experiment drivers and data export for the
// CLI: generic runs (spectrum, gbz, bound, dressed, dynamics, disorder) and
// the figure-reproduction presets.
#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhbath/boundstates.hpp"
#include "nhbath/config.hpp"
#include "nhbath/core.hpp"
#include "nhbath/csv.hpp"
#include "nhbath/disorder.hpp"
#include "nhbath/dressed.hpp"
#include "nhbath/dynamics.hpp"
#include "nhbath/model.hpp"
#include "nhbath/spectral.hpp"
#include "nhbath/version.hpp"

namespace nhbath {

namespace detail {

inline Eigen::VectorXd linspace(double lo, double hi, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v(i) = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace detail

/// One experiment invocation: resolves the output prefix, tracks written
/// files, and assembles the reproducibility manifest.
class ExperimentRun {
 public:
  explicit ExperimentRun(const ExperimentConfig& cfg) : cfg_(cfg) {
    prefix_ = cfg.out_prefix();
    const std::filesystem::path probe = prefix_ + "manifest.json";
    if (probe.has_parent_path())
      std::filesystem::create_directories(probe.parent_path());
    manifest_["schema"] = kCsvSchemaVersion;
    manifest_["version"] = kVersion;
    manifest_["experiment"] = cfg.experiment();
    manifest_["seed"] = cfg.seed();
    for (const auto& [k, v] : cfg.kv) manifest_["config"][k] = v;
  }

  const ExperimentConfig& cfg() const { return cfg_; }

  CsvWriter open(const std::string& name, const std::vector<std::string>& cols) {
    files_.push_back(name);
    return CsvWriter(prefix_ + name, cols);
  }

  template <class T>
  void resolved(const std::string& key, const T& value) {
    manifest_["resolved"][key] = value;
  }

  void finish() {
    manifest_["files"] = files_;
    std::ofstream out(prefix_ + "manifest.json");
    if (!out) throw Error("cannot write manifest at prefix " + prefix_);
    out << manifest_.dump(2) << "\n";
  }

 private:
  ExperimentConfig cfg_;
  std::string prefix_;
  nlohmann::ordered_json manifest_;
  std::vector<std::string> files_;
};

namespace detail {

inline void record_bath(ExperimentRun& run, const BathParams& p) {
  run.resolved("J1", p.J1);
  run.resolved("J2", p.J2);
  run.resolved("kappa", p.kappa);
  run.resolved("L", p.L);
  run.resolved("boundary", to_string(p.boundary));
}

inline void record_attachment(ExperimentRun& run, const EmitterAttachment& e,
                              const std::string& tag = "") {
  run.resolved(tag + "unit_cell", e.unit_cell);
  run.resolved(tag + "attach", to_string(e.sublattice));
  run.resolved(tag + "g", e.g);
  run.resolved(tag + "delta0", e.delta0);
  run.resolved(tag + "gamma", e.gamma);
}

inline void write_wavefunction(CsvWriter& csv, const Wavefunction& wf) {
  for (int j = 1; j <= wf.cells(); ++j)
    for (const Sublattice s : {Sublattice::A, Sublattice::B}) {
      const cplx c = wf.photon(j, s);
      csv.row(j, s, c.real(), c.imag(), std::norm(c));
    }
}

inline void write_pbc(CsvWriter& csv, const BathParams& p, int nk) {
  for (const auto& pt : pbc_spectrum(p, nk)) {
    csv.row(pt.k, 0, pt.E[0].real(), pt.E[0].imag());
    csv.row(pt.k, 1, pt.E[1].real(), pt.E[1].imag());
  }
}

inline void write_obc(CsvWriter& csv, const Eigen::MatrixXcd& M) {
  const ComplexSpectrum spec = obc_spectrum(M);
  for (int i = 0; i < spec.eigenvalues.size(); ++i)
    csv.row(i, spec.eigenvalues(i).real(), spec.eigenvalues(i).imag());
}

inline void write_ensemble(ExperimentRun& run, const BathParams& params,
                           const EmitterAttachment& attach,
                           const DisorderSpec& spec, int threads,
                           const std::string& stem) {
  const EnsembleResult res = disorder_ensemble(params, attach, spec, threads);
  CsvWriter weights = run.open(stem + ".csv",
                               {"V", "j", "sublattice", "mean_abs2", "stderr"});
  for (size_t iv = 0; iv < res.V_grid.size(); ++iv)
    for (int j = 1; j <= params.L; ++j)
      for (const Sublattice s : {Sublattice::A, Sublattice::B}) {
        const int col = 2 * (j - 1) + (s == Sublattice::B ? 1 : 0);
        weights.row(res.V_grid[iv], j, s, res.mean_weights(iv, col),
                    res.stderr_weights(iv, col));
      }
  CsvWriter energies = run.open(stem + "_spectrum.csv",
                                {"V", "realization", "re_E", "im_E"});
  for (size_t iv = 0; iv < res.V_grid.size(); ++iv)
    for (size_t rix = 0; rix < res.ingap_E[iv].size(); ++rix) {
      const cplx e = res.ingap_E[iv][rix];
      if (std::isnan(e.real())) continue;
      energies.row(res.V_grid[iv], static_cast<int>(rix), e.real(), e.imag());
    }
  run.resolved(stem + "_found_min",
               *std::min_element(res.n_found.begin(), res.n_found.end()));
}

// set preset keys only where the config did not specify them
inline void preset(ExperimentConfig& cfg,
                   std::initializer_list<std::pair<const char*, const char*>> kvs) {
  for (const auto& [k, v] : kvs)
    if (!cfg.has(k)) cfg.kv[k] = v;
}

}  // namespace detail

inline void run_spectrum(ExperimentRun& run) {
  const BathParams p = run.cfg().bath();
  const int nk = static_cast<int>(run.cfg().integer("nk", 512));
  detail::record_bath(run, p);
  run.resolved("nk", nk);
  CsvWriter pbc = run.open("pbc_spectrum.csv", {"k", "band", "re_E", "im_E"});
  detail::write_pbc(pbc, p, nk);
  CsvWriter obc = run.open("bath_spectrum.csv", {"index", "re_E", "im_E"});
  const Eigen::MatrixXcd bath = build_bath(p).entries;
  detail::write_obc(obc, bath);
  if (run.cfg().integer("save_vectors", 0) != 0) {
    const ComplexSpectrum spec = obc_spectrum(bath);
    CsvWriter vecs = run.open("bath_vectors.csv",
                              {"index", "site", "re_c", "im_c"});
    for (int m = 0; m < spec.eigenvalues.size(); ++m)
      for (int i = 0; i < spec.right.rows(); ++i)
        vecs.row(m, i, spec.right(i, m).real(), spec.right(i, m).imag());
  }
}

inline void run_gbz(ExperimentRun& run) {
  const BathParams p = run.cfg().bath();
  detail::record_bath(run, p);
  const double r = gbz_radius(p);
  const int W = non_bloch_winding(p);
  const auto [tp, tm] = transition_points(p);
  CsvWriter csv = run.open("gbz.csv",
                           {"radius", "winding", "transition_plus", "transition_minus"});
  csv.row(r, W, tp, tm);
}

inline void run_bound(ExperimentRun& run) {
  const BathParams p = run.cfg().bath();
  EmitterAttachment em = run.cfg().attachment();
  const cplx delta = em.detuning();
  SearchRect rect{run.cfg().num("re_min", -3.0), run.cfg().num("re_max", 3.0),
                  run.cfg().num("im_min", -2.0), run.cfg().num("im_max", 0.5)};
  detail::record_bath(run, p);
  detail::record_attachment(run, em);
  run.resolved("re_min", rect.re_min);
  run.resolved("re_max", rect.re_max);
  run.resolved("im_min", rect.im_min);
  run.resolved("im_max", rect.im_max);

  std::vector<std::string> log;
  const auto roots = solve_bound_states(p, em, delta, rect, &log);
  for (const auto& line : log) std::cerr << "note: " << line << "\n";
  CsvWriter csv = run.open("bound_states.csv",
                           {"index", "re_E", "im_E", "classification", "residual",
                            "ring_cells", "emitter_weight"});
  for (size_t i = 0; i < roots.size(); ++i) {
    const auto& r = roots[i];
    csv.row(static_cast<int>(i), r.E_b.real(), r.E_b.imag(),
            to_string(r.classification), r.residual, r.ring_cells,
            std::norm(r.wavefunction.c_e(0)));
    CsvWriter wf = run.open("bound_wf_" + std::to_string(i) + ".csv",
                            {"j", "sublattice", "re_c", "im_c", "abs2"});
    detail::write_wavefunction(wf, r.wavefunction);
  }
}

inline void run_dressed(ExperimentRun& run) {
  const BathParams p = run.cfg().bath();
  const EmitterAttachment em = run.cfg().attachment();
  detail::record_bath(run, p);
  detail::record_attachment(run, em);

  const DressedStateResult ds =
      dressed_state_numeric(p, em, em.delta0, em.gamma, em.g);
  CsvWriter info = run.open("dressed_info.csv",
                            {"E", "re_Ed", "im_Ed", "emitter_weight", "residual"});
  info.row(ds.E, ds.E_d.real(), ds.E_d.imag(), std::norm(ds.wavefunction.c_e(0)),
           ds.residual);
  CsvWriter wf = run.open("dressed_state.csv",
                          {"j", "sublattice", "re_c", "im_c", "abs2"});
  detail::write_wavefunction(wf, ds.wavefunction);

  const double scale = std::abs(p.J1) + std::abs(p.J2) + p.kappa + 1.0;
  if (p.J1 > p.kappa / 2.0 && std::abs(em.gamma - p.kappa) < 1e-12 * scale) {
    CsvWriter poles = run.open("dressed_poles.csv",
                               {"index", "E", "re_Ed", "im_Ed", "in_gap",
                                "cbar_e", "residual"});
    const auto all = dressed_state_poles(p, em, em.delta0, em.g);
    for (size_t i = 0; i < all.size(); ++i)
      poles.row(static_cast<int>(i), all[i].E, all[i].E_d.real(),
                all[i].E_d.imag(), all[i].in_gap ? 1 : 0,
                std::abs(all[i].cbar_e), all[i].residual);
  }
}

namespace detail {

struct TwoEmitterSetup {
  BathParams params;
  EmitterAttachment e1, e2;
  int excite = 1;
};

inline TwoEmitterSetup two_emitter_setup(const ExperimentConfig& cfg) {
  TwoEmitterSetup s;
  s.params = cfg.bath();
  s.e1.unit_cell = static_cast<int>(cfg.integer("j1", s.params.L / 2 - 5));
  s.e2.unit_cell = static_cast<int>(cfg.integer("j2", s.params.L / 2 + 5));
  s.e1.sublattice = cfg.sublattice("attach1", Sublattice::A);
  s.e2.sublattice = cfg.sublattice("attach2", Sublattice::A);
  s.e1.g = s.e2.g = cfg.num("g", 0.5);
  s.e1.delta0 = s.e2.delta0 = cfg.num("delta0", 0.0);
  s.e1.gamma = s.e2.gamma = cfg.gamma_or_kappa();
  s.excite = static_cast<int>(cfg.integer("excite", 1));
  if (s.excite != 1 && s.excite != 2)
    throw ConfigError("key 'excite': expected 1 or 2");
  return s;
}

inline Wavefunction emitter_excitation(int L, int which) {
  Wavefunction psi0;
  psi0.c_e = Eigen::VectorXcd::Zero(2);
  psi0.c_e(which - 1) = 1.0;
  psi0.c_photon = Eigen::MatrixXcd::Zero(L, 2);
  return psi0;
}

inline void write_trajectory(CsvWriter& csv, const Trajectory& traj) {
  for (int i = 0; i < traj.times.size(); ++i)
    csv.row(traj.times(i), std::norm(traj.emitter_amplitudes(0, i)),
            std::norm(traj.emitter_amplitudes(1, i)), traj.norm(i), traj.p_t(i));
}

}  // namespace detail

inline void run_dynamics(ExperimentRun& run) {
  const auto s = detail::two_emitter_setup(run.cfg());
  const double t_max = run.cfg().num("t_max", 40.0);
  const int n_times = static_cast<int>(run.cfg().integer("n_times", 401));
  detail::record_bath(run, s.params);
  detail::record_attachment(run, s.e1, "e1_");
  detail::record_attachment(run, s.e2, "e2_");
  run.resolved("excite", s.excite);
  run.resolved("t_max", t_max);
  run.resolved("n_times", n_times);

  const Eigen::VectorXd times = detail::linspace(0.0, t_max, n_times);
  const Wavefunction psi0 = detail::emitter_excitation(s.params.L, s.excite);
  const SystemMatrix sys = build_system(s.params, {s.e1, s.e2});
  const int snapshots = static_cast<int>(run.cfg().integer("snapshots", 0));
  const Trajectory traj = evolve(sys, psi0, times, snapshots > 0);
  CsvWriter csv = run.open("trajectory.csv", {"t", "C_e1", "C_e2", "norm", "p_t"});
  detail::write_trajectory(csv, traj);
  if (snapshots > 0) {
    CsvWriter snap = run.open("photon_snapshots.csv",
                              {"t", "j", "sublattice", "abs2"});
    const int stride = std::max(1, n_times / snapshots);
    for (int i = 0; i < n_times; i += stride)
      for (int j = 1; j <= s.params.L; ++j)
        for (const Sublattice ps : {Sublattice::A, Sublattice::B}) {
          const int row = 2 * (j - 1) + (ps == Sublattice::B ? 1 : 0);
          snap.row(times(i), j, ps, std::norm((*traj.photon_amplitudes)(row, i)));
        }
  }

  const double scale = std::abs(s.params.J1) + std::abs(s.params.J2) + s.params.kappa + 1.0;
  if (std::abs(s.e1.gamma - s.params.kappa) < 1e-12 * scale &&
      s.params.J1 > s.params.kappa / 2.0) {
    const Eigen::MatrixXcd ce =
        emitter_amplitudes_resolvent(s.params, s.e1, s.e2, psi0, times);
    CsvWriter res = run.open("resolvent_trajectory.csv", {"t", "C_e1", "C_e2"});
    for (int i = 0; i < times.size(); ++i)
      res.row(times(i), std::norm(ce(0, i)), std::norm(ce(1, i)));
  }
}

inline void run_disorder(ExperimentRun& run) {
  const BathParams p = run.cfg().bath();
  const EmitterAttachment em = run.cfg().attachment();
  detail::record_bath(run, p);
  detail::record_attachment(run, em);
  DisorderSpec spec;
  spec.seed = run.cfg().seed();
  spec.n_realizations = static_cast<int>(run.cfg().integer("n_realizations", 1000));
  run.resolved("n_realizations", spec.n_realizations);
  const std::string kind = run.cfg().get("disorder_kind", "both");
  const int threads = run.cfg().threads();
  if (kind == "diagonal" || kind == "both") {
    spec.kind = DisorderKind::Diagonal;
    detail::write_ensemble(run, p, em, spec, threads, "ensemble_diagonal");
  }
  if (kind == "offdiagonal" || kind == "both") {
    spec.kind = DisorderKind::OffDiagonal;
    detail::write_ensemble(run, p, em, spec, threads, "ensemble_offdiagonal");
  }
  if (kind != "diagonal" && kind != "offdiagonal" && kind != "both")
    throw ConfigError("key 'disorder_kind': expected diagonal, offdiagonal, or both");
}

// --- figure presets ------------------------------------------------------

inline void run_fig2(ExperimentRun& run) {
  ExperimentConfig cfg = run.cfg();
  detail::preset(cfg, {{"J2", "1.0"}, {"kappa", "1.2"}, {"g", "0.5"}, {"L", "40"},
                       {"unit_cell", "20"}, {"nk", "512"}});
  const int nk = static_cast<int>(cfg.integer("nk", 512));

  BathParams line = cfg.bath();
  line.J1 = 2.5 * line.J2;
  BathParams point = cfg.bath();
  point.J1 = 0.6 * point.J2;
  detail::record_bath(run, line);
  run.resolved("J1_linegap", line.J1);
  run.resolved("J1_pointgap", point.J1);

  CsvWriter pa = run.open("fig2_pbc_linegap.csv", {"k", "band", "re_E", "im_E"});
  detail::write_pbc(pa, line, nk);
  CsvWriter pc = run.open("fig2_pbc_pointgap.csv", {"k", "band", "re_E", "im_E"});
  detail::write_pbc(pc, point, nk);

  EmitterAttachment em;
  em.unit_cell = static_cast<int>(cfg.integer("unit_cell", line.L / 2));
  em.g = cfg.num("g", 0.5);
  em.gamma = line.kappa;
  detail::record_attachment(run, em);

  // bound-state markers for a detuning grid, both parameter sets
  CsvWriter markers = run.open("fig2_bound_markers.csv",
                               {"set", "delta0", "re_E", "im_E", "classification"});
  for (const auto& [name, p] : {std::pair<const char*, BathParams>{"linegap", line},
                                {"pointgap", point}}) {
    for (const double d0 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      EmitterAttachment e = em;
      e.delta0 = d0;
      if (auto root = bound_state_near(p, e, e.detuning()))
        markers.row(name, d0, root->E_b.real(), root->E_b.imag(),
                    to_string(root->classification));
    }
  }

  for (const Sublattice s : {Sublattice::A, Sublattice::B}) {
    EmitterAttachment e = em;
    e.sublattice = s;
    const Wavefunction chiral = chiral_bound_state_analytic(line, e);
    CsvWriter c = run.open(std::string("fig2_chiral_") + to_string(s) + ".csv",
                           {"j", "sublattice", "re_c", "im_c", "abs2"});
    detail::write_wavefunction(c, chiral);
    const cplx Eb{0.2 * point.J2, -0.4 * point.J2};
    const Wavefunction hidden = hidden_bound_state_analytic(point, e, Eb);
    CsvWriter h = run.open(std::string("fig2_hidden_") + to_string(s) + ".csv",
                           {"j", "sublattice", "re_c", "im_c", "abs2"});
    detail::write_wavefunction(h, hidden);
  }
}

inline void run_fig3(ExperimentRun& run) {
  ExperimentConfig cfg = run.cfg();
  detail::preset(cfg, {{"J1", "1.6"}, {"J2", "1.0"}, {"kappa", "1.2"},
                       {"g", "0.5"}, {"L", "20"}, {"unit_cell", "10"}});
  const BathParams p = cfg.bath();
  EmitterAttachment em = cfg.attachment();
  detail::record_bath(run, p);
  detail::record_attachment(run, em);

  CsvWriter obc = run.open("obc_spectrum.csv", {"index", "re_E", "im_E"});
  detail::write_obc(obc, build_bath(p).entries);

  CsvWriter energies = run.open("dressed_energies.csv",
                                {"delta0", "attach", "E", "re_Ed", "im_Ed", "in_gap"});
  for (const Sublattice s : {Sublattice::A, Sublattice::B}) {
    CsvWriter weights =
        run.open(std::string("dressed_weights_") + (s == Sublattice::A ? "A" : "B") +
                     ".csv",
                 {"delta0", "j", "sublattice", "abs2"});
    for (int i = -6; i <= 6; ++i) {
      const double d0 = 0.25 * i;
      EmitterAttachment e = em;
      e.sublattice = s;
      const auto all = dressed_state_poles(p, e, d0, e.g);
      // emitter-dominated branch: maximal |cbar_e|
      const auto* best = &all.front();
      for (const auto& r : all)
        if (std::abs(r.cbar_e) > std::abs(best->cbar_e)) best = &r;
      energies.row(d0, to_string(s), best->E, best->E_d.real(), best->E_d.imag(),
                   best->in_gap ? 1 : 0);
      for (int j = 1; j <= p.L; ++j)
        for (const Sublattice ps : {Sublattice::A, Sublattice::B})
          weights.row(d0, j, ps, std::norm(best->wavefunction.photon(j, ps)));
    }
  }
}

inline void run_fig4(ExperimentRun& run) {
  ExperimentConfig cfg = run.cfg();
  detail::preset(cfg, {{"J1", "1.6"}, {"J2", "1.0"}, {"kappa", "1.2"},
                       {"g", "0.5"}, {"L", "40"}, {"unit_cell", "20"},
                       {"delta0", "0"}});
  const BathParams p = cfg.bath();
  const EmitterAttachment em = cfg.attachment();
  detail::record_bath(run, p);
  detail::record_attachment(run, em);

  for (const Sublattice s : {Sublattice::A, Sublattice::B}) {
    CsvWriter csv = run.open(std::string("fig4_sweep_") + to_string(s) + ".csv",
                             {"gamma", "j", "sublattice", "abs2"});
    for (const double gamma : {0.4, 0.8, 1.0}) {
      EmitterAttachment e = em;
      e.sublattice = s;
      const DressedStateResult ds =
          dressed_state_numeric(p, e, e.delta0, gamma, e.g);
      for (int j = 1; j <= p.L; ++j)
        for (const Sublattice ps : {Sublattice::A, Sublattice::B})
          csv.row(gamma, j, ps, std::norm(ds.wavefunction.photon(j, ps)));
    }
  }
}

inline void run_fig5(ExperimentRun& run) {
  ExperimentConfig cfg = run.cfg();
  detail::preset(cfg, {{"J1", "1.2"}, {"J2", "1.0"}, {"kappa", "0.4"},
                       {"g", "0.4"}, {"L", "100"}, {"delta0", "0"},
                       {"j1", "45"}, {"j2", "55"}, {"t_max", "40"},
                       {"n_times", "401"}});
  const auto s = detail::two_emitter_setup(cfg);
  const Eigen::VectorXd times =
      detail::linspace(0.0, cfg.num("t_max", 40.0),
                       static_cast<int>(cfg.integer("n_times", 401)));
  detail::record_bath(run, s.params);
  detail::record_attachment(run, s.e1, "e1_");
  detail::record_attachment(run, s.e2, "e2_");

  struct Panel { const char* name; Sublattice a2; int excite; };
  const Panel panels[] = {{"a", Sublattice::A, 1},
                          {"b", Sublattice::A, 2},
                          {"c", Sublattice::B, 1},
                          {"d", Sublattice::B, 2}};
  for (const auto& panel : panels) {
    EmitterAttachment e1 = s.e1, e2 = s.e2;
    e2.sublattice = panel.a2;
    const Wavefunction psi0 = detail::emitter_excitation(s.params.L, panel.excite);
    const SystemMatrix sys = build_system(s.params, {e1, e2});
    const Trajectory traj = evolve(sys, psi0, times);
    CsvWriter csv = run.open(std::string("fig5_") + panel.name + ".csv",
                             {"t", "C_e1", "C_e2", "norm", "p_t"});
    detail::write_trajectory(csv, traj);

    const Eigen::MatrixXcd ce =
        emitter_amplitudes_resolvent(s.params, e1, e2, psi0, times);
    CsvWriter res = run.open(std::string("fig5_") + panel.name + "_resolvent.csv",
                             {"t", "C_e1", "C_e2"});
    for (int i = 0; i < times.size(); ++i)
      res.row(times(i), std::norm(ce(0, i)), std::norm(ce(1, i)));
  }
}

inline void run_figS3(ExperimentRun& run) {
  ExperimentConfig cfg = run.cfg();
  detail::preset(cfg, {{"J1", "1.6"}, {"J2", "1.0"}, {"kappa", "1.2"},
                       {"g", "0.5"}, {"L", "40"}, {"unit_cell", "20"},
                       {"delta0", "0"}, {"n_realizations", "1000"}});
  const BathParams p = cfg.bath();
  const EmitterAttachment em = cfg.attachment();
  detail::record_bath(run, p);
  detail::record_attachment(run, em);
  DisorderSpec spec;
  spec.seed = cfg.seed();
  spec.n_realizations = static_cast<int>(cfg.integer("n_realizations", 1000));
  run.resolved("n_realizations", spec.n_realizations);
  const int threads = cfg.threads();
  spec.kind = DisorderKind::Diagonal;
  detail::write_ensemble(run, p, em, spec, threads, "figS3_diagonal");
  spec.kind = DisorderKind::OffDiagonal;
  detail::write_ensemble(run, p, em, spec, threads, "figS3_offdiagonal");
}

/// Dispatch one experiment; throws ConfigError / Error subclasses on
/// failure. On success all data files plus manifest.json exist under the
/// configured output prefix.
inline void run_experiment(const ExperimentConfig& cfg) {
  const std::string exp = cfg.experiment();
  ExperimentRun run(cfg);
  if (exp == "spectrum") run_spectrum(run);
  else if (exp == "gbz") run_gbz(run);
  else if (exp == "bound") run_bound(run);
  else if (exp == "dressed") run_dressed(run);
  else if (exp == "dynamics") run_dynamics(run);
  else if (exp == "disorder") run_disorder(run);
  else if (exp == "fig2") run_fig2(run);
  else if (exp == "fig3") run_fig3(run);
  else if (exp == "fig4") run_fig4(run);
  else if (exp == "fig5") run_fig5(run);
  else if (exp == "figS3") run_figS3(run);
  run.finish();
}

}  // namespace nhbath
