// Copyright 2026 The onestep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// onestep: command-line front end for the one-step gate library.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "onestep/onestep.hpp"
#include "presets.hpp"

namespace fs = std::filesystem;
using namespace onestep;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitNonConvergence = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kUnknownName:
    case ErrorKind::kInvalidParameter:
      return kExitConfig;
    case ErrorKind::kNonConvergence:
      return kExitNonConvergence;
    default:
      return kExitNumeric;
  }
}

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string format;  // empty: csv for tables, json for reports
  std::string gate;
};

std::string load_config_text(const std::string& ref) {
  if (ref.empty()) return "{}";
  for (const auto& [name, body] : onestep_cli::kPresets)
    if (name == ref) return std::string(body);
  if (ref.rfind("preset:", 0) == 0) fail(ErrorKind::kConfig, "unknown preset '" + ref + "'");
  return read_file(ref);
}

struct Run {
  RunConfig config;
  std::string command;
  std::string format;
  std::string gate;
  fs::path dir;

  fs::path file(const std::string& stem, const std::string& ext) const {
    return dir / (config.output.prefix + stem + "." + ext);
  }
};

Run resolve(const std::string& command, const Options& o) {
  Run run;
  run.command = command;
  run.config = parse_run_config(load_config_text(o.config));
  if (o.seed) run.config.seed = *o.seed;
  if (o.threads) run.config.threads = *o.threads;
  run.format = o.format;
  run.gate = o.gate;
  std::string dir = o.out;
  if (dir.empty()) dir = run.config.output.dir;
  if (dir.empty())
    if (const char* env = std::getenv("ONESTEP_OUT_DIR")) dir = env;
  if (dir.empty()) dir = ".";
  run.dir = dir;
  std::error_code ec;
  fs::create_directories(run.dir, ec);
  if (ec) fail(ErrorKind::kConfig, "cannot create output directory '" + dir + "'");
  return run;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json invariants_json(const MakhlinInvariants& g) {
  return Json{{"G1", complex_json(g.g1)}, {"G2", complex_json(g.g2)}};
}

Json degeneracy_json(const DegeneracyReport& d) {
  return Json{{"classification", std::string(to_string(d.classification))},
              {"min_gap", d.min_gap},
              {"lower_gap", d.lower_gap},
              {"upper_gap", d.upper_gap},
              {"tolerance", d.tolerance}};
}

Json report_json(const GateReport& r) {
  return Json{{"target", r.target},
              {"raw_distance", r.raw_distance},
              {"distance", r.distance},
              {"global_phase", r.global_phase},
              {"fidelity", r.fidelity},
              {"invariants", invariants_json(r.invariants)},
              {"target_invariants", invariants_json(r.target_invariants)},
              {"invariant_gap", r.invariant_gap},
              {"equivalent", r.equivalent},
              {"purity_loss", r.purity_loss},
              {"decay_rate", r.decay_rate},
              {"degeneracy", degeneracy_json(r.degeneracy)}};
}

Json envelope(const Run& run, Json results) {
  Json j;
  j["tool"] = "onestep";
  j["version"] = std::string(kVersion);
  j["command"] = run.command;
  j["seed"] = run.config.seed;
  j["config"] = to_json(run.config);
  j["results"] = std::move(results);
  return j;
}

void write_json(const fs::path& path, const Json& j) {
  write_file(path.string(), j.dump(2) + "\n");
  std::cout << "wrote " << path.string() << "\n";
}

void write_csv(const fs::path& path, const CsvTable& t) {
  write_file(path.string(), to_csv(t));
  std::cout << "wrote " << path.string() << "\n";
}

PropagationOptions propagation(const RunConfig& c) {
  PropagationOptions opt;
  opt.samples = c.time.samples;
  opt.dt = c.time.dt;  // 0: automatic
  opt.verify_halving = c.time.verify_halving;
  return opt;
}

// ---------------------------------------------------------------------------

int cmd_spectrum(const Run& run) {
  const RunConfig& c = run.config;
  const EigenSystem es = eigensystem(build_hamiltonian(c.params));
  const DegeneracyReport d = classify_degeneracy(es, c.degeneracy_tol);
  std::array<double, 4> e = es.energies;
  for (double& x : e) x /= kEnergyUnit;
  if (run.format == "csv") {
    CsvTable t;
    t.header = {"n", "m", "E_n", "E_m", "omega_nm"};
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m)
        t.rows.push_back({std::to_string(n + 1), std::to_string(m + 1), format_double(e[n]),
                          format_double(e[m]), format_double(e[n] - e[m])});
    t.comments.push_back("degeneracy " + std::string(to_string(d.classification)));
    write_csv(run.file("spectrum", "csv"), t);
  } else {
    Json gaps = Json::array();
    for (int n = 0; n < 4; ++n) {
      Json row = Json::array();
      for (int m = 0; m < 4; ++m) row.push_back(e[n] - e[m]);
      gaps.push_back(row);
    }
    write_json(run.file("spectrum", "json"),
               envelope(run, Json{{"energy_unit", "pi/t0"},
                                  {"energies", e},
                                  {"gaps", gaps},
                                  {"degeneracy", degeneracy_json(d)}}));
  }
  std::cout << "energies (pi/t0): " << format_double(e[0]) << " " << format_double(e[1]) << " "
            << format_double(e[2]) << " " << format_double(e[3])
            << "\ndegeneracy: " << to_string(d.classification) << "\n";
  return 0;
}

CsvTable purity_table(const PurityTrace& tr) {
  CsvTable t;
  t.header = {"t", "P"};
  for (int j = 1; j <= 16; ++j) t.header.push_back("P" + std::to_string(j));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<std::string> row{format_double(tr.times[i]), format_double(tr.purity[i])};
    for (double p : tr.per_state[i]) row.push_back(format_double(p));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json purity_summary(const PurityTrace& tr, double duration) {
  return Json{{"duration", duration},
              {"initial_slope", tr.initial_slope},
              {"decay_rate", tr.decay_rate()},
              {"purity_loss", tr.final_loss()}};
}

/// Propagates and writes the trace; on failure the valid prefix is written
/// with an error marker and the error is rethrown.
PurityTrace run_trace(const Run& run, const std::string& stem,
                      const std::vector<std::pair<Mat4, double>>& segments,
                      const PropagationOptions& opt) {
  PurityTrace tr;
  try {
    sequence_purity_into(segments, run.config.noise, opt, tr);
  } catch (const Error& e) {
    CsvTable t = purity_table(tr);
    t.comments.push_back(std::string("error: ") + e.what());
    write_csv(run.file(stem, "csv"), t);
    throw;
  }
  write_csv(run.file(stem, "csv"), purity_table(tr));
  return tr;
}

int cmd_purity(const Run& run) {
  const RunConfig& c = run.config;
  const PropagationOptions opt = propagation(c);
  Json results;
  PurityTrace one, five;
  double one_duration = 0.0, five_duration = 0.0;
  if (c.protocol == "onestep" || c.protocol == "compare") {
    one_duration = c.time.t_final.value_or(c.params.t0);
    one = run_trace(run, "purity_onestep", {{build_hamiltonian(c.params), one_duration}}, opt);
    results["onestep"] = purity_summary(one, one_duration);
  }
  if (c.protocol == "fivestep" || c.protocol == "compare") {
    const double amplitude =
        c.amplitude_bound.value_or(spectral_norm(build_hamiltonian(c.params)));
    const PulseSequence seq = standard_cnot_protocol(amplitude);
    five_duration = seq.total_duration();
    five = run_trace(run, "purity_fivestep", segments_of(seq), opt);
    Json s = purity_summary(five, five_duration);
    s["amplitude_bound"] = amplitude;
    s["amplitude_unit"] = "rad per unit time";
    results["fivestep"] = s;
  }
  if (c.protocol == "compare") {
    CsvTable t;
    t.header = {"protocol", "t", "P"};
    for (std::size_t i = 0; i < one.times.size(); ++i)
      t.rows.push_back({"onestep", format_double(one.times[i]), format_double(one.purity[i])});
    for (std::size_t i = 0; i < five.times.size(); ++i)
      t.rows.push_back({"fivestep", format_double(five.times[i]), format_double(five.purity[i])});
    write_csv(run.file("purity_compare", "csv"), t);
    results["loss_ratio_fivestep_over_onestep"] = five.final_loss() / one.final_loss();
    results["duration_ratio_onestep_over_fivestep"] = one_duration / five_duration;
  }
  write_json(run.file("purity_summary", "json"), envelope(run, results));
  std::cout << results.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const Run& run) {
  const RunConfig& c = run.config;
  SweepGrid g = c.sweep;
  g.base = c.params;
  const SweepResult r = sweep(g, c.noise, c.threads);
  const LandscapeSummary s = summarize_landscape(r);
  CsvTable t;
  t.header = {"param1", "param2", "feasible", "dPdt0", "degeneracy_class",
              "min_gap", "double_gap", "reason"};
  for (const auto& cell : r.cells)
    t.rows.push_back({format_double(cell.x), format_double(cell.y), cell.feasible ? "1" : "0",
                      format_double(cell.decay_rate),
                      cell.feasible ? std::string(to_string(cell.classification)) : "",
                      format_double(cell.min_gap), format_double(cell.double_gap), cell.reason});
  if (run.format != "json") write_csv(run.file("sweep", "csv"), t);
  auto cells_json = [&](const std::vector<std::size_t>& idx) {
    Json a = Json::array();
    for (std::size_t k : idx) a.push_back(Json::array({r.cells[k].x, r.cells[k].y}));
    return a;
  };
  Json results{{"param1", std::string(control_name(g.x.control))},
               {"param2", std::string(control_name(g.y.control))},
               {"dPdt0", "|dP/dt| at t=0, per unit time"},
               {"classification_tolerance", g.effective_tol()},
               {"min_rate", s.min_rate},
               {"argmin_cells", cells_json(s.argmin_cells)},
               {"min_double_gap_cells", cells_json(s.min_double_cells)},
               {"argmin_in_min_double_gap_set", s.argmin_in_double_set},
               {"single_median", s.single_median},
               {"none_median", s.none_median},
               {"single_count", s.single_count},
               {"none_count", s.none_count}};
  if (run.format == "json") {
    Json rows = Json::array();
    for (const auto& row : t.rows) rows.push_back(row);
    results["cells"] = Json{{"header", t.header}, {"rows", rows}};
  }
  write_json(run.file("sweep_summary", "json"), envelope(run, results));
  return 0;
}

int cmd_optimize(const Run& run) {
  const OptimizeResult r = optimize(search_spec(run.config));
  Json results{{"converged", r.converged},
               {"objective", r.evaluation.objective},
               {"match_error", r.evaluation.match_error},
               {"degeneracy_violation", r.evaluation.violation},
               {"best", to_json(r.best)},
               {"report", report_json(r.report)},
               {"best_by_restart", r.best_by_restart},
               {"restart_objectives", r.restart_objectives},
               {"evaluations", r.evaluations}};
  write_json(run.file("optimize", "json"), envelope(run, results));
  std::cout << "objective " << format_double(r.evaluation.objective) << ", match error "
            << format_double(r.evaluation.match_error)
            << (r.converged ? ", converged\n" : ", NOT converged\n");
  return r.converged ? 0 : kExitNonConvergence;
}

int cmd_invariants(const Run& run) {
  const Mat4 u = run.gate.empty() ? evolution(run.config.params) : target_gate(run.gate).matrix;
  const MakhlinInvariants g = makhlin_invariants(u);
  Json results = invariants_json(g);
  results["source"] = run.gate.empty() ? "evolution" : run.gate;
  if (run.format == "csv") {
    CsvTable t;
    t.header = {"G1_re", "G1_im", "G2_re", "G2_im"};
    t.rows.push_back({format_double(g.g1.real()), format_double(g.g1.imag()),
                      format_double(g.g2.real()), format_double(g.g2.imag())});
    write_csv(run.file("invariants", "csv"), t);
  } else {
    write_json(run.file("invariants", "json"), envelope(run, results));
  }
  std::cout << "G1 = " << format_double(g.g1.real()) << " + " << format_double(g.g1.imag())
            << "i, G2 = " << format_double(g.g2.real()) << " + " << format_double(g.g2.imag())
            << "i\n";
  return 0;
}

int cmd_sensitivity(const Run& run) {
  const RunConfig& c = run.config;
  const SensitivityReport r = sensitivity(c.params, c.noise, c.sensitivity.budget, c.sensitivity.step);
  Json controls = Json::array();
  for (const auto& s : r.controls)
    controls.push_back(Json{{"control", std::string(control_name(s.control))},
                            {"value", s.value},
                            {"linear", s.linear},
                            {"quadratic", s.quadratic},
                            {"radius", s.radius},
                            {"loss_linear", s.loss_linear},
                            {"loss_quadratic", s.loss_quadratic}});
  Json results{{"metric", "state-averaged infidelity against the undetuned pulse"},
               {"budget", r.budget},
               {"step", r.step},
               {"radius", r.radius},
               {"limiting_control", std::string(control_name(r.limiting))},
               {"joint_quadratic", r.joint_quadratic},
               {"joint_radius", r.joint_radius},
               {"base_purity_loss", r.base_loss},
               {"non_optimal", r.non_optimal},
               {"controls", controls}};
  write_json(run.file("sensitivity", "json"), envelope(run, results));
  std::cout << "tolerance radius " << format_double(100 * r.radius) << "% ("
            << control_name(r.limiting) << ")\n";
  return r.non_optimal ? kExitNumeric : 0;
}

int cmd_calibrate(const Run& run) {
  const Calibration cal = calibrate(run.config.device);
  const RelaxationCheck check = relax_time_check(cal.delta, cal.noise);
  const HamiltonianParams b = onestep_bgate().params;
  const CnotClassPulse cc = cnot_class_pulse(std::max(cal.coupling, cal.delta), cal.delta);
  PropagationOptions opt;
  const GateReport rb = report(b, target_gate("B"), cal.noise, b.t0, opt);
  const GateReport rc = report(cc.params, target_gate("CNOT"), cal.noise, cc.params.t0, opt);
  const HamiltonianParams cn = onestep_cnot(true).params;
  const GateReport rn = report(cn, target_gate("CNOT"), cal.noise, cn.t0, opt);
  Json results{
      {"alpha", cal.noise.alpha},
      {"noise", to_json(cal.noise)},
      {"time_unit_ns", cal.time_unit_ns},
      {"delta", cal.delta},
      {"coupling", cal.coupling},
      {"t1_inverse_per_unit_time", cal.t1_inverse},
      {"weak_coupling_warning", cal.weak_coupling_warning},
      {"relaxation_check",
       Json{{"fitted_rate", check.fitted_rate},
            {"reference_rate", check.analytic_rate},
            {"ratio", check.ratio},
            {"normalization", RelaxationCheck::kNormalization},
            {"fitted_t1_inverse_ghz", check.fitted_rate / cal.time_unit_ns}}},
      {"bgate", Json{{"params", to_json(b)},
                     {"duration_ns", b.t0 * cal.time_unit_ns},
                     {"purity_loss", rb.purity_loss}}},
      {"cnot", Json{{"params", to_json(cn)},
                    {"duration_ns", cn.t0 * cal.time_unit_ns},
                    {"purity_loss", rn.purity_loss}}},
      {"cnot_class", Json{{"params", to_json(cc.params)},
                          {"duration_ns", cc.params.t0 * cal.time_unit_ns},
                          {"invariants", invariants_json(cc.invariants)},
                          {"purity_loss", rc.purity_loss}}}};
  write_json(run.file("calibration", "json"), envelope(run, results));
  std::cout << "alpha " << format_double(cal.noise.alpha) << ", B loss "
            << format_double(rb.purity_loss) << ", CNOT loss " << format_double(rn.purity_loss)
            << ", CNOT-class loss "
            << format_double(rc.purity_loss) << "\n";
  if (cal.weak_coupling_warning) std::cerr << "warning: alpha above the weak-coupling range\n";
  return 0;
}

int cmd_report(const Run& run) {
  const RunConfig& c = run.config;
  const GateTarget target = target_gate(c.target);
  const GateReport r = report(c.params, target, c.noise, c.time.t_final.value_or(c.params.t0),
                              propagation(c));
  write_json(run.file("report", "json"),
             envelope(run, Json{{"params", to_json(c.params)}, {"report", report_json(r)}}));
  std::cout << "distance " << format_double(r.distance) << ", purity loss "
            << format_double(r.purity_loss) << ", |dP/dt|0 " << format_double(r.decay_rate)
            << "\n";
  return 0;
}

int dispatch(const std::string& command, const Options& o) {
  Run run = resolve(command, o);
  std::string cmd = command;
  if (cmd == "run") {
    cmd = run.config.command;
    if (cmd.empty()) fail(ErrorKind::kConfig, "config has no 'command' to run");
    run.command = cmd;
  }
  if (cmd == "spectrum") return cmd_spectrum(run);
  if (cmd == "purity") return cmd_purity(run);
  if (cmd == "sweep") return cmd_sweep(run);
  if (cmd == "optimize") return cmd_optimize(run);
  if (cmd == "invariants") return cmd_invariants(run);
  if (cmd == "sensitivity") return cmd_sensitivity(run);
  if (cmd == "calibrate") return cmd_calibrate(run);
  if (cmd == "report") return cmd_report(run);
  fail(ErrorKind::kConfig, "unknown command '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"onestep: design and benchmark one-step two-qubit gates"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "eigenvalues, gaps and degeneracy class"},
      {"purity", "gate purity trace of the one-step and/or five-step protocol"},
      {"sweep", "purity-decay landscape over two controls"},
      {"optimize", "degeneracy-constrained parameter search"},
      {"invariants", "local invariants of an evolution or a named gate"},
      {"sensitivity", "detuning tolerance around a construction"},
      {"calibrate", "noise model from device parameters"},
      {"report", "distance, invariants and purity of one pulse"},
      {"run", "run the command named in the config"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "config file or preset:NAME");
    sub->add_option("--out", o.out, "output directory (default $ONESTEP_OUT_DIR or .)");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->add_option("--format", o.format, "main table format")->check(CLI::IsMember({"csv", "json"}));
    if (std::string(name) == "invariants") sub->add_option("--gate", o.gate, "named target gate");
    sub->callback([&chosen, name = std::string(name)] { chosen = name; });
  }
  app.add_subcommand("presets", "list bundled configs")->callback([] {
    for (const auto& [name, body] : onestep_cli::kPresets) std::cout << name << "\n";
    std::exit(0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  try {
    return dispatch(chosen, o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
