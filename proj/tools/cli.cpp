/*
 * Copyright 2026 The esfts Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "esfts/core.hpp"
#include "esfts/dlmi.hpp"
#include "esfts/examples.hpp"
#include "esfts/frequency.hpp"
#include "esfts/geometry.hpp"
#include "esfts/io.hpp"
#include "esfts/sim.hpp"

namespace esfts::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

struct RunConfig {
  std::string problem_path;
  std::string example;
  int grid_n = 0;  // 0: the example's own resolution, 100 for files
  double scan_step = 0.01;
  double ka_max = 10.0;
  std::optional<double> ka;     // skip the scan
  std::optional<double> k;      // controller split, alpha = ka / k
  std::optional<double> delta;  // overrides the problem's Delta
  double omega = 0.0;           // 0: use omega_2nd
  int runs = 5;
  std::uint64_t seed = 1;
  bool flip_b = false;
  int jobs = 1;
  std::vector<double> x0;
  std::string out = ".";
  std::string dump_example;
};

struct Loaded {
  std::string label;
  FtsProblem problem;
  TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 2);
};

struct Pipeline {
  Loaded in;
  double ka = 0.0;
  double k = 0.0;
  double alpha = 0.0;
  std::optional<ShrunkSpec> spec;
  std::optional<SynthesisResult> synthesis;
  std::optional<BoundReport> bound;
  double omega = 0.0;
};


int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kSynthesisFailed:
    case ErrorKind::kSolver:
      return kExitInfeasible;
    case ErrorKind::kDivergence:
      return kExitVerification;
    default:
      return kExitValidation;
  }
}

Loaded load(const RunConfig& cfg) {
  if (cfg.problem_path.empty() == cfg.example.empty()) {
    throw Error(ErrorKind::kConfig, "exactly one of --problem or --example is required");
  }
  Loaded in;
  int intervals = 100;
  if (!cfg.example.empty()) {
    const BuiltinExample ex = builtin_example(cfg.example);
    in.label = ex.name;
    in.problem = ex.problem;
    intervals = ex.grid_intervals;
  } else {
    in.label = fs::path(cfg.problem_path).stem().string();
    in.problem = io::load_problem(cfg.problem_path);
  }
  if (cfg.grid_n != 0) intervals = cfg.grid_n;
  if (cfg.delta) in.problem.Delta = *cfg.delta;
  if (cfg.flip_b) in.problem = negate_input(in.problem);
  in.grid = TimeGrid::uniform(in.problem.t0, in.problem.T, intervals);
  in.problem = validate_problem(in.problem, in.grid);
  return in;
}

void split_gain(const RunConfig& cfg, Pipeline& pl) {
  if (cfg.k) {
    if (!(*cfg.k > 0.0)) throw Error(ErrorKind::kDomain, "--k must be positive");
    pl.k = *cfg.k;
    pl.alpha = pl.ka / pl.k;
  } else {
    pl.k = pl.alpha = std::sqrt(pl.ka);
  }
}

Pipeline synthesize(const RunConfig& cfg, std::ostream& out) {
  Pipeline pl;
  pl.in = load(cfg);
  if (cfg.ka) {
    if (!(*cfg.ka >= 0.0)) throw Error(ErrorKind::kDomain, "--ka must be non-negative");
    pl.ka = *cfg.ka;
    try {
      pl.spec = shrunk_gamma(pl.in.problem, pl.in.grid);
    } catch (const Error& e) {
      out << "note: no shrunk target (" << e.what() << "); using ka as given\n";
    }
  } else {
    pl.spec = shrunk_gamma(pl.in.problem, pl.in.grid);
    ScanOptions opts;
    opts.step = cfg.scan_step;
    opts.ka_max = cfg.ka_max;
    opts.jobs = cfg.jobs;
    pl.synthesis = scan_gain(pl.in.problem, *pl.spec, pl.in.grid, opts);
    pl.ka = pl.synthesis->ka;
  }
  split_gain(cfg, pl);
  if (pl.synthesis && cfg.k) {
    pl.synthesis->gain = extract_gain(pl.in.problem, pl.ka, pl.in.grid,
                                      std::pair{pl.k, pl.alpha});
  }
  out << pl.in.label << ": ka = " << pl.ka << " (k = " << pl.k
      << ", alpha = " << pl.alpha << ")";
  if (pl.synthesis) out << ", margin = " << pl.synthesis->margin;
  out << '\n';
  return pl;
}

void bound(const RunConfig& cfg, Pipeline& pl, std::ostream& out) {
  // A zero gain has no bound; an explicit frequency is all that is needed.
  if (cfg.omega > 0.0 && (pl.k == 0.0 || pl.alpha == 0.0)) {
    pl.omega = cfg.omega;
    return;
  }
  pl.bound = compute_bound(pl.in.problem, pl.ka, pl.k, pl.alpha, pl.in.grid);
  const FrequencyBound& b = pl.bound->bound;
  out << pl.in.label << ": kappa = " << b.kappa << ", eta = " << b.eta
      << ", omega_2nd = " << b.omega_2nd << ", omega_1st = " << b.omega_1st
      << '\n';
  for (const auto& w : pl.bound->warnings) out << "warning: " << w << '\n';
  pl.omega = cfg.omega > 0.0 ? cfg.omega : b.omega_2nd;
}

ControllerParams controller(const Pipeline& pl) {
  ControllerParams c;
  c.k = pl.k;
  c.alpha = pl.alpha;
  c.omega = pl.omega;
  return c;
}

json base_report(const std::string& command, const Pipeline& pl) {
  json r;
  r["command"] = command;
  r["input"] = {{"label", pl.in.label},
                {"grid_intervals", pl.in.grid.intervals()},
                {"problem", io::problem_to_json(pl.in.problem)}};
  if (pl.synthesis) {
    r["synthesis"] = io::synthesis_to_json(*pl.synthesis);
  } else {
    r["synthesis"] = {{"ka", pl.ka}, {"k", pl.k}, {"alpha", pl.alpha}, {"given", true}};
  }
  if (pl.bound) r["bound"] = io::bound_to_json(*pl.bound);
  return r;
}

json metadata() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return {{"generated_at", ts.str()}, {"tool", "esfts"}};
}

void write_report(const RunConfig& cfg, json report, std::ostream& out) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create '" + dir.string() + "': " + ec.message());
  report["metadata"] = metadata();
  io::write_json(dir / "report.json", report);
  out << "wrote " << (dir / "report.json").string() << '\n';
}

/// Closed-loop, averaged and open-loop histories from x0 plus the ellipse
/// sections at both ends of the horizon.
RunMetrics write_trajectories(const RunConfig& cfg, const Pipeline& pl,
                              const Vector& x0) {
  const FtsProblem& p = pl.in.problem;
  const fs::path dir(cfg.out);
  const Trajectory x = simulate_closed_loop(p, controller(pl), x0);
  const Trajectory xbar = simulate_averaged(p, pl.ka, x0, x.step());
  const MatrixSchedule* gbar = pl.spec ? &pl.spec->GammaBar : nullptr;
  const RunMetrics m = trajectory_metrics(x, xbar, p, gbar);
  io::write_trajectory_csv(dir / "traj_closed_loop.csv", decimate(x), p.Gamma, "v");
  io::write_trajectory_csv(dir / "traj_averaged.csv", decimate(xbar),
                           gbar ? *gbar : p.Gamma, "vbar");
  try {
    const Trajectory open = simulate_open_loop(p, x0, x.step());
    io::write_trajectory_csv(dir / "traj_open_loop.csv", decimate(open), p.Gamma, "v");
  } catch (const DivergenceError&) {
    // An unstable open loop is expected; its history is simply not plotted.
  }
  for (const auto& [tag, t] : {std::pair{"t0", p.t0}, std::pair{"tf", p.tf()}}) {
    std::vector<std::pair<std::string, Matrix>> curves = {
        {"Gamma", p.gamma(t)}, {"R", p.R}};
    if (gbar) curves.insert(curves.begin() + 1, {"GammaBar", gbar->value(t)});
    io::write_ellipse_csv(dir / (std::string("plotdata_") + tag + ".csv"), curves);
  }
  return m;
}

Vector initial_state(const RunConfig& cfg, const FtsProblem& p) {
  if (cfg.x0.empty()) return sample_initial_state(p.R, cfg.seed, 0);
  if (static_cast<int>(cfg.x0.size()) != p.n) {
    throw Error(ErrorKind::kDimension, "--x0 needs " + std::to_string(p.n) + " entries");
  }
  return Eigen::Map<const Vector>(cfg.x0.data(), p.n);
}

void print_metrics(std::ostream& os, const RunMetrics& m) {
  os << "max x'Gx = " << m.max_v << (m.fts_ok ? " (ok)" : " (VIOLATED)")
     << ", max |x - xbar| = " << m.max_dist << (m.dist_ok ? " (ok)" : " (VIOLATED)");
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  Pipeline pl = synthesize(cfg, out);
  write_report(cfg, base_report("synth", pl), out);
  return kExitOk;
}

int cmd_bound(const RunConfig& cfg, std::ostream& out) {
  Pipeline pl = synthesize(cfg, out);
  bound(cfg, pl, out);
  write_report(cfg, base_report("bound", pl), out);
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  Pipeline pl = synthesize(cfg, out);
  bound(cfg, pl, out);
  const Vector x0 = initial_state(cfg, pl.in.problem);
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  const RunMetrics m = write_trajectories(cfg, pl, x0);
  out << pl.in.label << ": omega = " << pl.omega << ", ";
  print_metrics(out, m);
  out << '\n';
  json r = base_report("simulate", pl);
  r["simulation"] = {{"omega", pl.omega},
                     {"x0", std::vector<double>(x0.data(), x0.data() + x0.size())},
                     {"metrics", io::metrics_to_json(m)}};
  write_report(cfg, std::move(r), out);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Pipeline pl = synthesize(cfg, out);
  bound(cfg, pl, out);
  if (cfg.runs < 1) throw Error(ErrorKind::kDomain, "--runs must be at least 1");
  VerifyOptions opts;
  opts.jobs = cfg.jobs;
  if (!cfg.x0.empty()) opts.forced_x0 = initial_state(cfg, pl.in.problem);
  if (pl.spec) opts.gamma_bar = &pl.spec->GammaBar;
  const VerificationReport rep = monte_carlo_verify(
      pl.in.problem, controller(pl), pl.ka, cfg.runs, cfg.seed, opts);

  out << pl.in.label << ": omega = " << pl.omega << ", nominal "
      << rep.nominal.passes << "/" << rep.nominal.runs << ", sign-flipped "
      << rep.sign_flip.passes << "/" << rep.sign_flip.runs << '\n';

  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  const RunRecord& worst = rep.nominal.records.at(rep.nominal.worst_run);
  if (!worst.diverged) write_trajectories(cfg, pl, worst.x0);

  json r = base_report("verify", pl);
  r["verification"] = io::verification_to_json(rep);
  write_report(cfg, std::move(r), out);

  if (rep.passed()) return kExitOk;
  for (const SuiteSummary* s : {&rep.nominal, &rep.sign_flip}) {
    for (const RunRecord& rec : s->records) {
      if (rec.passed()) continue;
      err << "verification failed (" << (s == &rep.nominal ? "nominal" : "sign-flipped")
          << " run " << rec.index << "): ";
      if (rec.diverged) {
        err << rec.failure;
      } else {
        print_metrics(err, rec.metrics);
      }
      err << '\n';
      return kExitVerification;
    }
  }
  return kExitVerification;
}

int cmd_demo(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names = builtin_example_names();
  if (!cfg.example.empty()) names = {cfg.example};
  int worst = kExitOk;
  for (const auto& name : names) {
    RunConfig sub = cfg;
    sub.example = name;
    sub.problem_path.clear();
    sub.out = (fs::path(cfg.out) / name).string();
    out << "== " << name << '\n';
    int code = kExitOk;
    try {
      code = cmd_verify(sub, out, err);
    } catch (const Error& e) {
      err << name << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
      code = exit_code_for(e.kind());
    }
    worst = std::max(worst, code);
  }
  return worst;
}

int dump_example(const RunConfig& cfg, std::ostream& out) {
  const BuiltinExample ex = builtin_example(cfg.dump_example);
  const json j = io::problem_to_json(ex.problem);
  if (cfg.out == "-") {
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  const fs::path path = fs::path(cfg.out) / (ex.name + ".json");
  io::write_json(path, j);
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

void add_common(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--problem", cfg.problem_path, "Problem JSON file");
  sub.add_option("--example", cfg.example, "Builtin example")
      ->check(CLI::IsMember(builtin_example_names()));
  sub.add_option("--grid-n", cfg.grid_n, "Grid sub-intervals")->check(CLI::Range(2, 1000000));
  sub.add_option("--scan-step", cfg.scan_step, "ka scan step")->check(CLI::PositiveNumber);
  sub.add_option("--ka-max", cfg.ka_max, "Largest ka scanned")->check(CLI::NonNegativeNumber);
  sub.add_option("--ka", cfg.ka, "Use this ka instead of scanning");
  sub.add_option("--k", cfg.k, "Controller gain k (alpha = ka / k)");
  sub.add_option("--delta", cfg.delta, "Override the tube radius Delta");
  sub.add_option("--omega", cfg.omega, "Dither frequency [rad/s]")->check(CLI::NonNegativeNumber);
  sub.add_option("--runs", cfg.runs, "Monte Carlo runs");
  sub.add_option("--seed", cfg.seed, "Random seed");
  sub.add_flag("--flip-b", cfg.flip_b, "Replace B by -B");
  sub.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 256));
  sub.add_option("--x0", cfg.x0, "Initial state, comma separated")->delimiter(',');
  sub.add_option("--out", cfg.out, "Output directory");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Extremum-seeking finite-time stabilization of LTV systems", "esfts"};
  RunConfig cfg;
  app.require_subcommand(0, 1);
  app.add_option("--dump-example", cfg.dump_example, "Write a builtin example as JSON")
      ->check(CLI::IsMember(builtin_example_names()));
  app.add_option("--out", cfg.out, "Output directory ('-' for stdout)");

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"synth", "Synthesize the gain product ka"},
      {"bound", "Synthesize and compute the minimum dither frequency"},
      {"simulate", "Simulate one closed-loop run and write trajectories"},
      {"verify", "Monte Carlo verification at omega_2nd (or --omega)"},
      {"demo", "Verify the builtin examples"},
  };
  std::vector<CLI::App*> handles;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(*sub, cfg);
    handles.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (!cfg.dump_example.empty()) return dump_example(cfg, out);
    if (handles[0]->parsed()) return cmd_synth(cfg, out);
    if (handles[1]->parsed()) return cmd_bound(cfg, out);
    if (handles[2]->parsed()) return cmd_simulate(cfg, out);
    if (handles[3]->parsed()) return cmd_verify(cfg, out, err);
    if (handles[4]->parsed()) return cmd_demo(cfg, out, err);
    out << app.help();
    return kExitValidation;
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace esfts::cli
