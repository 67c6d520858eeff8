// Copyright 2026 The dsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "dsest/errors.h"
#include "dsest/evaluate.h"
#include "dsest/network_model.h"
#include "dsest/protocols.h"
#include "dsest/units.h"
#include "dsest/validation.h"

namespace dsest {
namespace {

constexpr double kFigureH = 0.5;
constexpr double kFigureSigmaQ2 = 6.0;

struct GlobalFlags {
  std::string units = "bits";
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 42;
};

struct ModelFlags {
  double h = 0.0;
  double sigma_x2 = 0.0;
  std::optional<double> sigma_q2;
  std::optional<double> distortion;
  bool no_outer = false;
  bool no_exact_leakage = false;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string FlagName(const std::string& field) {
  std::string flag = "--" + field;
  for (char& c : flag) {
    if (c == '_') c = '-';
  }
  return flag;
}

void AddModelFlags(CLI::App* cmd, ModelFlags* f, bool model_required) {
  auto* h = cmd->add_option("--h", f->h, "Interference coefficient (> 0)");
  auto* s =
      cmd->add_option("--sigma-x2", f->sigma_x2, "State variance (> 0)");
  if (model_required) {
    h->required();
    s->required();
  }
  auto* q = cmd->add_option("--sigma-q2", f->sigma_q2,
                            "Test-channel noise variance (>= 0; rates need > 0)");
  auto* d = cmd->add_option("--distortion", f->distortion,
                            "Target distortion in [d_min, d_max]");
  q->excludes(d);
  cmd->add_flag("--no-outer", f->no_outer, "Skip the outer-bound columns");
  cmd->add_flag("--no-exact-leakage", f->no_exact_leakage,
                "Skip the leakage_exact column");
}

Units ResolveUnits(const GlobalFlags& g) {
  Units u;
  if (!ParseUnits(g.units, &u)) {
    throw InvalidArgumentError("units", "must be bits or nats");
  }
  return u;
}

// Resolves --sigma-q2 / --distortion into sigma_q2 for the given model.
double ResolveSigmaQ2(const ModelParams& params, const ModelFlags& f) {
  if (f.distortion) return SigmaQ2ForDistortion(params, *f.distortion);
  if (!f.sigma_q2) {
    throw InvalidArgumentError("sigma_q2",
                               "one of --sigma-q2 or --distortion is required");
  }
  if (std::isnan(*f.sigma_q2) || *f.sigma_q2 < 0.0) {
    throw InvalidArgumentError("sigma_q2", "must be >= 0");
  }
  return *f.sigma_q2;
}

void EmitRows(std::ostream& out, const std::vector<RdlPoint>& rows,
              const GlobalFlags& g) {
  const Units units = ResolveUnits(g);
  if (g.format == "text") {
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i) out << '\n';
      WriteText(out, rows[i], units);
    }
    return;
  }
  WriteCsvHeader(out);
  for (const RdlPoint& r : rows) WriteCsvRow(out, r, units);
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << content;
  file.flush();
  if (!file) throw IoError("write to " + path + " failed");
}

std::string PlotScript(const std::string& csv_path) {
  std::ostringstream s;
  s << "# gnuplot script for the per-user rate / leakage sweep.\n"
    << "set datafile separator ','\n"
    << "set datafile missing 'NA'\n"
    << "set key autotitle columnhead\n"
    << "set xlabel 'K'\n"
    << "set ylabel 'bits'\n"
    << "set logscale x\n"
    << "plot '" << csv_path << "' using 'k':'r_per_user_dist' with lines, \\\n"
    << "     '' using 'k':'r_per_user_ceo' with lines, \\\n"
    << "     '' using 'k':'r_per_user_limit' with lines dashtype 2, \\\n"
    << "     '' using 'k':'leakage_formula' with lines, \\\n"
    << "     '' using 'k':'leakage_exact' with lines, \\\n"
    << "     '' using 'k':'leakage_outer' with lines dashtype 3\n";
  return s.str();
}

std::vector<std::int64_t> KRange(std::int64_t lo, std::int64_t hi,
                                 std::int64_t step) {
  if (step < 1) throw InvalidArgumentError("k_step", "must be >= 1");
  if (hi < lo) throw InvalidArgumentError("k_max", "must be >= --k-min");
  std::vector<std::int64_t> ks;
  for (std::int64_t k = lo; k <= hi; k += step) ks.push_back(k);
  return ks;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Rate, distortion and leakage of the K-agent Gaussian "
               "state-estimation model",
               "dsest"};
  // -h would collide with --h, the interference coefficient.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--units", g.units, "Information units: bits or nats")
      ->check(CLI::IsMember({"bits", "nats"}));
  app.add_option("--format", g.format, "Output format: csv or text")
      ->check(CLI::IsMember({"csv", "text"}));
  app.add_option("--output", g.output, "Write results to PATH");
  app.add_option("--seed", g.seed, "Monte-Carlo seed");

  // point
  auto* point = app.add_subcommand("point", "Evaluate one operating point");
  std::int64_t point_k = 0;
  ModelFlags point_flags;
  point->add_option("--k", point_k, "Number of agents (>= 2)")->required();
  AddModelFlags(point, &point_flags, true);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Evaluate a range of K");
  std::int64_t k_min = 2;
  std::int64_t k_max = 10;
  std::int64_t k_step = 1;
  std::vector<std::int64_t> k_list;
  ModelFlags sweep_flags;
  auto* kmin_opt = sweep->add_option("--k-min", k_min, "Smallest K");
  auto* kmax_opt = sweep->add_option("--k-max", k_max, "Largest K");
  auto* kstep_opt = sweep->add_option("--k-step", k_step, "K increment");
  auto* klist_opt = sweep->add_option("--k-list", k_list,
                                      "Explicit strictly increasing K values")
                        ->delimiter(',');
  klist_opt->excludes(kmin_opt)->excludes(kmax_opt)->excludes(kstep_opt);
  AddModelFlags(sweep, &sweep_flags, true);

  // figure1
  auto* figure = app.add_subcommand(
      "figure1", "Per-user rate and leakage versus K at h=0.5, sigma_q2=6");
  std::int64_t fig_k_max = 100;
  double fig_sigma_x2 = 1.0;
  std::string plot_path;
  figure->add_option("--k-max", fig_k_max, "Largest K (default 100)");
  figure->add_option("--sigma-x2", fig_sigma_x2, "State variance (default 1)");
  figure->add_option("--emit-plot-script", plot_path,
                     "Also write a gnuplot script to PATH");

  // validate
  auto* validate =
      app.add_subcommand("validate", "Run the oracle validation suites");
  ValidationOptions vo;
  std::string grid = "small";
  validate->add_option("--grid", grid, "small or full")
      ->check(CLI::IsMember({"small", "full"}));
  validate->add_option("--mc-samples", vo.mc_samples,
                       "Monte-Carlo samples (default 200000)");
  validate->add_option("--tol-closed-form", vo.closed_form_tolerance);
  validate->add_option("--tol-leakage", vo.leakage_tolerance);
  validate->add_option("--tol-formula", vo.formula_tolerance);
  validate->add_option("--tol-outer", vo.outer_tolerance);
  validate->add_option("--tol-roundtrip", vo.roundtrip_tolerance);
  validate->add_option("--tol-mc-sigmas", vo.mc_sigmas);
  validate->add_option("--tol-mc-distortion", vo.mc_distortion_relative);
  validate->add_option("--tol-mc-leakage", vo.mc_leakage_relative);
  validate->add_option("--perturb-closed-form", vo.perturb_closed_form)
      ->group("");

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
    return kExitInvalid;
  }

  std::ostringstream buffer;
  try {
    int code = kExitOk;
    std::string failure;
    if (point->parsed()) {
      const ModelParams params =
          ModelParams::Create(point_k, point_flags.h, point_flags.sigma_x2);
      const double q = ResolveSigmaQ2(params, point_flags);
      EvaluateOptions opts;
      opts.include_outer = !point_flags.no_outer;
      opts.include_exact_leakage = !point_flags.no_exact_leakage;
      EmitRows(buffer, {EvaluatePoint(params, q, opts)}, g);
    } else if (sweep->parsed()) {
      SweepSpec spec;
      spec.k_values = klist_opt->count() ? k_list : KRange(k_min, k_max, k_step);
      spec.h = sweep_flags.h;
      spec.sigma_x2 = sweep_flags.sigma_x2;
      if (sweep_flags.distortion) {
        throw InvalidArgumentError("distortion",
                                   "not supported by sweep; use --sigma-q2");
      }
      spec.sigma_q2 = ResolveSigmaQ2(
          ModelParams::Create(std::max<std::int64_t>(spec.k_values.front(), 2),
                              spec.h, spec.sigma_x2),
          sweep_flags);
      spec.include_outer = !sweep_flags.no_outer;
      spec.include_exact_leakage = !sweep_flags.no_exact_leakage;
      spec.units = ResolveUnits(g);
      EmitRows(buffer, RunSweep(spec), g);
    } else if (figure->parsed()) {
      if (fig_k_max < 2) throw InvalidArgumentError("k_max", "must be >= 2");
      SweepSpec spec;
      spec.k_values = KRange(2, fig_k_max, 1);
      spec.h = kFigureH;
      spec.sigma_x2 = fig_sigma_x2;
      spec.sigma_q2 = kFigureSigmaQ2;
      EmitRows(buffer, RunSweep(spec), g);
      if (!plot_path.empty()) {
        WriteFile(plot_path,
                  PlotScript(g.output.empty() ? "figure1.csv" : g.output));
      }
    } else if (validate->parsed()) {
      vo.grid = grid == "full" ? ValidationGrid::kFull : ValidationGrid::kSmall;
      vo.seed = g.seed;
      const ValidationReport report = RunValidation(vo);
      WriteReport(buffer, report);
      if (!report.Passed()) {
        code = kExitValidation;
        const SuiteResult* worst = report.WorstSuite();
        failure = worst->name + " at " + worst->worst;
      }
    }
    if (g.output.empty()) {
      out << buffer.str();
    } else {
      WriteFile(g.output, buffer.str());
    }
    if (code == kExitValidation) {
      err << "error: validation failed; worst offender: " << failure << '\n';
    }
    return code;
  } catch (const InvalidArgumentError& e) {
    std::string message = e.what();
    message.erase(0, e.field().size() + 2);  // drop the "field: " prefix
    err << "error: " << FlagName(e.field()) << ": " << message << '\n';
    return kExitInvalid;
  } catch (const InfeasibleError& e) {
    char range[96];
    std::snprintf(range, sizeof(range), "[%.12g, %.12g]", e.reachable_min(),
                  e.reachable_max());
    err << "error: infeasible request; reachable distortion range is "
        << range << '\n';
    return kExitInfeasible;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace dsest
