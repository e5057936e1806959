// Copyright 2026 The suplearn Authors
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

// Command-line front end.
//
//   suplearn gen-data       sample inputs, integrate, write cloud and samples
//   suplearn fit            fit qp / isnn models, write models and timings
//   suplearn eval           evaluate a saved model on directions or a grid
//   suplearn hausdorff      distance between two models, or the two-agent sweep
//   suplearn export-contour plot-ready support values
//   suplearn bench          timing table over independent instances
//
// Exit status: 0 success, 1 invalid input, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "suplearn/errors.h"
#include "suplearn/experiment.h"
#include "suplearn/io.h"

namespace fs = std::filesystem;

namespace suplearn {
namespace {

struct CommonOptions {
  std::string preset;
  std::string config;
  std::uint64_t seed = 0;
  std::string out;

  std::string model;
  std::string cloud_file;
  Eigen::Index n_x = 0;
  Eigen::Index n_y = 0;
  double t_final = 0.0;
  Eigen::Index time_points = 0;
  double dt_sub = 0.0;
  double sigma = 0.0;
  std::string mode;
  int epochs = 0;
  int batch_size = 0;
  double learning_rate = 0.0;
  int max_iters = 0;

  std::vector<CLI::Option*> set;
  CLI::Option* seed_opt = nullptr;
};

struct GridOptions {
  Eigen::Index n_theta = 720;
  Eigen::Index n_phi = 100;
  Eigen::Index n_elevation = 50;
  Eigen::Index count = 5000;
};

void AddCommon(CLI::App* app, CommonOptions& o, const std::string& out_help) {
  app->add_option("--preset", o.preset, "Named preset: dubins-paper or bicycle-paper");
  app->add_option("--config", o.config, "JSON config overlaid on the preset")
      ->check(CLI::ExistingFile);
  o.seed_opt = app->add_option("--seed", o.seed, "Experiment seed");
  app->add_option("--out", o.out, out_help);
}

void AddExperiment(CLI::App* app, CommonOptions& o) {
  o.set = {
      app->add_option("--model", o.model, "dubins, bicycle or cloud-file"),
      app->add_option("--cloud-file", o.cloud_file, "Point cloud CSV for --model cloud-file"),
      app->add_option("--nx", o.n_x, "Number of sample paths"),
      app->add_option("--ny", o.n_y, "Number of sample directions"),
      app->add_option("--t-final", o.t_final, "Final time [s]"),
      app->add_option("--time-points", o.time_points, "Input grid points on [0, t_final]"),
      app->add_option("--dt-sub", o.dt_sub, "Integrator substep [s]"),
      app->add_option("--sigma", o.sigma, "Measurement noise standard deviation"),
      app->add_option("--mode", o.mode, "QP fit mode: sublinear or convex"),
      app->add_option("--epochs", o.epochs, "ISNN training epochs"),
      app->add_option("--batch-size", o.batch_size, "ISNN minibatch size (0: full batch)"),
      app->add_option("--lr", o.learning_rate, "ISNN learning rate"),
      app->add_option("--max-iters", o.max_iters, "QP solver iteration limit"),
  };
}

void AddGrid(CLI::App* app, GridOptions& g) {
  app->add_option("--n-theta", g.n_theta, "Circle grid size (d = 2)");
  app->add_option("--n-phi", g.n_phi, "Azimuth grid size (d = 3)");
  app->add_option("--n-elev", g.n_elevation, "Elevation grid size (d = 3)");
  app->add_option("--count", g.count, "Random directions (d > 3)");
}

bool Given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

ExperimentConfig BuildConfig(const CommonOptions& o, const std::string& default_preset) {
  ExperimentConfig cfg = PresetConfig(o.preset.empty() ? default_preset : o.preset);
  if (!o.config.empty()) cfg = ApplyConfigJson(cfg, ReadFile(o.config), o.config);
  if (Given(o.seed_opt)) cfg.seed = o.seed;
  const auto& s = o.set;
  if (Given(s[0])) cfg.model = DynamicsKindFromString(o.model);
  if (Given(s[1])) {
    cfg.cloud_file = o.cloud_file;
    if (!Given(s[0])) cfg.model = DynamicsKind::kCloudFile;
  }
  if (Given(s[2])) cfg.n_x = o.n_x;
  if (Given(s[3])) cfg.n_y = o.n_y;
  if (Given(s[4])) {
    cfg.t_final = o.t_final;
    if (!cfg.agents.empty()) cfg.sweep_taus = DefaultSweepTaus(cfg.t_final);
  }
  if (Given(s[5])) cfg.time_points = o.time_points;
  if (Given(s[6])) cfg.dt_sub = o.dt_sub;
  if (Given(s[7])) cfg.noise_sigma = o.sigma;
  if (Given(s[8])) cfg.mode = FitModeFromString(o.mode);
  if (Given(s[9])) cfg.adam.epochs = o.epochs;
  if (Given(s[10])) cfg.adam.batch_size = o.batch_size;
  if (Given(s[11])) cfg.adam.learning_rate = o.learning_rate;
  if (Given(s[12])) cfg.qp.max_iters = o.max_iters;
  cfg.Validate();
  return cfg;
}

std::vector<Regressor> ParseMethods(const std::string& text) {
  if (text == "both") return {Regressor::kQp, Regressor::kIsnn};
  std::vector<Regressor> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(RegressorFromString(item));
  if (out.empty()) throw ValidationError("no regressor given");
  return out;
}

ContourGrid ToContourGrid(const GridOptions& g, std::uint64_t seed) {
  ContourGrid grid;
  grid.n_theta = g.n_theta;
  grid.n_phi = g.n_phi;
  grid.n_elevation = g.n_elevation;
  grid.random_count = g.count;
  grid.seed = seed;
  return grid;
}

// Writes to `path`, or to stdout when `path` is empty.
void Emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    WriteFileAtomic(path, content);
  }
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

Provenance MakeProvenance(const ExperimentConfig& cfg, const std::string& what) {
  Provenance p;
  p.generator = "suplearn gen-data (" + ToString(cfg.model) + ")";
  p.seed = cfg.seed;
  p.extra["artifact"] = what;
  if (!cfg.preset.empty()) p.extra["preset"] = cfg.preset;
  return p;
}

int RunGenData(const CommonOptions& o) {
  const ExperimentConfig cfg = BuildConfig(o, "dubins-paper");
  const fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
  const GeneratedData data = GenerateData(cfg);
  WriteFileAtomic(dir / "config.json", Dump(ConfigToJson(cfg)));
  if (data.ensemble) {
    WriteFileAtomic(dir / "ensemble.json", Dump(EnsembleHeaderToJson(*data.ensemble)));
    WriteFileAtomic(dir / "ensemble.csv", EnsembleToCsv(*data.ensemble));
  }
  WriteFileAtomic(dir / "cloud.csv", CloudToCsv(data.cloud));
  WriteFileAtomic(dir / "cloud.json", Dump(CloudToJson(data.cloud, MakeProvenance(cfg, "cloud"))));
  WriteFileAtomic(dir / "samples.csv", SamplesToCsv(data.samples));
  WriteFileAtomic(dir / "samples.json",
                  Dump(SamplesToJson(data.samples, MakeProvenance(cfg, "samples"))));
  std::cerr << "gen-data: " << data.cloud.size() << " points in R^" << data.cloud.dim() << ", "
            << data.samples.size() << " support samples, seed " << cfg.seed << " -> "
            << dir.string() << "\n";
  return 0;
}

SupportSamples<double> LoadSamples(const std::string& path) {
  const std::string text = ReadFile(path);
  if (path.ends_with(".json")) return SamplesFromJson(Json::parse(text));
  return SamplesFromCsv(text);
}

int RunFit(const CommonOptions& o, const std::string& samples_path, const std::string& methods,
           int instances) {
  const ExperimentConfig cfg = BuildConfig(o, "dubins-paper");
  const std::vector<Regressor> regs =
      methods.empty() ? std::vector<Regressor>{cfg.regressor} : ParseMethods(methods);
  if (instances < 1) throw ValidationError("--instances must be >= 1");
  if (!samples_path.empty() && instances > 1) {
    throw ValidationError("--instances needs fresh sampling; drop --samples");
  }
  const fs::path dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
  WriteFileAtomic(dir / "config.json", Dump(ConfigToJson(cfg)));
  std::vector<BenchRow> rows;
  for (int i = 1; i <= instances; ++i) {
    ExperimentConfig inst = cfg;
    if (instances > 1) inst.seed = DeriveSeed(cfg.seed, 5, static_cast<std::uint64_t>(i));
    const SupportSamples<double> samples =
        samples_path.empty() ? GenerateData(inst).samples : LoadSamples(samples_path);
    for (Regressor r : regs) {
      const LoadedModel model = FitModel(samples, inst, r);
      const std::string name = "model_" + ToString(r) +
                               (instances > 1 ? "_" + std::to_string(i) : std::string()) + ".json";
      WriteFileAtomic(dir / name, Dump(ModelJson(model)));
      rows.push_back({i, r, FitSeconds(model)});
      if (const auto* qp = std::get_if<MaxAffineModel>(&model.model)) {
        const QpDiagnostics& d = qp->diagnostics;
        std::cerr << "fit " << name << ": qp " << (d.converged ? "converged" : "iteration limit")
                  << " after " << d.iterations << " iterations, objective " << d.objective
                  << ", max violation " << d.max_violation << ", " << d.seconds << " s\n";
      } else {
        const IsnnModel& m = std::get<IsnnModel>(model.model);
        std::cerr << "fit " << name << ": isnn " << m.adam.epochs << " epochs, final loss "
                  << (m.loss_history.empty() ? 0.0 : m.loss_history.back()) << ", " << m.seconds
                  << " s\n";
      }
    }
  }
  WriteFileAtomic(dir / "timing.csv", BenchToCsv(rows));
  return 0;
}

int RunEval(const CommonOptions& o, const std::string& model_path,
            const std::string& directions_path, const GridOptions& g) {
  const LoadedModel model = LoadModelFile(model_path);
  const DirectionSet<double> dirs = directions_path.empty()
                                        ? GridDirections(model.dim(), ToContourGrid(g, o.seed))
                                        : DirectionsFromCsv(ReadFile(directions_path));
  CheckDimension(model.dim(), dirs.dim(), "eval directions");
  Emit(o.out, DirectionValuesToCsv(dirs, model.support.Evaluate(dirs)));
  return 0;
}

int RunHausdorff(const CommonOptions& o, const std::string& a, const std::string& b, bool sweep,
                 const std::string& methods, const std::string& taus, const GridOptions& g) {
  if (sweep) {
    ExperimentConfig cfg = BuildConfig(o, "bicycle-paper");
    if (!taus.empty()) {
      cfg.sweep_taus.clear();
      std::stringstream ss(taus);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.sweep_taus.push_back(ParseAngleOrNumber(item));
      cfg.Validate();
    }
    const std::vector<SweepRow> rows =
        RunHausdorffSweep(cfg, ParseMethods(methods.empty() ? "qp,isnn" : methods));
    Emit(o.out, SweepToCsv(rows));
    return 0;
  }
  if (a.empty() || b.empty()) throw ValidationError("hausdorff needs --a and --b, or --sweep");
  const LoadedModel ma = LoadModelFile(a);
  const LoadedModel mb = LoadModelFile(b);
  CheckDimension(ma.dim(), mb.dim(), "hausdorff models");
  const DirectionSet<double> grid = GridDirections(ma.dim(), ToContourGrid(g, o.seed));
  Emit(o.out, FormatDouble(HausdorffDistance(ma.support, mb.support, grid)) + "\n");
  return 0;
}

int RunExportContour(const CommonOptions& o, const std::string& model_path,
                     const GridOptions& g) {
  const LoadedModel model = LoadModelFile(model_path);
  Emit(o.out, ContourCsv(model.support, ToContourGrid(g, o.seed)));
  return 0;
}

int RunBenchCommand(const CommonOptions& o, int instances, const std::string& methods) {
  CommonOptions opts = o;
  ExperimentConfig cfg = BuildConfig(opts, "dubins-paper");
  // The timing table is reported for 30-epoch ISNN fits unless overridden.
  if (!Given(o.set[9])) cfg.adam.epochs = 30;
  const std::vector<Regressor> regs = ParseMethods(methods.empty() ? "qp,isnn" : methods);
  const std::vector<BenchRow> rows = RunBench(cfg, instances, regs);
  Emit(o.out, BenchToCsv(rows));
  for (Regressor r : regs) {
    double total = 0.0;
    int n = 0;
    for (const BenchRow& row : rows) {
      if (row.method == r) {
        total += row.seconds;
        ++n;
      }
    }
    std::cerr << "bench: " << ToString(r) << " mean " << total / n << " s over " << n
              << " instances\n";
  }
  return 0;
}

}  // namespace
}  // namespace suplearn

int main(int argc, char** argv) {
  using namespace suplearn;
  CLI::App app{"Support-function learning of compact sets and reach sets"};
  app.require_subcommand(1);

  CommonOptions gen_opts, fit_opts, eval_opts, haus_opts, contour_opts, bench_opts;
  GridOptions eval_grid, haus_grid, contour_grid;

  CLI::App* gen = app.add_subcommand("gen-data", "Sample inputs, integrate and write data");
  AddCommon(gen, gen_opts, "Output directory (default: out)");
  AddExperiment(gen, gen_opts);

  std::string fit_samples, fit_methods;
  int fit_instances = 1;
  CLI::App* fit = app.add_subcommand("fit", "Fit support-function models");
  AddCommon(fit, fit_opts, "Output directory (default: out)");
  AddExperiment(fit, fit_opts);
  fit->add_option("--samples", fit_samples, "Support samples (CSV or JSON); default: generate")
      ->check(CLI::ExistingFile);
  fit->add_option("--regressor", fit_methods, "qp, isnn, both or a comma list");
  fit->add_option("--instances", fit_instances, "Independent sampling instances");

  std::string eval_model, eval_dirs;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a saved model");
  AddCommon(eval, eval_opts, "Output CSV (default: stdout)");
  eval->add_option("--model", eval_model, "Model JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--directions", eval_dirs, "Direction CSV (y1..yd)")
      ->check(CLI::ExistingFile);
  AddGrid(eval, eval_grid);

  std::string haus_a, haus_b, haus_methods, haus_taus;
  bool haus_sweep = false;
  CLI::App* haus = app.add_subcommand("hausdorff", "Hausdorff distance between support functions");
  AddCommon(haus, haus_opts, "Output file (default: stdout)");
  AddExperiment(haus, haus_opts);
  haus->add_option("--a", haus_a, "First model JSON")->check(CLI::ExistingFile);
  haus->add_option("--b", haus_b, "Second model JSON")->check(CLI::ExistingFile);
  haus->add_flag("--sweep", haus_sweep, "Run the two-agent sweep instead");
  haus->add_option("--methods", haus_methods, "Sweep regressors (default: qp,isnn)");
  haus->add_option("--taus", haus_taus, "Comma-separated sweep times [s]");
  AddGrid(haus, haus_grid);

  std::string contour_model;
  CLI::App* contour = app.add_subcommand("export-contour", "Plot-ready support values");
  AddCommon(contour, contour_opts, "Output CSV (default: stdout)");
  contour->add_option("--model", contour_model, "Model JSON")
      ->required()
      ->check(CLI::ExistingFile);
  AddGrid(contour, contour_grid);

  int bench_instances = 10;
  std::string bench_methods;
  CLI::App* bench = app.add_subcommand("bench", "Timing table over sampling instances");
  AddCommon(bench, bench_opts, "Output CSV (default: stdout)");
  AddExperiment(bench, bench_opts);
  bench->add_option("--instances", bench_instances, "Number of instances");
  bench->add_option("--methods", bench_methods, "Regressors (default: qp,isnn)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen) return RunGenData(gen_opts);
    if (*fit) return RunFit(fit_opts, fit_samples, fit_methods, fit_instances);
    if (*eval) return RunEval(eval_opts, eval_model, eval_dirs, eval_grid);
    if (*haus) {
      return RunHausdorff(haus_opts, haus_a, haus_b, haus_sweep, haus_methods, haus_taus,
                          haus_grid);
    }
    if (*contour) return RunExportContour(contour_opts, contour_model, contour_grid);
    if (*bench) return RunBenchCommand(bench_opts, bench_instances, bench_methods);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
