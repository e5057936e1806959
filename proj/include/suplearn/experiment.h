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

#ifndef SUPLEARN_EXPERIMENT_H_
#define SUPLEARN_EXPERIMENT_H_

// End-to-end pipeline used by the command-line tool: input sampling,
// trajectory integration, support sampling, fitting, timing and the
// two-agent Hausdorff study.

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "suplearn/dynamics.h"
#include "suplearn/geometry.h"
#include "suplearn/io.h"
#include "suplearn/regress_isnn.h"
#include "suplearn/regress_qp.h"
#include "suplearn/sampling.h"

namespace suplearn {

enum class Regressor { kQp, kIsnn };

std::string ToString(Regressor r);
Regressor RegressorFromString(const std::string& name);

enum class DynamicsKind { kDubins, kBicycle, kCloudFile };

std::string ToString(DynamicsKind k);
DynamicsKind DynamicsKindFromString(const std::string& name);

struct AgentSpec {
  std::string name;
  Eigen::VectorXd x0;
  Hyperrectangle bounds;
};

struct ExperimentConfig {
  std::string preset;
  DynamicsKind model = DynamicsKind::kDubins;
  std::string cloud_file;  // used when model is kCloudFile
  double speed = 2.0;      // Dubins only
  Eigen::VectorXd x0;
  Hyperrectangle bounds;
  double t_final = 2.0;
  Eigen::Index time_points = 101;
  double length_scale = 0.7;
  double dt_sub = kDefaultSubstep;
  GibbsOptions gibbs;
  Eigen::Index n_x = 500;
  Eigen::Index n_y = 200;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  std::vector<int> projection;  // empty: keep every coordinate
  Regressor regressor = Regressor::kQp;
  FitMode mode = FitMode::kSublinear;
  QpSolveOptions qp;
  std::vector<Eigen::Index> hidden = {5, 20, 50, 20, 5};
  AdamConfig adam;
  std::vector<AgentSpec> agents;
  std::vector<double> sweep_taus;

  void Validate() const;
  VectorField Dynamics() const;
  // Dimension of the learned set after projection.
  Eigen::Index LearnDim() const;
};

ExperimentConfig PresetConfig(const std::string& name);
std::vector<std::string> PresetNames();

// Overlays the keys of a JSON config onto `base`. Errors carry the line of
// the offending key in `text`.
ExperimentConfig ApplyConfigJson(ExperimentConfig base, const std::string& text,
                                 const std::string& source = "config");

Json ConfigToJson(const ExperimentConfig& cfg);

// Independent stream seeds derived from the experiment seed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

// Default sweep: 8 equispaced times in (0, t_final].
std::vector<double> DefaultSweepTaus(double t_final, int count = 8);

struct GeneratedData {
  std::optional<InputPathEnsemble> ensemble;  // absent for cloud files
  std::optional<ReachCloud> reach;
  PointCloud<double> cloud;  // projected and noised
  SupportSamples<double> samples;
};

GeneratedData GenerateData(const ExperimentConfig& cfg);

LoadedModel FitModel(const SupportSamples<double>& samples, const ExperimentConfig& cfg,
                     Regressor regressor);
Json ModelJson(const LoadedModel& model);
double FitSeconds(const LoadedModel& model);

struct BenchRow {
  int instance = 0;
  Regressor method = Regressor::kQp;
  double seconds = 0.0;
};

// `instances` independent sampling instances, each fitted by every method.
std::vector<BenchRow> RunBench(const ExperimentConfig& cfg, int instances,
                               const std::vector<Regressor>& methods);
std::string BenchToCsv(const std::vector<BenchRow>& rows);

struct SweepRow {
  double tau = 0.0;
  Regressor method = Regressor::kQp;
  double delta_h = 0.0;

  bool operator==(const SweepRow&) const = default;
};

// Two-agent study: for every tau, the projected reach clouds of the first two
// agents are sampled, fitted and compared on the default grid.
std::vector<SweepRow> RunHausdorffSweep(const ExperimentConfig& cfg,
                                        const std::vector<Regressor>& methods);
std::string SweepToCsv(const std::vector<SweepRow>& rows);

// Plot-ready support values: (theta,h) on S^1, (phi,theta,h) on S^2, raw
// direction columns otherwise.
struct ContourGrid {
  Eigen::Index n_theta = 720;
  Eigen::Index n_phi = 100;
  Eigen::Index n_elevation = 50;
  Eigen::Index random_count = 5000;
  std::uint64_t seed = 0;
};

std::string ContourCsv(const SupportFunction<double>& h, const ContourGrid& grid);
DirectionSet<double> GridDirections(Eigen::Index dim, const ContourGrid& grid);

}  // namespace suplearn

#endif  // SUPLEARN_EXPERIMENT_H_
