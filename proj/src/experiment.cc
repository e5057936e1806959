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

#include "suplearn/experiment.h"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <utility>

#include "suplearn/errors.h"

namespace suplearn {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Stream identifiers for DeriveSeed.
constexpr std::uint64_t kEnsembleStream = 1;
constexpr std::uint64_t kDirectionStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kIsnnStream = 4;
constexpr std::uint64_t kInstanceStream = 5;

Eigen::VectorXd Vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

GpConfig MakeGp(const ExperimentConfig& cfg) {
  GpConfig gp;
  gp.length_scale = cfg.length_scale;
  gp.time_grid = UniformTimeGrid(cfg.t_final, cfg.time_points);
  return gp;
}

PointCloud<double> Learnable(const ExperimentConfig& cfg, const PointCloud<double>& raw,
                             std::uint64_t noise_seed) {
  PointCloud<double> cloud = cfg.projection.empty() ? raw : ProjectCloud(raw, cfg.projection);
  return AddNoise(cloud, cfg.noise_sigma, noise_seed);
}

// 1-based line of the first `"key":` in `text`, or 0 if absent.
int KeyLine(const std::string& text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string::npos) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') {
      return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
    }
    pos = after;
  }
  return 0;
}

int ByteLine(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

double ReadNumber(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return ParseAngleOrNumber(v.get<std::string>());
  throw ValidationError("expected a number, got " + v.dump());
}

Eigen::VectorXd ReadVector(const Json& v) {
  if (!v.is_array()) throw ValidationError("expected an array, got " + v.dump());
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = ReadNumber(v[i]);
  return out;
}

Eigen::Index ReadCount(const Json& v) {
  if (!v.is_number_integer()) throw ValidationError("expected an integer, got " + v.dump());
  return v.get<Eigen::Index>();
}

bool ReadBool(const Json& v) {
  if (!v.is_boolean()) throw ValidationError("expected true or false, got " + v.dump());
  return v.get<bool>();
}

std::string ReadString(const Json& v) {
  if (!v.is_string()) throw ValidationError("expected a string, got " + v.dump());
  return v.get<std::string>();
}

using Setter = std::function<void(ExperimentConfig&, const Json&)>;

// Already carries its file and line; passed through enclosing scopes as is.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Applies every key of `obj` through `setters`; unknown keys are errors.
void ApplyObject(ExperimentConfig& cfg, const Json& obj,
                 const std::map<std::string, Setter>& setters, const std::string& text,
                 const std::string& source, const std::string& scope) {
  if (!obj.is_object()) {
    throw ValidationError(source + ": '" + scope + "' must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    const auto it = setters.find(key);
    const int line = KeyLine(text, key);
    const std::string where =
        source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": ";
    if (it == setters.end()) {
      throw ConfigError(where + "unknown key '" + scope + key + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ConfigError(where + "key '" + scope + key + "': " + e.what());
    } catch (const Json::exception& e) {
      throw ConfigError(where + "key '" + scope + key + "': " + e.what());
    }
  }
}

AgentSpec ReadAgent(const Json& j) {
  if (!j.is_object()) throw ValidationError("agent must be an object");
  AgentSpec a;
  a.name = j.value("name", std::string("agent"));
  if (!j.contains("x0") || !j.contains("lower") || !j.contains("upper")) {
    throw ValidationError("agent needs x0, lower and upper");
  }
  a.x0 = ReadVector(j.at("x0"));
  a.bounds = Hyperrectangle(ReadVector(j.at("lower")), ReadVector(j.at("upper")));
  return a;
}

}  // namespace

std::string ToString(Regressor r) { return r == Regressor::kQp ? "qp" : "isnn"; }

Regressor RegressorFromString(const std::string& name) {
  if (name == "qp") return Regressor::kQp;
  if (name == "isnn") return Regressor::kIsnn;
  throw ValidationError("unknown regressor '" + name + "' (expected qp or isnn)");
}

std::string ToString(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::kDubins:
      return "dubins";
    case DynamicsKind::kBicycle:
      return "bicycle";
    case DynamicsKind::kCloudFile:
      return "cloud-file";
  }
  return "";
}

DynamicsKind DynamicsKindFromString(const std::string& name) {
  if (name == "dubins") return DynamicsKind::kDubins;
  if (name == "bicycle") return DynamicsKind::kBicycle;
  if (name == "cloud-file") return DynamicsKind::kCloudFile;
  throw ValidationError("unknown model '" + name + "' (expected dubins, bicycle or cloud-file)");
}

void ExperimentConfig::Validate() const {
  if (n_x < 1) throw ValidationError("n_x must be >= 1");
  if (n_y < 1) throw ValidationError("n_y must be >= 1");
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
  qp.Validate();
  adam.Validate();
  for (Eigen::Index w : hidden) {
    if (w < 1) throw ValidationError("hidden widths must be >= 1");
  }
  if (hidden.empty()) throw ValidationError("at least one hidden layer is required");
  if (model == DynamicsKind::kCloudFile) {
    if (cloud_file.empty()) throw ValidationError("cloud-file model needs a cloud file");
    if (!std::filesystem::exists(cloud_file)) {
      throw ValidationError("cloud file '" + cloud_file + "' does not exist");
    }
    return;
  }
  if (!(t_final > 0.0)) throw ValidationError("t_final must be > 0");
  if (time_points < 2) throw ValidationError("time_points must be >= 2");
  if (!(length_scale > 0.0)) throw ValidationError("length_scale must be > 0");
  if (!(dt_sub > 0.0)) throw ValidationError("dt_sub must be > 0");
  if (!(speed > 0.0)) throw ValidationError("speed must be > 0");
  const VectorField f = Dynamics();
  CheckDimension(f.state_dim, x0.size(), "x0");
  CheckDimension(f.input_dim, bounds.dim(), "input bounds");
  for (const AgentSpec& a : agents) {
    CheckDimension(f.state_dim, a.x0.size(), ("agent " + a.name + " x0").c_str());
    CheckDimension(f.input_dim, a.bounds.dim(), ("agent " + a.name + " bounds").c_str());
  }
  for (int k : projection) {
    if (k < 0 || k >= f.state_dim) {
      throw ValidationError("projection index " + std::to_string(k) + " out of range");
    }
  }
  for (double tau : sweep_taus) {
    if (!(tau >= 0.0 && tau <= t_final)) {
      throw ValidationError("sweep time outside [0, t_final]");
    }
  }
}

VectorField ExperimentConfig::Dynamics() const {
  switch (model) {
    case DynamicsKind::kDubins:
      return DubinsModel(speed);
    case DynamicsKind::kBicycle:
      return BicycleModel();
    case DynamicsKind::kCloudFile:
      break;
  }
  throw ValidationError("cloud-file model has no dynamics");
}

Eigen::Index ExperimentConfig::LearnDim() const {
  if (!projection.empty()) return static_cast<Eigen::Index>(projection.size());
  if (model == DynamicsKind::kCloudFile) {
    return CloudFromCsv(ReadFile(cloud_file)).dim();
  }
  return Dynamics().state_dim;
}

std::vector<std::string> PresetNames() { return {"dubins-paper", "bicycle-paper"}; }

ExperimentConfig PresetConfig(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset = name;
  if (name == "dubins-paper") {
    cfg.model = DynamicsKind::kDubins;
    cfg.speed = 2.0;
    cfg.x0 = Eigen::VectorXd::Zero(3);
    cfg.bounds = Hyperrectangle(Vec({-30.0 * kDeg}), Vec({90.0 * kDeg}));
    return cfg;
  }
  if (name == "bicycle-paper") {
    cfg.model = DynamicsKind::kBicycle;
    cfg.x0 = Eigen::VectorXd::Zero(4);
    cfg.bounds = Hyperrectangle(Vec({-1.0, -10.0 * kDeg}), Vec({1.0, 10.0 * kDeg}));
    cfg.projection = {0, 1};
    cfg.agents = {
        {"A", Vec({-1.0, 1.0, 10.0, 0.1}),
         Hyperrectangle(Vec({-1.0, -10.0 * kDeg}), Vec({1.0, 10.0 * kDeg}))},
        {"B", Vec({0.0, 0.0, 8.0, -0.5}),
         Hyperrectangle(Vec({-1.2, -2.0 * kDeg}), Vec({1.0, 15.0 * kDeg}))}};
    cfg.sweep_taus = DefaultSweepTaus(cfg.t_final);
    return cfg;
  }
  throw ValidationError("unknown preset '" + name + "' (expected dubins-paper or bicycle-paper)");
}

ExperimentConfig ApplyConfigJson(ExperimentConfig base, const std::string& text,
                                 const std::string& source) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(source + ":" + std::to_string(ByteLine(text, e.byte)) +
                          ": JSON syntax error: " + e.what());
  }
  if (!root.is_object()) throw ValidationError(source + ": top level must be an object");
  if (root.contains("preset")) {
    try {
      base = PresetConfig(ReadString(root.at("preset")));
    } catch (const ValidationError& e) {
      throw ValidationError(source + ":" + std::to_string(KeyLine(text, "preset")) + ": " +
                            e.what());
    }
  }

  const std::map<std::string, Setter> qp_setters = {
      {"max_iters", [](ExperimentConfig& c, const Json& v) { c.qp.max_iters = static_cast<int>(ReadCount(v)); }},
      {"primal_tol", [](ExperimentConfig& c, const Json& v) { c.qp.primal_tol = ReadNumber(v); }},
      {"dual_tol", [](ExperimentConfig& c, const Json& v) { c.qp.dual_tol = ReadNumber(v); }},
      {"rho", [](ExperimentConfig& c, const Json& v) { c.qp.rho = ReadNumber(v); }},
      {"sigma", [](ExperimentConfig& c, const Json& v) { c.qp.sigma = ReadNumber(v); }},
      {"alpha", [](ExperimentConfig& c, const Json& v) { c.qp.alpha = ReadNumber(v); }},
      {"adaptive_rho", [](ExperimentConfig& c, const Json& v) { c.qp.adaptive_rho = ReadBool(v); }},
      {"row_scaling", [](ExperimentConfig& c, const Json& v) { c.qp.row_scaling = ReadBool(v); }},
      {"polish", [](ExperimentConfig& c, const Json& v) { c.qp.polish = ReadBool(v); }},
      {"repair", [](ExperimentConfig& c, const Json& v) { c.qp.repair = ReadBool(v); }},
  };
  const std::map<std::string, Setter> isnn_setters = {
      {"hidden", [](ExperimentConfig& c, const Json& v) { c.hidden = v.get<std::vector<Eigen::Index>>(); }},
      {"learning_rate", [](ExperimentConfig& c, const Json& v) { c.adam.learning_rate = ReadNumber(v); }},
      {"beta1", [](ExperimentConfig& c, const Json& v) { c.adam.beta1 = ReadNumber(v); }},
      {"beta2", [](ExperimentConfig& c, const Json& v) { c.adam.beta2 = ReadNumber(v); }},
      {"epsilon", [](ExperimentConfig& c, const Json& v) { c.adam.epsilon = ReadNumber(v); }},
      {"epochs", [](ExperimentConfig& c, const Json& v) { c.adam.epochs = static_cast<int>(ReadCount(v)); }},
      {"batch_size", [](ExperimentConfig& c, const Json& v) { c.adam.batch_size = static_cast<int>(ReadCount(v)); }},
      {"scale_targets", [](ExperimentConfig& c, const Json& v) { c.adam.scale_targets = ReadBool(v); }},
  };
  std::map<std::string, Setter> setters = {
      {"preset", [](ExperimentConfig&, const Json&) {}},
      {"model", [](ExperimentConfig& c, const Json& v) { c.model = DynamicsKindFromString(ReadString(v)); }},
      {"cloud_file", [](ExperimentConfig& c, const Json& v) { c.cloud_file = ReadString(v); }},
      {"speed", [](ExperimentConfig& c, const Json& v) { c.speed = ReadNumber(v); }},
      {"x0", [](ExperimentConfig& c, const Json& v) { c.x0 = ReadVector(v); }},
      {"lower", [](ExperimentConfig& c, const Json& v) { c.bounds.lower = ReadVector(v); }},
      {"upper", [](ExperimentConfig& c, const Json& v) { c.bounds.upper = ReadVector(v); }},
      {"t_final", [](ExperimentConfig& c, const Json& v) { c.t_final = ReadNumber(v); }},
      {"time_points", [](ExperimentConfig& c, const Json& v) { c.time_points = ReadCount(v); }},
      {"length_scale", [](ExperimentConfig& c, const Json& v) { c.length_scale = ReadNumber(v); }},
      {"dt_sub", [](ExperimentConfig& c, const Json& v) { c.dt_sub = ReadNumber(v); }},
      {"burn_in", [](ExperimentConfig& c, const Json& v) { c.gibbs.burn_in = static_cast<int>(ReadCount(v)); }},
      {"sweeps_between_samples", [](ExperimentConfig& c, const Json& v) { c.gibbs.sweeps_between_samples = static_cast<int>(ReadCount(v)); }},
      {"n_x", [](ExperimentConfig& c, const Json& v) { c.n_x = ReadCount(v); }},
      {"n_y", [](ExperimentConfig& c, const Json& v) { c.n_y = ReadCount(v); }},
      {"seed", [](ExperimentConfig& c, const Json& v) { c.seed = v.get<std::uint64_t>(); }},
      {"noise_sigma", [](ExperimentConfig& c, const Json& v) { c.noise_sigma = ReadNumber(v); }},
      {"projection", [](ExperimentConfig& c, const Json& v) { c.projection = v.get<std::vector<int>>(); }},
      {"regressor", [](ExperimentConfig& c, const Json& v) { c.regressor = RegressorFromString(ReadString(v)); }},
      {"mode", [](ExperimentConfig& c, const Json& v) { c.mode = FitModeFromString(ReadString(v)); }},
      {"agents", [](ExperimentConfig& c, const Json& v) {
         if (!v.is_array()) throw ValidationError("expected an array of agents");
         c.agents.clear();
         for (const Json& a : v) c.agents.push_back(ReadAgent(a));
       }},
      {"sweep_taus", [](ExperimentConfig& c, const Json& v) {
         const Eigen::VectorXd taus = ReadVector(v);
         c.sweep_taus.assign(taus.data(), taus.data() + taus.size());
       }},
  };
  setters["qp"] = [&](ExperimentConfig& c, const Json& v) {
    ApplyObject(c, v, qp_setters, text, source, "qp.");
  };
  setters["isnn"] = [&](ExperimentConfig& c, const Json& v) {
    ApplyObject(c, v, isnn_setters, text, source, "isnn.");
  };
  ApplyObject(base, root, setters, text, source, "");
  if (root.contains("lower") || root.contains("upper")) {
    try {
      base.bounds = Hyperrectangle(base.bounds.lower, base.bounds.upper);
    } catch (const ValidationError& e) {
      const std::string key = root.contains("lower") ? "lower" : "upper";
      throw ValidationError(source + ":" + std::to_string(KeyLine(text, key)) + ": " + e.what());
    }
  }
  return base;
}

Json ConfigToJson(const ExperimentConfig& cfg) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  Json agents = Json::array();
  for (const AgentSpec& a : cfg.agents) {
    agents.push_back({{"name", a.name},
                      {"x0", vec(a.x0)},
                      {"lower", vec(a.bounds.lower)},
                      {"upper", vec(a.bounds.upper)}});
  }
  return {{"preset", cfg.preset},
          {"model", ToString(cfg.model)},
          {"cloud_file", cfg.cloud_file},
          {"speed", cfg.speed},
          {"x0", vec(cfg.x0)},
          {"lower", vec(cfg.bounds.lower)},
          {"upper", vec(cfg.bounds.upper)},
          {"t_final", cfg.t_final},
          {"time_points", cfg.time_points},
          {"length_scale", cfg.length_scale},
          {"dt_sub", cfg.dt_sub},
          {"burn_in", cfg.gibbs.burn_in},
          {"sweeps_between_samples", cfg.gibbs.sweeps_between_samples},
          {"n_x", cfg.n_x},
          {"n_y", cfg.n_y},
          {"seed", cfg.seed},
          {"noise_sigma", cfg.noise_sigma},
          {"projection", cfg.projection},
          {"regressor", ToString(cfg.regressor)},
          {"mode", ToString(cfg.mode)},
          {"agents", agents},
          {"sweep_taus", cfg.sweep_taus}};
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return DerivedRng(seed, stream, index)();
}

std::vector<double> DefaultSweepTaus(double t_final, int count) {
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) out.push_back(t_final * k / count);
  return out;
}

GeneratedData GenerateData(const ExperimentConfig& cfg) {
  cfg.Validate();
  GeneratedData out;
  PointCloud<double> raw;
  if (cfg.model == DynamicsKind::kCloudFile) {
    const std::string text = ReadFile(cfg.cloud_file);
    raw = cfg.cloud_file.ends_with(".json") ? CloudFromJson(Json::parse(text)) : CloudFromCsv(text);
  } else {
    out.ensemble = SampleConstrainedGpPaths(MakeGp(cfg), cfg.bounds, cfg.n_x,
                                            DeriveSeed(cfg.seed, kEnsembleStream), cfg.gibbs);
    out.reach = ComputeReachCloud(cfg.Dynamics(), cfg.x0, *out.ensemble, cfg.dt_sub);
    raw = out.reach->cloud;
  }
  out.cloud = Learnable(cfg, raw, DeriveSeed(cfg.seed, kNoiseStream));
  const DirectionSet<double> dirs =
      SampleUnitDirections<double>(out.cloud.dim(), cfg.n_y, DeriveSeed(cfg.seed, kDirectionStream));
  out.samples = EmpiricalSupport(out.cloud, dirs);
  return out;
}

LoadedModel FitModel(const SupportSamples<double>& samples, const ExperimentConfig& cfg,
                     Regressor regressor) {
  if (regressor == Regressor::kQp) {
    MaxAffineModel m = FitSupportQp(samples, cfg.mode, cfg.qp);
    SupportFunction<double> h = AsSupportFunction(m);
    return {std::move(m), std::move(h)};
  }
  IsnnArchitecture arch;
  arch.input_dim = samples.dim();
  arch.hidden = cfg.hidden;
  AdamConfig adam = cfg.adam;
  adam.seed = DeriveSeed(cfg.seed, kIsnnStream);
  IsnnModel m = TrainIsnn(samples, arch, adam);
  SupportFunction<double> h = AsSupportFunction(m);
  return {std::move(m), std::move(h)};
}

Json ModelJson(const LoadedModel& model) {
  return std::visit([](const auto& m) { return ModelToJson(m); }, model.model);
}

double FitSeconds(const LoadedModel& model) {
  if (const auto* qp = std::get_if<MaxAffineModel>(&model.model)) return qp->diagnostics.seconds;
  return std::get<IsnnModel>(model.model).seconds;
}

std::vector<BenchRow> RunBench(const ExperimentConfig& cfg, int instances,
                               const std::vector<Regressor>& methods) {
  if (instances < 1) throw ValidationError("bench: instances must be >= 1");
  std::vector<BenchRow> rows;
  for (int i = 1; i <= instances; ++i) {
    ExperimentConfig inst = cfg;
    inst.seed = DeriveSeed(cfg.seed, kInstanceStream, static_cast<std::uint64_t>(i));
    const GeneratedData data = GenerateData(inst);
    for (Regressor r : methods) {
      rows.push_back({i, r, FitSeconds(FitModel(data.samples, inst, r))});
    }
  }
  return rows;
}

std::string BenchToCsv(const std::vector<BenchRow>& rows) {
  std::string out = "instance,method,seconds\n";
  for (const BenchRow& r : rows) {
    out += std::to_string(r.instance) + ',' + ToString(r.method) + ',' + FormatDouble(r.seconds) + '\n';
  }
  return out;
}

std::vector<SweepRow> RunHausdorffSweep(const ExperimentConfig& cfg,
                                        const std::vector<Regressor>& methods) {
  cfg.Validate();
  if (cfg.model == DynamicsKind::kCloudFile) {
    throw ValidationError("hausdorff sweep needs a dynamics model");
  }
  if (cfg.agents.size() < 2) throw ValidationError("hausdorff sweep needs two agents");
  const std::vector<double> taus =
      cfg.sweep_taus.empty() ? DefaultSweepTaus(cfg.t_final) : cfg.sweep_taus;
  const VectorField f = cfg.Dynamics();
  const GpConfig gp = MakeGp(cfg);

  std::vector<InputPathEnsemble> ensembles;
  for (std::size_t a = 0; a < 2; ++a) {
    ensembles.push_back(SampleConstrainedGpPaths(gp, cfg.agents[a].bounds, cfg.n_x,
                                                 DeriveSeed(cfg.seed, kEnsembleStream, a + 1),
                                                 cfg.gibbs));
  }
  const Eigen::Index dim = cfg.LearnDim();
  const DirectionSet<double> dirs =
      SampleUnitDirections<double>(dim, cfg.n_y, DeriveSeed(cfg.seed, kDirectionStream));
  const DirectionSet<double> grid = DefaultGrid<double>(dim);

  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    std::vector<SupportSamples<double>> samples;
    for (std::size_t a = 0; a < 2; ++a) {
      const ReachCloud reach =
          ComputeReachCloud(f, cfg.agents[a].x0, ensembles[a], cfg.dt_sub, taus[k]);
      const PointCloud<double> cloud =
          Learnable(cfg, reach.cloud, DeriveSeed(cfg.seed, kNoiseStream, 16 * k + a + 1));
      samples.push_back(EmpiricalSupport(cloud, dirs));
    }
    for (Regressor r : methods) {
      const LoadedModel ha = FitModel(samples[0], cfg, r);
      const LoadedModel hb = FitModel(samples[1], cfg, r);
      rows.push_back({taus[k], r, HausdorffDistance(ha.support, hb.support, grid)});
    }
  }
  return rows;
}

std::string SweepToCsv(const std::vector<SweepRow>& rows) {
  std::string out = "tau,method,delta_h\n";
  for (const SweepRow& r : rows) {
    out += FormatDouble(r.tau) + ',' + ToString(r.method) + ',' + FormatDouble(r.delta_h) + '\n';
  }
  return out;
}

DirectionSet<double> GridDirections(Eigen::Index dim, const ContourGrid& grid) {
  if (dim == 2) return CircleGrid<double>(grid.n_theta);
  if (dim == 3) return SphereGrid<double>(grid.n_phi, grid.n_elevation);
  return SampleUnitDirections<double>(dim, grid.random_count, grid.seed);
}

std::string ContourCsv(const SupportFunction<double>& h, const ContourGrid& grid) {
  const Eigen::Index dim = h.dim();
  const DirectionSet<double> dirs = GridDirections(dim, grid);
  const Eigen::VectorXd values = h.Evaluate(dirs);
  if (!values.allFinite()) throw NumericalError("contour export: non-finite support value");
  std::string out;
  if (dim == 2) {
    const std::vector<double> thetas = CircleGridAngles(grid.n_theta);
    out = "theta,h\n";
    for (Eigen::Index i = 0; i < dirs.size(); ++i) {
      out += FormatDouble(thetas[static_cast<std::size_t>(i)]) + ',' + FormatDouble(values(i)) + '\n';
    }
    return out;
  }
  if (dim == 3) {
    const std::vector<double> phis = CircleGridAngles(grid.n_phi);
    out = "phi,theta,h\n";
    for (Eigen::Index a = 0; a < grid.n_phi; ++a) {
      for (Eigen::Index e = 0; e < grid.n_elevation; ++e) {
        const double theta = -std::numbers::pi / 2 +
                             std::numbers::pi * static_cast<double>(e) /
                                 static_cast<double>(grid.n_elevation - 1);
        out += FormatDouble(phis[static_cast<std::size_t>(a)]) + ',' + FormatDouble(theta) + ',' +
               FormatDouble(values(a * grid.n_elevation + e)) + '\n';
      }
    }
    return out;
  }
  return DirectionValuesToCsv(dirs, values);
}

}  // namespace suplearn
