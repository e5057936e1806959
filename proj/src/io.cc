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

#include "suplearn/io.h"

#include <unistd.h>

#include <charconv>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string_view>

#include "suplearn/errors.h"

namespace suplearn {
namespace {

std::vector<std::string> SplitLine(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view cell = line.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
      cell.remove_suffix(1);
    }
    out.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Whole-string parse. Unlike stod this accepts subnormals.
bool ParseDouble(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && end == text.data() + text.size();
}

double ParseCell(const std::string& cell, std::size_t line_no, const char* what) {
  double v = 0.0;
  if (!ParseDouble(cell, v)) {
    throw ValidationError(std::string(what) + ": line " + std::to_string(line_no) +
                          ": cannot parse number '" + cell + "'");
  }
  return v;
}

// Parsed CSV: header cells plus a row-major numeric table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table ParseCsv(const std::string& text, const char* what) {
  Table table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') continue;
    std::vector<std::string> cells = SplitLine(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ValidationError(std::string(what) + ": line " + std::to_string(line_no) +
                            ": expected " + std::to_string(table.header.size()) +
                            " columns, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(ParseCell(c, line_no, what));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ValidationError(std::string(what) + ": missing header row");
  if (table.rows.empty()) throw ValidationError(std::string(what) + ": no data rows");
  return table;
}

// Columns named prefix1..prefixk, starting at the first column.
Eigen::Index CountPrefixed(const std::vector<std::string>& header, const std::string& prefix) {
  Eigen::Index k = 0;
  while (static_cast<std::size_t>(k) < header.size() &&
         header[static_cast<std::size_t>(k)] == prefix + std::to_string(k + 1)) {
    ++k;
  }
  return k;
}

std::string Header(const std::string& prefix, Eigen::Index count) {
  std::string out;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (i > 0) out += ',';
    out += prefix + std::to_string(i + 1);
  }
  return out;
}

void AppendRow(std::string& out, const Eigen::Ref<const Eigen::VectorXd>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += FormatDouble(v(i));
  }
}

Json MatrixToJson(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json VectorToJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::MatrixXd MatrixFromJson(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ValidationError(what + ": expected a nonempty array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError(what + ": ragged row " + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ValidationError(what + ": non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

Eigen::VectorXd VectorFromJson(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError(what + ": non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

const Json& Field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(what + ": missing field '" + key + "'");
  }
  return j.at(key);
}

Json ProvenanceToJson(const Provenance& prov) {
  Json out = {{"generator", prov.generator}, {"seed", prov.seed}};
  for (const auto& [k, v] : prov.extra) out[k] = v;
  return out;
}

void CheckSchema(const Json& j, const char* schema) {
  const std::string what = std::string(schema);
  const Json& s = Field(j, "schema", what);
  if (!s.is_string() || s.get<std::string>() != schema) {
    throw ValidationError("expected schema '" + what + "', got " + s.dump());
  }
  const Json& v = Field(j, "version", what);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    throw ValidationError("unsupported " + what + " schema version " + v.dump());
  }
}

// Keeps columns that are already unit vectors bit-exact; normalizes others.
DirectionSet<double> DirectionsFromColumns(Eigen::MatrixXd m) {
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    const double norm = m.col(i).norm();
    if (!(norm > 0.0)) {
      throw ValidationError("direction " + std::to_string(i) + " is zero");
    }
    if (std::abs(norm - 1.0) > kUnitNormTolerance) m.col(i) /= norm;
  }
  return DirectionSet<double>(std::move(m));
}

}  // namespace

void WriteFileAtomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ValidationError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ValidationError("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseAngleOrNumber(const std::string& text) {
  std::string body = text;
  while (!body.empty() && body.back() == ' ') body.pop_back();
  bool degrees = false;
  if (body.size() > 3 && body.compare(body.size() - 3, 3, "deg") == 0) {
    degrees = true;
    body.resize(body.size() - 3);
  }
  double v = 0.0;
  if (!ParseDouble(body, v)) {
    throw ValidationError("cannot parse number '" + text + "'");
  }
  return degrees ? v * std::numbers::pi / 180.0 : v;
}

std::string CloudToCsv(const PointCloud<double>& cloud) {
  std::string out = Header("x", cloud.dim()) + "\n";
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    AppendRow(out, cloud[i]);
    out += '\n';
  }
  return out;
}

PointCloud<double> CloudFromCsv(const std::string& text) {
  const Table t = ParseCsv(text, "point cloud CSV");
  const Eigen::Index d = CountPrefixed(t.header, "x");
  if (d == 0) throw ValidationError("point cloud CSV: header must start with x1");
  Eigen::MatrixXd m(d, static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (Eigen::Index k = 0; k < d; ++k) {
      m(k, static_cast<Eigen::Index>(r)) = t.rows[r][static_cast<std::size_t>(k)];
    }
  }
  return PointCloud<double>(std::move(m));
}

Json CloudToJson(const PointCloud<double>& cloud, const Provenance& prov) {
  return {{"schema", kCloudSchema},
          {"version", kSchemaVersion},
          {"dim", cloud.dim()},
          {"count", cloud.size()},
          {"provenance", ProvenanceToJson(prov)},
          {"points", MatrixToJson(cloud.matrix().transpose())}};
}

PointCloud<double> CloudFromJson(const Json& j) {
  CheckSchema(j, kCloudSchema);
  Eigen::MatrixXd rows = MatrixFromJson(Field(j, "points", kCloudSchema), "points");
  return PointCloud<double>(rows.transpose());
}

std::string SamplesToCsv(const SupportSamples<double>& samples) {
  std::string out = Header("y", samples.dim()) + ",h\n";
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    AppendRow(out, samples.directions[i]);
    out += ',' + FormatDouble(samples.values(i)) + '\n';
  }
  return out;
}

SupportSamples<double> SamplesFromCsv(const std::string& text) {
  const Table t = ParseCsv(text, "support samples CSV");
  const Eigen::Index d = CountPrefixed(t.header, "y");
  if (d == 0 || static_cast<std::size_t>(d) + 1 != t.header.size() || t.header.back() != "h") {
    throw ValidationError("support samples CSV: header must be y1..yd,h");
  }
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  Eigen::MatrixXd dirs(d, n);
  Eigen::VectorXd values(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = t.rows[static_cast<std::size_t>(r)];
    for (Eigen::Index k = 0; k < d; ++k) dirs(k, r) = row[static_cast<std::size_t>(k)];
    values(r) = row.back();
  }
  return SupportSamples<double>(DirectionsFromColumns(std::move(dirs)), std::move(values));
}

Json SamplesToJson(const SupportSamples<double>& samples, const Provenance& prov) {
  return {{"schema", kSamplesSchema},
          {"version", kSchemaVersion},
          {"dim", samples.dim()},
          {"count", samples.size()},
          {"provenance", ProvenanceToJson(prov)},
          {"directions", MatrixToJson(samples.directions.matrix().transpose())},
          {"values", VectorToJson(samples.values)}};
}

SupportSamples<double> SamplesFromJson(const Json& j) {
  CheckSchema(j, kSamplesSchema);
  Eigen::MatrixXd rows = MatrixFromJson(Field(j, "directions", kSamplesSchema), "directions");
  Eigen::VectorXd values = VectorFromJson(Field(j, "values", kSamplesSchema), "values");
  return SupportSamples<double>(DirectionsFromColumns(rows.transpose()), std::move(values));
}

Json EnsembleHeaderToJson(const InputPathEnsemble& ensemble) {
  return {{"schema", kEnsembleSchema},
          {"version", kSchemaVersion},
          {"num_paths", ensemble.num_paths()},
          {"input_dim", ensemble.input_dim()},
          {"lower", VectorToJson(ensemble.bounds.lower)},
          {"upper", VectorToJson(ensemble.bounds.upper)},
          {"time_grid", VectorToJson(ensemble.time_grid)},
          {"length_scale", ensemble.length_scale},
          {"seed", ensemble.seed}};
}

std::string EnsembleToCsv(const InputPathEnsemble& ensemble) {
  std::string out = "path_id,t," + Header("u", ensemble.input_dim()) + "\n";
  for (Eigen::Index p = 0; p < ensemble.num_paths(); ++p) {
    const Eigen::MatrixXd& path = ensemble.paths[static_cast<std::size_t>(p)];
    for (Eigen::Index k = 0; k < path.rows(); ++k) {
      out += std::to_string(p) + ',' + FormatDouble(ensemble.time_grid(k)) + ',';
      AppendRow(out, path.row(k).transpose());
      out += '\n';
    }
  }
  return out;
}

InputPathEnsemble EnsembleFromFiles(const Json& header, const std::string& csv) {
  CheckSchema(header, kEnsembleSchema);
  InputPathEnsemble out;
  out.bounds = Hyperrectangle(VectorFromJson(Field(header, "lower", kEnsembleSchema), "lower"),
                              VectorFromJson(Field(header, "upper", kEnsembleSchema), "upper"));
  out.time_grid = VectorFromJson(Field(header, "time_grid", kEnsembleSchema), "time_grid");
  out.length_scale = Field(header, "length_scale", kEnsembleSchema).get<double>();
  out.seed = Field(header, "seed", kEnsembleSchema).get<std::uint64_t>();
  const auto n = Field(header, "num_paths", kEnsembleSchema).get<Eigen::Index>();
  const Eigen::Index m = out.bounds.dim();
  const Eigen::Index k = out.time_grid.size();

  const Table t = ParseCsv(csv, "ensemble CSV");
  if (t.header.size() != static_cast<std::size_t>(m) + 2 || t.header[0] != "path_id" ||
      t.header[1] != "t") {
    throw ValidationError("ensemble CSV: header must be path_id,t,u1..um");
  }
  if (static_cast<Eigen::Index>(t.rows.size()) != n * k) {
    throw ValidationError("ensemble CSV: expected " + std::to_string(n * k) + " rows, got " +
                          std::to_string(t.rows.size()));
  }
  out.paths.assign(static_cast<std::size_t>(n), Eigen::MatrixXd(k, m));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto p = static_cast<Eigen::Index>(r) / k;
    const auto step = static_cast<Eigen::Index>(r) % k;
    if (t.rows[r][0] != static_cast<double>(p)) {
      throw ValidationError("ensemble CSV: rows out of order at data row " + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < m; ++c) {
      out.paths[static_cast<std::size_t>(p)](step, c) = t.rows[r][static_cast<std::size_t>(c) + 2];
    }
  }
  return out;
}

Json ModelToJson(const MaxAffineModel& model) {
  const QpDiagnostics& d = model.diagnostics;
  return {{"schema", kMaxAffineSchema},
          {"version", kSchemaVersion},
          {"mode", ToString(model.mode)},
          {"d", model.dim()},
          {"n_y", model.size()},
          {"anchors", MatrixToJson(model.anchors.matrix().transpose())},
          {"values", VectorToJson(model.values)},
          {"subgradients", MatrixToJson(model.subgradients)},
          {"diagnostics",
           {{"iterations", d.iterations},
            {"primal_residual", d.primal_residual},
            {"dual_residual", d.dual_residual},
            {"objective", d.objective},
            {"max_violation", d.max_violation},
            {"solver_violation", d.solver_violation},
            {"converged", d.converged},
            {"polished", d.polished},
            {"seconds", d.seconds}}}};
}

MaxAffineModel MaxAffineFromJson(const Json& j) {
  CheckSchema(j, kMaxAffineSchema);
  const std::string what = kMaxAffineSchema;
  MaxAffineModel model;
  model.mode = FitModeFromString(Field(j, "mode", what).get<std::string>());
  Eigen::MatrixXd anchors = MatrixFromJson(Field(j, "anchors", what), "anchors");
  model.anchors = DirectionSet<double>(anchors.transpose());
  model.values = VectorFromJson(Field(j, "values", what), "values");
  model.subgradients = MatrixFromJson(Field(j, "subgradients", what), "subgradients");
  CheckDimension(model.anchors.size(), model.values.size(), "max_affine values");
  CheckDimension(model.anchors.size(), model.subgradients.rows(), "max_affine subgradients");
  CheckDimension(model.anchors.dim(), model.subgradients.cols(), "max_affine subgradients");
  if (j.contains("d")) CheckDimension(j.at("d").get<Eigen::Index>(), model.dim(), "max_affine d");
  if (j.contains("diagnostics")) {
    const Json& dj = j.at("diagnostics");
    QpDiagnostics& d = model.diagnostics;
    d.iterations = dj.value("iterations", 0);
    d.primal_residual = dj.value("primal_residual", 0.0);
    d.dual_residual = dj.value("dual_residual", 0.0);
    d.objective = dj.value("objective", 0.0);
    d.max_violation = dj.value("max_violation", 0.0);
    d.solver_violation = dj.value("solver_violation", 0.0);
    d.converged = dj.value("converged", false);
    d.polished = dj.value("polished", false);
    d.seconds = dj.value("seconds", 0.0);
  }
  return model;
}

Json ModelToJson(const IsnnModel& model) {
  Json wy = Json::array();
  Json wz = Json::array();
  for (const auto& w : model.params.passthrough) wy.push_back(MatrixToJson(w));
  for (const auto& w : model.params.feedforward) wz.push_back(MatrixToJson(w));
  const AdamConfig& a = model.adam;
  return {{"schema", kIsnnSchema},
          {"version", kSchemaVersion},
          {"arch", {{"input_dim", model.arch.input_dim}, {"hidden", model.arch.hidden}}},
          {"W_y", std::move(wy)},
          {"W_z", std::move(wz)},
          {"training",
           {{"epochs", a.epochs},
            {"batch_size", a.batch_size},
            {"learning_rate", a.learning_rate},
            {"beta1", a.beta1},
            {"beta2", a.beta2},
            {"epsilon", a.epsilon},
            {"seed", a.seed},
            {"final_loss", model.loss_history.empty() ? Json(nullptr)
                                                      : Json(model.loss_history.back())},
            {"loss_history", model.loss_history},
            {"seconds", model.seconds}}}};
}

IsnnModel IsnnFromJson(const Json& j) {
  CheckSchema(j, kIsnnSchema);
  const std::string what = kIsnnSchema;
  IsnnModel model;
  const Json& arch = Field(j, "arch", what);
  model.arch.input_dim = Field(arch, "input_dim", what).get<Eigen::Index>();
  model.arch.hidden = Field(arch, "hidden", what).get<std::vector<Eigen::Index>>();
  model.arch.Validate();
  for (const Json& w : Field(j, "W_y", what)) {
    model.params.passthrough.push_back(MatrixFromJson(w, "W_y"));
  }
  for (const Json& w : Field(j, "W_z", what)) {
    model.params.feedforward.push_back(MatrixFromJson(w, "W_z"));
  }
  CheckIsnnShapes(model.params);
  CheckDimension(model.arch.input_dim, model.params.input_dim(), "isnn input_dim");
  CheckDimension(model.arch.num_hidden(),
                 static_cast<Eigen::Index>(model.params.feedforward.size()), "isnn layers");
  for (const auto& w : model.params.feedforward) {
    if (w.minCoeff() < 0.0) throw ValidationError("isnn: negative feedforward weight");
  }
  if (j.contains("training")) {
    const Json& t = j.at("training");
    model.adam.epochs = t.value("epochs", model.adam.epochs);
    model.adam.batch_size = t.value("batch_size", model.adam.batch_size);
    model.adam.learning_rate = t.value("learning_rate", model.adam.learning_rate);
    model.adam.beta1 = t.value("beta1", model.adam.beta1);
    model.adam.beta2 = t.value("beta2", model.adam.beta2);
    model.adam.epsilon = t.value("epsilon", model.adam.epsilon);
    model.adam.seed = t.value("seed", model.adam.seed);
    if (t.contains("loss_history")) {
      model.loss_history = t.at("loss_history").get<std::vector<double>>();
    }
    model.seconds = t.value("seconds", 0.0);
  }
  return model;
}

std::string LoadedModel::kind() const {
  return std::holds_alternative<MaxAffineModel>(model) ? kMaxAffineSchema : kIsnnSchema;
}

LoadedModel LoadModel(const Json& j) {
  if (!j.is_object() || !j.contains("schema") || !j.at("schema").is_string()) {
    throw ValidationError("model file has no schema field");
  }
  const std::string schema = j.at("schema").get<std::string>();
  if (schema == kMaxAffineSchema) {
    MaxAffineModel m = MaxAffineFromJson(j);
    SupportFunction<double> h = AsSupportFunction(m);
    return {std::move(m), std::move(h)};
  }
  if (schema == kIsnnSchema) {
    IsnnModel m = IsnnFromJson(j);
    SupportFunction<double> h = AsSupportFunction(m);
    return {std::move(m), std::move(h)};
  }
  throw ValidationError("unknown model schema '" + schema + "'");
}

LoadedModel LoadModelFile(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(ReadFile(path));
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return LoadModel(j);
}

DirectionSet<double> DirectionsFromCsv(const std::string& text) {
  const Table t = ParseCsv(text, "directions CSV");
  const Eigen::Index d = CountPrefixed(t.header, "y");
  if (d == 0) throw ValidationError("directions CSV: header must start with y1");
  Eigen::MatrixXd m(d, static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (Eigen::Index k = 0; k < d; ++k) {
      m(k, static_cast<Eigen::Index>(r)) = t.rows[r][static_cast<std::size_t>(k)];
    }
  }
  return DirectionsFromColumns(std::move(m));
}

std::string DirectionValuesToCsv(const DirectionSet<double>& dirs,
                                 const Eigen::VectorXd& values) {
  CheckDimension(dirs.size(), values.size(), "DirectionValuesToCsv");
  return SamplesToCsv(SupportSamples<double>(dirs, values));
}

}  // namespace suplearn
