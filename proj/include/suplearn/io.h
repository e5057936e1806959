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

#ifndef SUPLEARN_IO_H_
#define SUPLEARN_IO_H_

// File formats. Bulk numeric data is CSV with a header row; models and
// metadata are schema-versioned JSON. Numbers are written with 17
// significant digits so every double round-trips bit-exactly.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>

#include "json.hpp"
#include "suplearn/dynamics.h"
#include "suplearn/geometry.h"
#include "suplearn/regress_isnn.h"
#include "suplearn/regress_qp.h"
#include "suplearn/sampling.h"

namespace suplearn {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr char kMaxAffineSchema[] = "suplearn.max_affine";
inline constexpr char kIsnnSchema[] = "suplearn.isnn";
inline constexpr char kCloudSchema[] = "suplearn.point_cloud";
inline constexpr char kSamplesSchema[] = "suplearn.support_samples";
inline constexpr char kEnsembleSchema[] = "suplearn.input_ensemble";

struct Provenance {
  std::string generator;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> extra;
};

// Writes to `path` through a temporary sibling file and a rename.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& content);
std::string ReadFile(const std::filesystem::path& path);

std::string FormatDouble(double v);
// Parses a number, accepting a "deg" suffix (converted to radians).
double ParseAngleOrNumber(const std::string& text);

// Point clouds: columns x1..xd, one row per point.
std::string CloudToCsv(const PointCloud<double>& cloud);
PointCloud<double> CloudFromCsv(const std::string& text);
Json CloudToJson(const PointCloud<double>& cloud, const Provenance& prov);
PointCloud<double> CloudFromJson(const Json& j);

// Support samples: columns y1..yd,h.
std::string SamplesToCsv(const SupportSamples<double>& samples);
SupportSamples<double> SamplesFromCsv(const std::string& text);
Json SamplesToJson(const SupportSamples<double>& samples, const Provenance& prov);
SupportSamples<double> SamplesFromJson(const Json& j);

// Input ensembles: JSON header plus CSV body with columns path_id,t,u1..um.
Json EnsembleHeaderToJson(const InputPathEnsemble& ensemble);
std::string EnsembleToCsv(const InputPathEnsemble& ensemble);
InputPathEnsemble EnsembleFromFiles(const Json& header, const std::string& csv);

Json ModelToJson(const MaxAffineModel& model);
MaxAffineModel MaxAffineFromJson(const Json& j);
Json ModelToJson(const IsnnModel& model);
IsnnModel IsnnFromJson(const Json& j);

// Either model kind behind the SupportFunction interface.
struct LoadedModel {
  std::variant<MaxAffineModel, IsnnModel> model;
  SupportFunction<double> support;

  Eigen::Index dim() const { return support.dim(); }
  std::string kind() const;
};

LoadedModel LoadModel(const Json& j);
LoadedModel LoadModelFile(const std::filesystem::path& path);

// Direction files: CSV with columns y1..yd (a trailing h column is ignored).
DirectionSet<double> DirectionsFromCsv(const std::string& text);
std::string DirectionValuesToCsv(const DirectionSet<double>& dirs,
                                 const Eigen::VectorXd& values);

}  // namespace suplearn

#endif  // SUPLEARN_IO_H_
