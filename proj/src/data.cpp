#include "srtfd/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace srtfd {
namespace data {

DatasetManifest DatasetManifest::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("manifest: not valid JSON");
  DatasetManifest m;
  m.name = j.at("name").get<std::string>();
  m.feature_dim = j.at("feature_dim").get<int>();
  m.class_count = j.at("class_count").get<int>();
  m.per_class_counts = j.at("per_class_counts").get<std::vector<int64_t>>();
  m.condition_count = j.value("condition_count", 1);
  for (const auto& f : j.at("source_files")) {
    SourceFile sf;
    sf.path = f.at("path").get<std::string>();
    sf.has_header = f.value("has_header", false);
    sf.has_condition = f.value("has_condition", false);
    m.source_files.push_back(std::move(sf));
  }
  if (m.feature_dim <= 0 || m.class_count <= 0)
    throw ValidationError("manifest: dimensions and class count must be positive");
  if (static_cast<int>(m.per_class_counts.size()) != m.class_count)
    throw ValidationError("manifest: per_class_counts length must equal class_count");
  for (int64_t c : m.per_class_counts)
    if (c <= 0) throw ValidationError("manifest: per-class counts must be positive");
  return m;
}

DatasetManifest DatasetManifest::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("manifest: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string DatasetManifest::to_json_text() const {
  nlohmann::json j;
  j["name"] = name;
  j["feature_dim"] = feature_dim;
  j["class_count"] = class_count;
  j["per_class_counts"] = per_class_counts;
  j["condition_count"] = condition_count;
  nlohmann::json files = nlohmann::json::array();
  for (const SourceFile& f : source_files) {
    nlohmann::json jf;
    jf["path"] = f.path;
    jf["has_header"] = f.has_header;
    jf["has_condition"] = f.has_condition;
    files.push_back(std::move(jf));
  }
  j["source_files"] = std::move(files);
  return j.dump(2);
}

namespace {

void parse_row(const std::string& line, std::size_t line_no, int feature_dim, bool has_condition,
               FeatureVec& features, int& label, int& condition) {
  features.clear();
  std::size_t pos = 0;
  const int expected = feature_dim + 1 + (has_condition ? 1 : 0);
  int field = 0;
  label = 0;
  condition = 0;
  while (pos <= line.size() && field < expected) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string cell = line.substr(pos, comma - pos);
    if (cell.empty()) throw ParseError("csv: empty field", line_no);
    char* end = nullptr;
    if (field < feature_dim) {
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size() || !std::isfinite(v))
        throw ParseError("csv: bad feature value '" + cell + "'", line_no);
      features.push_back(v);
    } else {
      const long v = std::strtol(cell.c_str(), &end, 10);
      if (end != cell.c_str() + cell.size() || v < 0)
        throw ParseError("csv: bad integer value '" + cell + "'", line_no);
      if (field == feature_dim)
        label = static_cast<int>(v);
      else
        condition = static_cast<int>(v);
    }
    ++field;
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  if (field != expected) throw ParseError("csv: wrong column count", line_no);
}

}  // namespace

Dataset load_csv(const DatasetManifest& manifest) {
  Dataset ds;
  ds.manifest = manifest;
  for (const SourceFile& sf : manifest.source_files) {
    std::ifstream in(sf.path);
    if (!in) throw ValidationError("load_csv: cannot open '" + sf.path + "'");
    std::string line;
    std::size_t line_no = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_no == 1 && sf.has_header) continue;
      if (line.empty()) continue;
      FeatureVec features;
      int label = 0, condition = 0;
      parse_row(line, line_no, manifest.feature_dim, sf.has_condition, features, label, condition);
      if (label >= manifest.class_count)
        throw ValidationError("load_csv: label " + std::to_string(label) +
                              " outside manifest class universe");
      ds.features.push_back(std::move(features));
      ds.labels.push_back(label);
      ds.conditions.push_back(condition);
      saw_data = true;
    }
    if (!saw_data) throw ValidationError("load_csv: '" + sf.path + "' holds no samples");
  }

  std::vector<int64_t> counts(static_cast<std::size_t>(manifest.class_count), 0);
  for (int l : ds.labels) ++counts[static_cast<std::size_t>(l)];
  for (int c = 0; c < manifest.class_count; ++c)
    if (counts[static_cast<std::size_t>(c)] != manifest.per_class_counts[static_cast<std::size_t>(c)])
      throw ValidationError("load_csv: class " + std::to_string(c) + " has " +
                            std::to_string(counts[static_cast<std::size_t>(c)]) +
                            " samples, manifest says " +
                            std::to_string(manifest.per_class_counts[static_cast<std::size_t>(c)]));
  for (int cond : ds.conditions)
    if (cond >= manifest.condition_count)
      throw ValidationError("load_csv: condition id outside manifest range");
  return ds;
}

void export_csv(const Dataset& dataset, const std::string& path, bool with_condition) {
  std::ofstream out(path);
  if (!out) throw ValidationError("export_csv: cannot open '" + path + "' for writing");
  char buf[32];
  for (std::size_t i = 0; i < dataset.features.size(); ++i) {
    for (double v : dataset.features[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ',';
    }
    out << dataset.labels[i];
    if (with_condition) out << ',' << dataset.conditions[i];
    out << '\n';
  }
}

Dataset synth_blobs(int class_count, int dim, const std::vector<int64_t>& per_class_counts,
                    const std::vector<double>& separations, Rng& rng) {
  if (class_count < 1 || dim < 1) throw std::invalid_argument("synth_blobs: bad shape");
  if (static_cast<int>(per_class_counts.size()) != class_count)
    throw std::invalid_argument("synth_blobs: per-class counts length mismatch");
  if (class_count > 1 && static_cast<int>(separations.size()) != class_count - 1)
    throw std::invalid_argument("synth_blobs: need one separation per fault class");
  for (double s : separations)
    if (s < 0.0) throw std::invalid_argument("synth_blobs: separations must be nonnegative");
  if (class_count > dim + 1)
    throw std::invalid_argument("synth_blobs: class count exceeds dim+1, means would collide");

  Dataset ds;
  ds.manifest.name = "synth";
  ds.manifest.feature_dim = dim;
  ds.manifest.class_count = class_count;
  ds.manifest.per_class_counts = per_class_counts;
  ds.manifest.condition_count = 1;

  std::normal_distribution<double> unit(0.0, 1.0);
  for (int cls = 0; cls < class_count; ++cls) {
    FeatureVec mean(static_cast<std::size_t>(dim), 0.0);
    if (cls > 0) mean[static_cast<std::size_t>(cls - 1)] = separations[static_cast<std::size_t>(cls - 1)];
    for (int64_t i = 0; i < per_class_counts[static_cast<std::size_t>(cls)]; ++i) {
      FeatureVec x(static_cast<std::size_t>(dim));
      for (int k = 0; k < dim; ++k) x[static_cast<std::size_t>(k)] = mean[static_cast<std::size_t>(k)] + unit(rng);
      ds.features.push_back(std::move(x));
      ds.labels.push_back(cls);
      ds.conditions.push_back(0);
    }
  }
  return ds;
}

void Standardizer::fit(const std::vector<FeatureVec>& samples) {
  if (samples.empty()) throw std::invalid_argument("standardizer: empty fit pool");
  const std::size_t d = samples[0].size();
  mean_.assign(d, 0.0);
  scale_.assign(d, 1.0);
  for (const FeatureVec& x : samples) {
    if (x.size() != d) throw ShapeError("standardizer: inconsistent dimensions");
    for (std::size_t k = 0; k < d; ++k) mean_[k] += x[k];
  }
  for (double& v : mean_) v /= static_cast<double>(samples.size());
  std::vector<double> var(d, 0.0);
  for (const FeatureVec& x : samples)
    for (std::size_t k = 0; k < d; ++k) {
      const double dv = x[k] - mean_[k];
      var[k] += dv * dv;
    }
  for (std::size_t k = 0; k < d; ++k) {
    const double sd = std::sqrt(var[k] / static_cast<double>(samples.size()));
    scale_[k] = sd > 1e-12 ? sd : 1.0;
  }
}

FeatureVec Standardizer::apply(const FeatureVec& x) const {
  if (x.size() != mean_.size()) throw ShapeError("standardizer: dimension mismatch");
  FeatureVec out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - mean_[k]) / scale_[k];
  return out;
}

}  // namespace data
}  // namespace srtfd
