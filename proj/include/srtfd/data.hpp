#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srtfd/common.hpp"

namespace srtfd {
namespace data {

struct SourceFile {
  std::string path;
  bool has_header = false;
  bool has_condition = false;  // extra trailing condition column
};

/// Dataset description; the CSV schema is fixed as
/// feature_0,...,feature_{d-1},label[,condition].
struct DatasetManifest {
  std::string name;
  int feature_dim = 0;
  int class_count = 0;  // faults + normal (class 0)
  std::vector<int64_t> per_class_counts;
  int condition_count = 1;
  std::vector<SourceFile> source_files;

  static DatasetManifest from_json_text(const std::string& text);
  static DatasetManifest from_json_file(const std::string& path);
  std::string to_json_text() const;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<FeatureVec> features;
  std::vector<int> labels;
  std::vector<int> conditions;  // 0 when the source carries no condition column
};

/// Parses and validates every source file against the manifest: feature
/// dimension, class universe and per-class counts must all match.
Dataset load_csv(const DatasetManifest& manifest);

/// Writes the dataset back out in the manifest schema (single file,
/// condition column included when condition_count > 1).
void export_csv(const Dataset& dataset, const std::string& path, bool with_condition);

/// Gaussian blobs with unit within-class variance. Class 0 sits at the
/// origin; fault class k sits on coordinate axis (k-1) mod dim at distance
/// separations[k-1]. Requires class_count <= dim + 1 so the means stay apart.
Dataset synth_blobs(int class_count, int dim, const std::vector<int64_t>& per_class_counts,
                    const std::vector<double>& separations, Rng& rng);

/// Per-feature zero-mean unit-variance transform. Fit once on the
/// initialization pool, then applied streamwise; constant features pass
/// through unscaled.
class Standardizer {
 public:
  void fit(const std::vector<FeatureVec>& samples);
  FeatureVec apply(const FeatureVec& x) const;
  bool fitted() const { return !mean_.empty(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

}  // namespace data
}  // namespace srtfd
