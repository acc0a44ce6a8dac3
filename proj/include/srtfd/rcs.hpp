#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "srtfd/common.hpp"

namespace srtfd {
namespace rcs {

struct MiniBatchKMeansConfig {
  int minibatch_size = 64;
  int max_iters = 50;
  uint64_t seed = 0;
};

struct RcsConfig {
  int cluster_count = 3;      // uc; clustering is skipped when uc >= batch size
  double kl_threshold = 1.0;  // tau; a cluster is redundant when its min divergence <= tau
  double coreset_ratio = 0.6;
  bool symmetrized_kl = true;  // 0.5*[KL(p||q)+KL(q||p)]; false = directed KL(buffer||batch)
  MiniBatchKMeansConfig kmeans;
};

struct FilteredBatch {
  std::vector<ClusterSummary> surviving;
  std::vector<ClusterSummary> dropped;
  std::vector<std::vector<double>> kl_matrix;    // [buffer class][batch cluster]
  std::vector<std::size_t> surviving_samples;    // union of surviving members, ascending
};

/// Mini-batch k-means over one arriving batch with k = min(uc, |batch|).
/// When k equals the batch size each sample forms its own cluster. Summaries
/// use the final full-batch assignment, not the running centroids.
std::vector<ClusterSummary> cluster_batch(const std::vector<FeatureVec>& batch,
                                          const RcsConfig& cfg);

/// Closed-form KL divergence between diagonal Gaussians:
/// 0.5 * sum_k [ vp/vq + (mq-mp)^2/vq - 1 + ln(vq/vp) ].
/// Both summaries must have matching dimension and floored variances.
double kl_gaussian(const ClusterSummary& p, const ClusterSummary& q);

double symmetric_kl(const ClusterSummary& p, const ClusterSummary& q);

/// Drops every batch cluster whose minimum divergence to any buffer class is
/// <= tau; with an empty buffer everything survives. The divergence matrix is
/// fully populated for auditing.
FilteredBatch filter_redundant(const std::vector<ClusterSummary>& batch_clusters,
                               const std::vector<ClusterSummary>& buffer_summaries,
                               const RcsConfig& cfg);

struct CoresetSelection {
  std::vector<std::size_t> indices;
  bool clamped = false;  // target size exceeded the candidate count
};

/// Greedy max-min-distance ordering: the globally farthest pair first (ties
/// broken by lowest index pair), then the candidate maximizing its minimum
/// distance to the selected set.
std::vector<std::size_t> farthest_point_order(const std::vector<FeatureVec>& points);

/// First `target_size` entries of the farthest-point order; target sizes
/// beyond the candidate count return everything with `clamped` set.
CoresetSelection farthest_point_coreset(
    const std::vector<FeatureVec>& candidates, std::size_t target_size,
    std::optional<std::pair<std::size_t, std::size_t>> seed_pair = std::nullopt);

/// min(ceil(ratio * surviving), surviving)
std::size_t coreset_size(double ratio, std::size_t surviving_count);

}  // namespace rcs
}  // namespace srtfd
