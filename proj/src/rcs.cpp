#include "srtfd/rcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "srtfd/linalg.hpp"

namespace srtfd {
namespace rcs {

namespace {

ClusterSummary summarize_members(int id, const std::vector<FeatureVec>& batch,
                                 const std::vector<std::size_t>& members) {
  ClusterSummary s;
  s.id = id;
  s.count = static_cast<int>(members.size());
  s.member_ids.assign(members.begin(), members.end());
  if (members.empty()) return s;
  const std::size_t d = batch[members[0]].size();
  s.mean.assign(d, 0.0);
  for (std::size_t i : members)
    for (std::size_t k = 0; k < d; ++k) s.mean[k] += batch[i][k];
  for (double& v : s.mean) v /= static_cast<double>(members.size());
  s.diag_variance.assign(d, 0.0);
  for (std::size_t i : members)
    for (std::size_t k = 0; k < d; ++k) {
      const double dv = batch[i][k] - s.mean[k];
      s.diag_variance[k] += dv * dv;
    }
  for (double& v : s.diag_variance)
    v = std::max(v / static_cast<double>(members.size()), kVarianceFloor);
  return s;
}

std::size_t nearest_centroid(const std::vector<std::vector<double>>& centroids,
                             const FeatureVec& x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(centroids[c], x);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

std::vector<ClusterSummary> cluster_batch(const std::vector<FeatureVec>& batch,
                                          const RcsConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("cluster_batch: empty batch");
  if (cfg.cluster_count < 1) throw std::invalid_argument("cluster_batch: uc must be >= 1");
  const std::size_t n = batch.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(cfg.cluster_count), n);

  std::vector<ClusterSummary> out;
  if (k == n) {
    // Paper rule: no clustering when uc reaches the batch size.
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(summarize_members(static_cast<int>(i), batch, {i}));
    return out;
  }

  Rng rng(cfg.kmeans.seed);

  // Seed centroids with k distinct samples.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::vector<std::vector<double>> centroids(k);
  for (std::size_t c = 0; c < k; ++c) centroids[c] = batch[perm[c]];

  // Sculley-style mini-batch updates with per-centroid streaming rates.
  std::vector<int64_t> assign_count(k, 0);
  const std::size_t mb = std::max<std::size_t>(1, static_cast<std::size_t>(cfg.kmeans.minibatch_size));
  std::uniform_int_distribution<std::size_t> sample(0, n - 1);
  std::vector<std::size_t> minibatch(mb);
  std::vector<std::size_t> cached(mb);
  for (int iter = 0; iter < cfg.kmeans.max_iters; ++iter) {
    for (std::size_t i = 0; i < mb; ++i) minibatch[i] = sample(rng);
    for (std::size_t i = 0; i < mb; ++i) cached[i] = nearest_centroid(centroids, batch[minibatch[i]]);
    for (std::size_t i = 0; i < mb; ++i) {
      const std::size_t c = cached[i];
      const double lr = 1.0 / static_cast<double>(++assign_count[c]);
      const FeatureVec& x = batch[minibatch[i]];
      std::vector<double>& ctr = centroids[c];
      for (std::size_t dim = 0; dim < ctr.size(); ++dim)
        ctr[dim] = (1.0 - lr) * ctr[dim] + lr * x[dim];
    }
  }

  // Final full-batch assignment; empty clusters are reseeded at the point
  // farthest from its nearest centroid.
  std::vector<std::size_t> assignment(n);
  for (std::size_t round = 0; round <= k; ++round) {
    for (std::size_t i = 0; i < n; ++i) assignment[i] = nearest_centroid(centroids, batch[i]);
    std::vector<int64_t> counts(k, 0);
    for (std::size_t a : assignment) ++counts[a];
    std::size_t empty = k;
    for (std::size_t c = 0; c < k; ++c)
      if (counts[c] == 0) {
        empty = c;
        break;
      }
    if (empty == k) break;
    std::size_t farthest = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = squared_distance(centroids[assignment[i]], batch[i]);
      if (d > far_d) {
        far_d = d;
        farthest = i;
      }
    }
    centroids[empty] = batch[farthest];
  }

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < n; ++i) members[assignment[i]].push_back(i);
  out.reserve(k);
  for (std::size_t c = 0; c < k; ++c)
    out.push_back(summarize_members(static_cast<int>(c), batch, members[c]));
  return out;
}

double kl_gaussian(const ClusterSummary& p, const ClusterSummary& q) {
  if (p.mean.size() != q.mean.size() || p.diag_variance.size() != q.diag_variance.size())
    throw ShapeError("kl_gaussian: dimension mismatch");
  double acc = 0.0;
  for (std::size_t kk = 0; kk < p.mean.size(); ++kk) {
    const double vp = p.diag_variance[kk];
    const double vq = q.diag_variance[kk];
    const double dm = q.mean[kk] - p.mean[kk];
    acc += vp / vq + dm * dm / vq - 1.0 + std::log(vq / vp);
  }
  return 0.5 * acc;
}

double symmetric_kl(const ClusterSummary& p, const ClusterSummary& q) {
  return 0.5 * (kl_gaussian(p, q) + kl_gaussian(q, p));
}

FilteredBatch filter_redundant(const std::vector<ClusterSummary>& batch_clusters,
                               const std::vector<ClusterSummary>& buffer_summaries,
                               const RcsConfig& cfg) {
  FilteredBatch out;
  out.kl_matrix.assign(buffer_summaries.size(),
                       std::vector<double>(batch_clusters.size(), 0.0));
  for (std::size_t i = 0; i < buffer_summaries.size(); ++i)
    for (std::size_t j = 0; j < batch_clusters.size(); ++j)
      out.kl_matrix[i][j] = cfg.symmetrized_kl
                                ? symmetric_kl(buffer_summaries[i], batch_clusters[j])
                                : kl_gaussian(buffer_summaries[i], batch_clusters[j]);

  for (std::size_t j = 0; j < batch_clusters.size(); ++j) {
    bool redundant = false;
    if (!buffer_summaries.empty()) {
      double min_div = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < buffer_summaries.size(); ++i)
        min_div = std::min(min_div, out.kl_matrix[i][j]);
      redundant = min_div <= cfg.kl_threshold;
    }
    if (redundant) {
      out.dropped.push_back(batch_clusters[j]);
    } else {
      out.surviving.push_back(batch_clusters[j]);
      for (uint64_t m : batch_clusters[j].member_ids)
        out.surviving_samples.push_back(static_cast<std::size_t>(m));
    }
  }
  std::sort(out.surviving_samples.begin(), out.surviving_samples.end());
  return out;
}

std::vector<std::size_t> farthest_point_order(const std::vector<FeatureVec>& points) {
  const std::size_t n = points.size();
  if (n == 0) return {};
  if (n == 1) return {0};

  std::size_t best_i = 0, best_j = 1;
  double best_d = -1.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = squared_distance(points[i], points[j]);
      if (d > best_d) {  // ties keep the lowest index pair
        best_d = d;
        best_i = i;
        best_j = j;
      }
    }

  std::vector<std::size_t> order{best_i, best_j};
  std::vector<bool> taken(n, false);
  taken[best_i] = taken[best_j] = true;
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    if (taken[i]) continue;
    min_dist[i] = std::min(squared_distance(points[i], points[best_i]),
                           squared_distance(points[i], points[best_j]));
  }
  while (order.size() < n) {
    std::size_t pick = n;
    double pick_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (min_dist[i] > pick_d) {
        pick_d = min_dist[i];
        pick = i;
      }
    }
    taken[pick] = true;
    order.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      min_dist[i] = std::min(min_dist[i], squared_distance(points[i], points[pick]));
    }
  }
  return order;
}

CoresetSelection farthest_point_coreset(
    const std::vector<FeatureVec>& candidates, std::size_t target_size,
    std::optional<std::pair<std::size_t, std::size_t>> seed_pair) {
  CoresetSelection out;
  const std::size_t n = candidates.size();
  if (n == 0) {
    out.clamped = target_size > 0;
    return out;
  }
  if (n >= 2 && target_size < 2 && target_size < n)
    throw std::invalid_argument("farthest_point_coreset: target size must be >= 2");

  std::vector<std::size_t> order;
  if (seed_pair) {
    // Caller-forced initial pair, then the usual greedy extension.
    const auto [a, b] = *seed_pair;
    if (a >= n || b >= n || a == b)
      throw std::invalid_argument("farthest_point_coreset: invalid seed pair");
    std::vector<bool> taken(n, false);
    taken[a] = taken[b] = true;
    order = {a, b};
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i])
        min_dist[i] = std::min(squared_distance(candidates[i], candidates[a]),
                               squared_distance(candidates[i], candidates[b]));
    while (order.size() < n) {
      std::size_t pick = n;
      double pick_d = -1.0;
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i] && min_dist[i] > pick_d) {
          pick_d = min_dist[i];
          pick = i;
        }
      taken[pick] = true;
      order.push_back(pick);
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i])
          min_dist[i] = std::min(min_dist[i], squared_distance(candidates[i], candidates[pick]));
    }
  } else {
    order = farthest_point_order(candidates);
  }

  if (target_size >= n) {
    out.indices = std::move(order);
    out.clamped = target_size > n;
  } else {
    out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(target_size));
  }
  return out;
}

std::size_t coreset_size(double ratio, std::size_t surviving_count) {
  if (ratio <= 0.0 || ratio > 1.0)
    throw std::invalid_argument("coreset_size: ratio must be in (0,1]");
  const auto wanted =
      static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(surviving_count)));
  return std::min(wanted, surviving_count);
}

}  // namespace rcs
}  // namespace srtfd
