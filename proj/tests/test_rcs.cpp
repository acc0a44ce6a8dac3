#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "srtfd/rcs.hpp"

using namespace srtfd;
using namespace srtfd::rcs;

namespace {

ClusterSummary gaussian_1d(double mean, double variance) {
  ClusterSummary s;
  s.count = 2;
  s.mean = {mean};
  s.diag_variance = {std::max(variance, kVarianceFloor)};
  return s;
}

ClusterSummary random_summary(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 2.0);
  std::uniform_real_distribution<double> v(0.0, 3.0);
  ClusterSummary s;
  s.count = 5;
  for (int k = 0; k < dim; ++k) {
    s.mean.push_back(g(rng));
    s.diag_variance.push_back(std::max(v(rng), kVarianceFloor));
  }
  return s;
}

std::vector<FeatureVec> blob(double cx, double cy, int n, double sigma, Rng& rng) {
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<FeatureVec> out;
  for (int i = 0; i < n; ++i) out.push_back({cx + g(rng), cy + g(rng)});
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("rcs");

TEST_CASE("uc equal to the batch size skips clustering") {
  RcsConfig cfg;
  cfg.cluster_count = 3;
  const std::vector<FeatureVec> batch{{0.0, 0.0}, {5.0, 0.0}, {0.0, 5.0}};
  const auto clusters = cluster_batch(batch, cfg);
  REQUIRE(clusters.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(clusters[i].count == 1);
    CHECK(clusters[i].mean == batch[i]);
    CHECK(clusters[i].diag_variance == FeatureVec{kVarianceFloor, kVarianceFloor});
    CHECK(clusters[i].member_ids == std::vector<uint64_t>{i});
  }
}

TEST_CASE("uc = 1 returns the exact batch mean") {
  RcsConfig cfg;
  cfg.cluster_count = 1;
  Rng rng(11);
  const auto batch = blob(3.0, -1.0, 40, 1.0, rng);
  const auto clusters = cluster_batch(batch, cfg);
  REQUIRE(clusters.size() == 1);
  FeatureVec mean(2, 0.0);
  for (const auto& x : batch)
    for (std::size_t k = 0; k < 2; ++k) mean[k] += x[k];
  for (double& v : mean) v /= static_cast<double>(batch.size());
  CHECK(clusters[0].mean == mean);
  CHECK(clusters[0].count == 40);
}

TEST_CASE("two separated blobs recover the blob means (Lloyd oracle)") {
  Rng rng(21);
  auto batch = blob(0.0, 0.0, 120, 0.4, rng);
  const auto second = blob(10.0, 0.0, 120, 0.4, rng);
  batch.insert(batch.end(), second.begin(), second.end());

  RcsConfig cfg;
  cfg.cluster_count = 2;
  cfg.kmeans.seed = 3;
  cfg.kmeans.max_iters = 80;
  const auto clusters = cluster_batch(batch, cfg);
  REQUIRE(clusters.size() == 2);

  const auto lloyd = oracles::lloyd_kmeans(batch, {{0.0, 0.0}, {10.0, 0.0}});
  for (const auto& c : clusters) {
    double best = 1e18;
    for (const auto& ref : lloyd)
      best = std::min(best, std::hypot(c.mean[0] - ref[0], c.mean[1] - ref[1]));
    CHECK(best < 0.1);
  }
  // Blob means themselves are equally close.
  for (const auto& c : clusters) {
    const double d0 = std::hypot(c.mean[0] - 0.0, c.mean[1] - 0.0);
    const double d1 = std::hypot(c.mean[0] - 10.0, c.mean[1] - 0.0);
    CHECK(std::min(d0, d1) < 0.1);
  }
}

TEST_CASE("every batch point lands in exactly one cluster") {
  Rng rng(31);
  auto batch = blob(0.0, 0.0, 30, 1.0, rng);
  const auto b2 = blob(6.0, 6.0, 25, 1.0, rng);
  batch.insert(batch.end(), b2.begin(), b2.end());
  RcsConfig cfg;
  cfg.cluster_count = 4;
  cfg.kmeans.seed = 9;
  const auto clusters = cluster_batch(batch, cfg);
  std::set<uint64_t> seen;
  std::size_t total = 0;
  for (const auto& c : clusters) {
    CHECK(c.count >= 1);  // empty clusters get reseeded
    total += c.member_ids.size();
    seen.insert(c.member_ids.begin(), c.member_ids.end());
  }
  CHECK(total == batch.size());
  CHECK(seen.size() == batch.size());
}

TEST_CASE("KL of identical summaries is zero") {
  Rng rng(41);
  const auto s = random_summary(4, rng);
  CHECK(kl_gaussian(s, s) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(symmetric_kl(s, s) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("unit-variance 1-D KL with unit mean gap is one half") {
  const auto p = gaussian_1d(0.0, 1.0);
  const auto q = gaussian_1d(1.0, 1.0);
  CHECK(kl_gaussian(p, q) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closed-form KL matches quadrature") {
  const auto p = gaussian_1d(0.0, 1.0);
  const auto q = gaussian_1d(0.0, 4.0);
  CHECK(std::abs(kl_gaussian(p, q) - oracles::quadrature_kl_1d(0.0, 1.0, 0.0, 4.0)) < 1e-4);

  Rng rng(51);
  std::uniform_real_distribution<double> m(-3.0, 3.0);
  std::uniform_real_distribution<double> v(0.2, 5.0);
  for (int i = 0; i < 25; ++i) {
    const double mp = m(rng), mq = m(rng), vp = v(rng), vq = v(rng);
    const double closed = kl_gaussian(gaussian_1d(mp, vp), gaussian_1d(mq, vq));
    CHECK(std::abs(closed - oracles::quadrature_kl_1d(mp, vp, mq, vq)) < 1e-4);
  }
}

TEST_CASE("KL is nonnegative and zero only at identity (property)") {
  Rng rng(61);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_summary(3, rng);
    const auto q = random_summary(3, rng);
    CHECK(kl_gaussian(p, q) >= 0.0);
    CHECK(kl_gaussian(p, p) == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("KL rejects mismatched dimensions") {
  Rng rng(71);
  CHECK_THROWS_AS(kl_gaussian(random_summary(2, rng), random_summary(3, rng)), ShapeError);
}

TEST_CASE("empty buffer lets every cluster survive") {
  RcsConfig cfg;
  cfg.cluster_count = 3;
  cfg.kl_threshold = 10.0;
  const std::vector<FeatureVec> batch{{0.0, 0.0}, {1.0, 1.0}, {9.0, 9.0}};
  const auto clusters = cluster_batch(batch, cfg);
  const auto filtered = filter_redundant(clusters, {}, cfg);
  CHECK(filtered.surviving.size() == clusters.size());
  CHECK(filtered.dropped.empty());
  CHECK(filtered.surviving_samples.size() == batch.size());
}

TEST_CASE("a cluster matching a buffer class is dropped") {
  Rng rng(81);
  const auto pts = blob(2.0, 2.0, 50, 0.5, rng);
  RcsConfig cfg;
  cfg.cluster_count = 1;
  cfg.kl_threshold = 0.1;
  const auto clusters = cluster_batch(pts, cfg);
  ClusterSummary buffer_summary = clusters[0];  // identical distribution
  buffer_summary.id = 4;
  const auto filtered = filter_redundant(clusters, {buffer_summary}, cfg);
  CHECK(filtered.surviving.empty());
  REQUIRE(filtered.dropped.size() == 1);
  CHECK(filtered.kl_matrix[0][0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("tau = 0 drops only exact-zero divergences (brute force over the matrix)") {
  Rng rng(91);
  std::vector<ClusterSummary> clusters;
  for (int i = 0; i < 5; ++i) {
    auto s = random_summary(2, rng);
    s.id = i;
    s.member_ids = {static_cast<uint64_t>(i)};
    s.count = 1;
    clusters.push_back(std::move(s));
  }
  std::vector<ClusterSummary> buffer{clusters[2]};  // one exact duplicate
  RcsConfig cfg;
  cfg.kl_threshold = 0.0;
  const auto filtered = filter_redundant(clusters, buffer, cfg);

  for (std::size_t j = 0; j < clusters.size(); ++j) {
    double min_div = 1e300;
    for (std::size_t i = 0; i < buffer.size(); ++i)
      min_div = std::min(min_div, filtered.kl_matrix[i][j]);
    const bool dropped_expected = min_div <= 0.0;
    bool dropped = false;
    for (const auto& d : filtered.dropped)
      if (d.id == clusters[j].id) dropped = true;
    CHECK(dropped == dropped_expected);
  }
  CHECK(filtered.dropped.size() == 1);
  CHECK(filtered.dropped[0].id == 2);
}

TEST_CASE("directed mode uses KL(buffer || batch) per the divergence definition") {
  const auto p = gaussian_1d(0.0, 1.0);
  const auto q = gaussian_1d(2.0, 3.0);
  RcsConfig cfg;
  cfg.symmetrized_kl = false;
  const auto filtered = filter_redundant({q}, {p}, cfg);
  CHECK(filtered.kl_matrix[0][0] == doctest::Approx(kl_gaussian(p, q)).epsilon(1e-12));
}

TEST_CASE("farthest pair wins on the 1-D example {0, 1, 10}") {
  const std::vector<FeatureVec> pts{{0.0}, {1.0}, {10.0}};
  const auto sel = farthest_point_coreset(pts, 2);
  CHECK_FALSE(sel.clamped);
  std::set<std::size_t> got(sel.indices.begin(), sel.indices.end());
  CHECK(got == std::set<std::size_t>{0, 2});
}

TEST_CASE("selecting everything returns every candidate") {
  Rng rng(101);
  const auto pts = blob(0.0, 0.0, 7, 2.0, rng);
  const auto sel = farthest_point_coreset(pts, 7);
  CHECK_FALSE(sel.clamped);
  std::set<std::size_t> got(sel.indices.begin(), sel.indices.end());
  CHECK(got.size() == 7);

  const auto clamped = farthest_point_coreset(pts, 12);
  CHECK(clamped.clamped);
  CHECK(clamped.indices.size() == 7);
}

TEST_CASE("greedy dispersion beats the 90th percentile of all subsets") {
  Rng rng(111);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int inst = 0; inst < 30; ++inst) {
    std::vector<FeatureVec> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({u(rng), u(rng)});
    const auto sel = farthest_point_coreset(pts, 4);
    const double greedy = oracles::min_pairwise_distance(pts, sel.indices);
    auto all = oracles::all_subset_min_distances(pts, 4);
    std::sort(all.begin(), all.end());
    const double p90 = all[static_cast<std::size_t>(std::ceil(0.9 * all.size())) - 1];
    CHECK(greedy >= p90);
  }
}

TEST_CASE("selection is permutation-invariant as a point set") {
  Rng rng(121);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<FeatureVec> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({u(rng), u(rng)});
  const auto sel = farthest_point_coreset(pts, 4);

  std::vector<FeatureVec> reversed(pts.rbegin(), pts.rend());
  const auto sel_rev = farthest_point_coreset(reversed, 4);

  auto as_points = [](const std::vector<FeatureVec>& p, const std::vector<std::size_t>& idx) {
    std::vector<FeatureVec> out;
    for (std::size_t i : idx) out.push_back(p[i]);
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(as_points(pts, sel.indices) == as_points(reversed, sel_rev.indices));
}

TEST_CASE("the first two picks realize the maximum pairwise distance") {
  Rng rng(131);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<FeatureVec> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({u(rng), u(rng), u(rng)});
  const auto sel = farthest_point_coreset(pts, 5);
  double dmax = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      dmax = std::max(dmax, squared_distance(pts[i], pts[j]));
  CHECK(squared_distance(pts[sel.indices[0]], pts[sel.indices[1]]) == doctest::Approx(dmax));
}

TEST_CASE("coreset size follows the ceiling rule") {
  CHECK(coreset_size(0.6, 0) == 0);
  CHECK(coreset_size(0.6, 10) == 6);
  CHECK(coreset_size(0.6, 11) == 7);
  CHECK(coreset_size(1.0, 11) == 11);
  CHECK(coreset_size(0.05, 10) == 1);
  CHECK_THROWS_AS(coreset_size(0.0, 5), std::invalid_argument);
}

TEST_SUITE_END();
