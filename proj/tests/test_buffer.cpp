#include <algorithm>
#include <map>
#include <sstream>

#include "doctest.h"
#include "srtfd/buffer.hpp"

using namespace srtfd;

namespace {

BufferConfig small_config(std::size_t capacity, int dim = 2, uint64_t seed = 1) {
  BufferConfig cfg;
  cfg.capacity = capacity;
  cfg.feature_dim = dim;
  cfg.rng_seed = seed;
  return cfg;
}

BufferEntry entry(uint64_t id, int label, FeatureVec x,
                  SampleSource source = SampleSource::GroundTruth) {
  return {id, std::move(x), label, source, 0};
}

std::vector<BufferEntry> many(int label, int count, uint64_t first_id, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<BufferEntry> out;
  for (int i = 0; i < count; ++i)
    out.push_back(entry(first_id + static_cast<uint64_t>(i), label, {g(rng), g(rng)}));
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("buffer");

TEST_CASE("insert under capacity evicts nothing") {
  ReplayBuffer buf(small_config(10));
  Rng rng(1);
  const auto report = buf.insert(many(0, 4, 1, rng));
  CHECK(report.evicted_ids.empty());
  CHECK(buf.size() == 4);
}

TEST_CASE("overfilling one class evicts exactly the overflow from it") {
  ReplayBuffer buf(small_config(10));
  Rng rng(2);
  const auto report = buf.insert(many(3, 15, 1, rng));
  CHECK(report.evicted_ids.size() == 5);
  CHECK(buf.size() == 10);
  for (const BufferEntry* e : buf.entries()) CHECK(e->label == 3);
}

TEST_CASE("balanced eviction settles near an even class split") {
  ReplayBuffer buf(small_config(10));
  Rng rng(3);
  buf.insert(many(0, 8, 1, rng));
  buf.insert(many(1, 6, 100, rng));
  const auto counts = buf.class_counts();
  CHECK(buf.size() == 10);
  CHECK(std::abs(counts[0] - 5) <= 1);
  CHECK(std::abs(counts[1] - 5) <= 1);
  CHECK(counts[0] + counts[1] == 10);
}

TEST_CASE("ground-truth entries outlive pseudo entries within a class") {
  ReplayBuffer buf(small_config(6));
  std::vector<BufferEntry> entries;
  for (uint64_t i = 0; i < 5; ++i)
    entries.push_back(entry(i, 0, {0.0, 0.0}, SampleSource::GroundTruth));
  for (uint64_t i = 5; i < 10; ++i)
    entries.push_back(entry(i, 0, {1.0, 1.0}, SampleSource::Pseudo));
  const auto report = buf.insert(std::move(entries));
  CHECK(report.evicted_ids.size() == 4);
  for (uint64_t id : report.evicted_ids) CHECK(id >= 5);  // only pseudo evicted
  int gt = 0;
  for (const BufferEntry* e : buf.entries())
    if (e->source == SampleSource::GroundTruth) ++gt;
  CHECK(gt == 5);
}

TEST_CASE("capacity holds after arbitrary insert sequences") {
  ReplayBuffer buf(small_config(20));
  Rng rng(4);
  std::uniform_int_distribution<int> label(0, 4);
  std::uniform_int_distribution<int> chunk(1, 9);
  uint64_t next_id = 1;
  for (int round = 0; round < 40; ++round) {
    const int n = chunk(rng);
    auto entries = many(label(rng), n, next_id, rng);
    next_id += static_cast<uint64_t>(n);
    buf.insert(std::move(entries));
    CHECK(buf.size() <= 20);
  }
  CHECK(buf.size() == 20);
}

TEST_CASE("single-entry class summary is the point with floored variance") {
  ReplayBuffer buf(small_config(10));
  buf.insert({entry(7, 2, {1.5, -2.0})});
  const auto summaries = buf.class_summaries();
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].id == 2);
  CHECK(summaries[0].count == 1);
  CHECK(summaries[0].mean == FeatureVec{1.5, -2.0});
  CHECK(summaries[0].diag_variance == FeatureVec{kVarianceFloor, kVarianceFloor});
}

TEST_CASE("two-point summary: hand-computed population variance") {
  ReplayBuffer buf(small_config(10));
  buf.insert({entry(1, 0, {0.0, 0.0}), entry(2, 0, {2.0, 0.0})});
  const auto summaries = buf.class_summaries();
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].mean == FeatureVec{1.0, 0.0});
  CHECK(summaries[0].diag_variance[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(summaries[0].diag_variance[1] == kVarianceFloor);
}

TEST_CASE("summaries are invariant to insertion order") {
  Rng rng(5);
  auto batch = many(0, 12, 1, rng);
  auto permuted = batch;
  std::reverse(permuted.begin(), permuted.end());

  ReplayBuffer a(small_config(50));
  a.insert(batch);
  ReplayBuffer b(small_config(50));
  b.insert(permuted);

  const auto sa = a.class_summaries();
  const auto sb = b.class_summaries();
  REQUIRE(sa.size() == sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    for (std::size_t k = 0; k < sa[i].mean.size(); ++k) {
      CHECK(sa[i].mean[k] == doctest::Approx(sb[i].mean[k]).epsilon(1e-12));
      CHECK(sa[i].diag_variance[k] == doctest::Approx(sb[i].diag_variance[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("summary statistics match a brute-force recomputation exactly") {
  ReplayBuffer buf(small_config(100, 3));
  Rng rng(6);
  std::normal_distribution<double> g(0.0, 2.0);
  std::vector<BufferEntry> entries;
  for (uint64_t i = 0; i < 60; ++i)
    entries.push_back(entry(i, static_cast<int>(i % 4), {g(rng), g(rng), g(rng)}));
  buf.insert(std::move(entries));

  std::map<uint64_t, const BufferEntry*> by_id;
  for (const BufferEntry* e : buf.entries()) by_id[e->id] = e;

  for (const ClusterSummary& s : buf.class_summaries()) {
    REQUIRE(s.count == static_cast<int>(s.member_ids.size()));
    FeatureVec mean(3, 0.0);
    for (uint64_t id : s.member_ids)
      for (std::size_t k = 0; k < 3; ++k) mean[k] += by_id.at(id)->features[k];
    for (double& v : mean) v /= static_cast<double>(s.count);
    FeatureVec var(3, 0.0);
    for (uint64_t id : s.member_ids)
      for (std::size_t k = 0; k < 3; ++k) {
        const double d = by_id.at(id)->features[k] - mean[k];
        var[k] += d * d;
      }
    for (double& v : var) v = std::max(v / static_cast<double>(s.count), kVarianceFloor);
    CHECK(s.mean == mean);
    CHECK(s.diag_variance == var);
  }
}

TEST_CASE("replay_batch edge sizes") {
  ReplayBuffer buf(small_config(50));
  Rng rng(7);
  buf.insert(many(0, 5, 1, rng));
  buf.insert(many(1, 3, 10, rng));

  Rng draw(1);
  CHECK(buf.replay_batch(0, draw).empty());
  CHECK(buf.replay_batch(8, draw).size() == 8);
  CHECK(buf.replay_batch(100, draw).size() == 8);
}

TEST_CASE("stratified replay keeps rare classes present") {
  ReplayBuffer buf(small_config(200));
  Rng rng(8);
  buf.insert(many(0, 100, 1, rng));
  buf.insert(many(1, 2, 1000, rng));

  Rng draw(2);
  const auto batch = buf.replay_batch(10, draw);
  CHECK(batch.size() == 10);
  int b_count = 0;
  for (const BufferEntry& e : batch)
    if (e.label == 1) ++b_count;
  CHECK(b_count == 2);  // both rare entries make the batch
}

TEST_CASE("replay draws without replacement") {
  ReplayBuffer buf(small_config(50));
  Rng rng(9);
  buf.insert(many(0, 20, 1, rng));
  Rng draw(3);
  const auto batch = buf.replay_batch(15, draw);
  std::vector<uint64_t> ids;
  for (const BufferEntry& e : batch) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("snapshot export/import round-trips") {
  ReplayBuffer buf(small_config(50));
  Rng rng(10);
  buf.insert(many(0, 8, 1, rng));
  std::vector<BufferEntry> pseudo = many(2, 4, 100, rng);
  for (auto& e : pseudo) e.source = SampleSource::Pseudo;
  buf.insert(std::move(pseudo));

  std::stringstream snapshot;
  buf.export_jsonl(snapshot);

  ReplayBuffer restored(small_config(50));
  restored.import_jsonl(snapshot);
  CHECK(restored.size() == buf.size());
  CHECK(restored.class_counts() == buf.class_counts());

  const auto sa = buf.class_summaries();
  const auto sb = restored.class_summaries();
  REQUIRE(sa.size() == sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    CHECK(sa[i].mean == sb[i].mean);
    CHECK(sa[i].member_ids == sb[i].member_ids);
  }

  int pseudo_count = 0;
  for (const BufferEntry* e : restored.entries())
    if (e->source == SampleSource::Pseudo) ++pseudo_count;
  CHECK(pseudo_count == 4);
}

TEST_CASE("dimension mismatch and bad snapshots are rejected") {
  ReplayBuffer buf(small_config(10, 3));
  CHECK_THROWS_AS(buf.insert({entry(1, 0, {1.0, 2.0})}), ShapeError);

  std::stringstream bad("not json at all\n");
  CHECK_THROWS_AS(buf.import_jsonl(bad), ParseError);

  // A snapshot larger than the capacity cannot be imported.
  ReplayBuffer big(small_config(50, 3));
  Rng rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<BufferEntry> entries;
  for (uint64_t i = 0; i < 40; ++i)
    entries.push_back({i, {g(rng), g(rng), g(rng)}, 0, SampleSource::GroundTruth, 0});
  big.insert(std::move(entries));
  std::stringstream snapshot;
  big.export_jsonl(snapshot);
  ReplayBuffer tiny(small_config(10, 3));
  CHECK_THROWS_AS(tiny.import_jsonl(snapshot), ValidationError);
}

TEST_SUITE_END();
