#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "srtfd/common.hpp"

namespace srtfd {

enum class SampleSource { GroundTruth, Pseudo };

struct BufferEntry {
  uint64_t id = 0;
  FeatureVec features;
  int label = 0;  // 0 = normal, 1..c = faults
  SampleSource source = SampleSource::GroundTruth;
  int64_t step_added = 0;
};

enum class EvictionPolicy {
  ClassBalanced,     // evict uniformly within the largest class, pseudo first
  UniformReservoir,  // evict uniformly over the whole buffer (ER baseline)
};

struct BufferConfig {
  std::size_t capacity = 2000;
  int feature_dim = 0;
  uint64_t rng_seed = 0;
  EvictionPolicy eviction = EvictionPolicy::ClassBalanced;
};

struct EvictionReport {
  std::vector<uint64_t> evicted_ids;
};

/// Bounded, class-partitioned memory of past labeled and accepted
/// pseudo-labeled samples. Single writer; read-only queries may run between
/// writes.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(BufferConfig cfg);

  /// Appends entries to their class partitions and evicts down to capacity.
  EvictionReport insert(std::vector<BufferEntry> entries);

  /// One diagonal-Gaussian summary per nonempty class, ascending class id.
  /// Mean and population variance per dimension, variance floored.
  std::vector<ClusterSummary> class_summaries() const;

  /// Class-stratified uniform sample without replacement. Slots are dealt
  /// round-robin across classes (smallest allocation first) so no class is
  /// starved; size >= |buffer| returns everything.
  std::vector<BufferEntry> replay_batch(std::size_t size, Rng& rng) const;

  /// Plain uniform sample without replacement, class-blind; what a basic
  /// experience-replay baseline draws.
  std::vector<BufferEntry> uniform_batch(std::size_t size, Rng& rng) const;

  std::size_t size() const { return total_; }
  bool empty() const { return total_ == 0; }
  std::size_t capacity() const { return cfg_.capacity; }

  /// Entry counts indexed by class id (length = max class id + 1).
  std::vector<int> class_counts() const;

  /// Flattened view, classes ascending, insertion order within a class.
  std::vector<const BufferEntry*> entries() const;

  void export_jsonl(std::ostream& out) const;
  void import_jsonl(std::istream& in);

 private:
  void evict_down_to_capacity(EvictionReport& report);

  BufferConfig cfg_;
  std::map<int, std::vector<BufferEntry>> classes_;
  std::size_t total_ = 0;
  Rng rng_;  // eviction stream
};

}  // namespace srtfd
