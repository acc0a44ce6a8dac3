#include "srtfd/buffer.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace srtfd {

ReplayBuffer::ReplayBuffer(BufferConfig cfg) : cfg_(cfg), rng_(cfg.rng_seed) {
  if (cfg_.capacity == 0) throw std::invalid_argument("buffer: capacity must be positive");
  if (cfg_.feature_dim <= 0) throw std::invalid_argument("buffer: feature_dim must be positive");
}

EvictionReport ReplayBuffer::insert(std::vector<BufferEntry> entries) {
  for (const BufferEntry& e : entries) {
    if (e.features.size() != static_cast<std::size_t>(cfg_.feature_dim))
      throw ShapeError("buffer insert: feature dimension mismatch");
    if (e.label < 0) throw std::invalid_argument("buffer insert: negative class id");
  }
  for (BufferEntry& e : entries) {
    classes_[e.label].push_back(std::move(e));
    ++total_;
  }
  EvictionReport report;
  evict_down_to_capacity(report);
  return report;
}

void ReplayBuffer::evict_down_to_capacity(EvictionReport& report) {
  auto evict_at = [&](std::vector<BufferEntry>& part, std::size_t idx) {
    report.evicted_ids.push_back(part[idx].id);
    part[idx] = std::move(part.back());
    part.pop_back();
    --total_;
  };

  while (total_ > cfg_.capacity) {
    if (cfg_.eviction == EvictionPolicy::UniformReservoir) {
      std::uniform_int_distribution<std::size_t> pick(0, total_ - 1);
      std::size_t target = pick(rng_);
      for (auto& [cls, part] : classes_) {
        if (target < part.size()) {
          evict_at(part, target);
          break;
        }
        target -= part.size();
      }
    } else {
      // Largest class sheds first (ties to the lowest class id); within the
      // class, pseudo-labeled entries go before ground truth.
      int victim_class = -1;
      std::size_t victim_size = 0;
      for (const auto& [cls, part] : classes_)
        if (part.size() > victim_size) {
          victim_size = part.size();
          victim_class = cls;
        }
      std::vector<BufferEntry>& part = classes_[victim_class];
      std::vector<std::size_t> pool;
      pool.reserve(part.size());
      for (std::size_t i = 0; i < part.size(); ++i)
        if (part[i].source == SampleSource::Pseudo) pool.push_back(i);
      if (pool.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, part.size() - 1);
        evict_at(part, pick(rng_));
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        evict_at(part, pool[pick(rng_)]);
      }
    }
  }
  for (auto it = classes_.begin(); it != classes_.end();)
    it = it->second.empty() ? classes_.erase(it) : std::next(it);
}

std::vector<ClusterSummary> ReplayBuffer::class_summaries() const {
  std::vector<ClusterSummary> out;
  out.reserve(classes_.size());
  for (const auto& [cls, part] : classes_) {
    if (part.empty()) continue;
    ClusterSummary s;
    s.id = cls;
    s.count = static_cast<int>(part.size());
    const std::size_t d = static_cast<std::size_t>(cfg_.feature_dim);
    s.mean.assign(d, 0.0);
    for (const BufferEntry& e : part)
      for (std::size_t k = 0; k < d; ++k) s.mean[k] += e.features[k];
    for (double& v : s.mean) v /= static_cast<double>(part.size());
    s.diag_variance.assign(d, 0.0);
    for (const BufferEntry& e : part)
      for (std::size_t k = 0; k < d; ++k) {
        const double dv = e.features[k] - s.mean[k];
        s.diag_variance[k] += dv * dv;
      }
    for (double& v : s.diag_variance)
      v = std::max(v / static_cast<double>(part.size()), kVarianceFloor);
    s.member_ids.reserve(part.size());
    for (const BufferEntry& e : part) s.member_ids.push_back(e.id);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<BufferEntry> ReplayBuffer::replay_batch(std::size_t size, Rng& rng) const {
  std::vector<BufferEntry> out;
  if (size == 0 || total_ == 0) return out;
  if (size >= total_) {
    for (const auto& [cls, part] : classes_)
      out.insert(out.end(), part.begin(), part.end());
    return out;
  }

  // Deal slots round-robin to the class with the smallest allocation that
  // still has unsampled entries; ties go to the lowest class id.
  std::map<int, std::size_t> alloc;
  for (const auto& [cls, part] : classes_) alloc[cls] = 0;
  std::size_t dealt = 0;
  while (dealt < size) {
    int best = -1;
    std::size_t best_alloc = 0;
    for (const auto& [cls, part] : classes_) {
      if (alloc[cls] >= part.size()) continue;
      if (best < 0 || alloc[cls] < best_alloc) {
        best = cls;
        best_alloc = alloc[cls];
      }
    }
    if (best < 0) break;
    ++alloc[best];
    ++dealt;
  }

  out.reserve(dealt);
  for (const auto& [cls, part] : classes_) {
    const std::size_t want = alloc[cls];
    if (want == 0) continue;
    // Partial Fisher-Yates over index space; uniform without replacement.
    std::vector<std::size_t> idx(part.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < want; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
      out.push_back(part[idx[i]]);
    }
  }
  return out;
}

std::vector<BufferEntry> ReplayBuffer::uniform_batch(std::size_t size, Rng& rng) const {
  std::vector<const BufferEntry*> all = entries();
  std::vector<BufferEntry> out;
  if (size == 0 || all.empty()) return out;
  if (size >= all.size()) {
    for (const BufferEntry* e : all) out.push_back(*e);
    return out;
  }
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
    std::swap(all[i], all[pick(rng)]);
    out.push_back(*all[i]);
  }
  return out;
}

std::vector<int> ReplayBuffer::class_counts() const {
  int max_class = -1;
  for (const auto& [cls, part] : classes_)
    if (!part.empty()) max_class = std::max(max_class, cls);
  std::vector<int> counts(static_cast<std::size_t>(max_class + 1), 0);
  for (const auto& [cls, part] : classes_)
    if (!part.empty()) counts[static_cast<std::size_t>(cls)] = static_cast<int>(part.size());
  return counts;
}

std::vector<const BufferEntry*> ReplayBuffer::entries() const {
  std::vector<const BufferEntry*> out;
  out.reserve(total_);
  for (const auto& [cls, part] : classes_)
    for (const BufferEntry& e : part) out.push_back(&e);
  return out;
}

void ReplayBuffer::export_jsonl(std::ostream& out) const {
  for (const auto& [cls, part] : classes_)
    for (const BufferEntry& e : part) {
      nlohmann::json j;
      j["id"] = e.id;
      j["label"] = e.label;
      j["source"] = e.source == SampleSource::GroundTruth ? "gt" : "pseudo";
      j["step"] = e.step_added;
      j["x"] = e.features;
      out << j.dump() << '\n';
    }
}

void ReplayBuffer::import_jsonl(std::istream& in) {
  std::vector<BufferEntry> loaded;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("buffer snapshot: bad JSON line", line_no);
    BufferEntry e;
    e.id = j.at("id").get<uint64_t>();
    e.label = j.at("label").get<int>();
    const std::string source = j.at("source").get<std::string>();
    if (source == "gt")
      e.source = SampleSource::GroundTruth;
    else if (source == "pseudo")
      e.source = SampleSource::Pseudo;
    else
      throw ParseError("buffer snapshot: unknown source tag", line_no);
    e.step_added = j.at("step").get<int64_t>();
    e.features = j.at("x").get<FeatureVec>();
    if (e.features.size() != static_cast<std::size_t>(cfg_.feature_dim))
      throw ParseError("buffer snapshot: feature dimension mismatch", line_no);
    loaded.push_back(std::move(e));
  }
  if (loaded.size() > cfg_.capacity)
    throw ValidationError("buffer snapshot: entry count exceeds capacity");
  classes_.clear();
  total_ = 0;
  for (BufferEntry& e : loaded) {
    classes_[e.label].push_back(std::move(e));
    ++total_;
  }
}

}  // namespace srtfd
