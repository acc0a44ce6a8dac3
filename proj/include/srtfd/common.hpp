#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace srtfd {

using FeatureVec = std::vector<double>;
using Rng = std::mt19937_64;

// Floor applied to every diagonal variance so Gaussian KL stays finite on
// degenerate (single-point or constant) clusters.
inline constexpr double kVarianceFloor = 1e-6;

/// Thrown when an input vector/matrix dimension does not match the expected one.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a gradient or parameter turns non-finite during an update.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t batch_index)
      : std::runtime_error(what), batch_index(batch_index) {}
  std::size_t batch_index;
};

/// Thrown on malformed input files; `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line(line) {}
  std::size_t line;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndefinedMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent child seed from a master seed and a stream tag.
inline uint64_t mix_seed(uint64_t seed, uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag));
}

// FNV-1a over raw bytes; used for model-state hashing and determinism checks.
inline uint64_t hash_bytes(const void* data, std::size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t hash_doubles(const std::vector<double>& v, uint64_t h = 0xcbf29ce484222325ULL) {
  return v.empty() ? h : hash_bytes(v.data(), v.size() * sizeof(double), h);
}

/// Diagonal-Gaussian sufficient statistics of a group of samples.
/// `id` is a class id (buffer partitions) or a cluster index (batch clusters).
struct ClusterSummary {
  int id = 0;
  int count = 0;
  std::vector<double> mean;
  std::vector<double> diag_variance;  // floored at kVarianceFloor
  std::vector<uint64_t> member_ids;   // entry ids (buffer) or batch indices (rcs)
};

}  // namespace srtfd
