#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "noisyq/noise.hpp"
#include "noisyq/rng.hpp"

namespace noisyq {

/// Query accounting. Per-key counts are opt-in since edge oracles have
/// n(n-1)/2 keys.
class QueryLedger {
 public:
  QueryLedger() = default;
  QueryLedger(std::size_t keys, bool per_key);

  void record(std::size_t key) noexcept {
    ++total_;
    if (per_key_) ++(*per_key_)[key];
  }

  std::uint64_t total() const noexcept { return total_; }
  bool tracks_keys() const noexcept { return per_key_.has_value(); }
  /// Zero when per-key tracking is off.
  std::uint64_t count(std::size_t key) const;
  std::span<const std::uint64_t> per_key() const;

 private:
  std::uint64_t total_ = 0;
  std::optional<std::vector<std::uint64_t>> per_key_;
};

/// Anything the bit algorithms can query. Implementations charge their own
/// ledger; algorithms only see answers.
class BitSource {
 public:
  virtual ~BitSource() = default;
  virtual bool query(std::size_t i) = 0;
  virtual std::size_t size() const noexcept = 0;
  virtual const NoiseModel& noise() const noexcept = 0;
  virtual std::uint64_t queries() const noexcept = 0;
};

/// Noisy oracle over a hidden bit vector.
class BitOracle final : public BitSource {
 public:
  BitOracle(std::vector<bool> hidden, NoiseModel noise, Rng rng, bool per_index = false);

  /// Returns hidden[i] flipped with probability p. Throws on i >= size().
  bool query(std::size_t i) override;
  std::size_t size() const noexcept override { return hidden_.size(); }
  const NoiseModel& noise() const noexcept override { return noise_; }
  std::uint64_t queries() const noexcept override { return ledger_.total(); }

  const QueryLedger& ledger() const noexcept { return ledger_; }
  const std::vector<bool>& hidden() const noexcept { return hidden_; }
  std::size_t ones() const noexcept;

 private:
  std::vector<bool> hidden_;
  NoiseModel noise_;
  std::uint64_t flip_threshold_;
  Rng rng_;
  QueryLedger ledger_;
};

/// Answers the complement of every bit of an underlying source; queries are
/// charged to the underlying ledger.
class ComplementView final : public BitSource {
 public:
  explicit ComplementView(BitSource& base) noexcept : base_(base) {}

  bool query(std::size_t i) override { return !base_.query(i); }
  std::size_t size() const noexcept override { return base_.size(); }
  const NoiseModel& noise() const noexcept override { return base_.noise(); }
  std::uint64_t queries() const noexcept override { return base_.queries(); }

 private:
  BitSource& base_;
};

struct Edge {
  int u = 0;
  int v = 0;

  /// Canonical orientation u < v.
  static Edge make(int a, int b) noexcept { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Index of the unordered pair {u, v} (u != v) in the row-major strict upper
/// triangle of an n x n matrix.
std::size_t pair_index(int u, int v, int n) noexcept;

class EdgeSource {
 public:
  virtual ~EdgeSource() = default;
  virtual bool query(int u, int v) = 0;
  virtual int vertices() const noexcept = 0;
  virtual const NoiseModel& noise() const noexcept = 0;
  virtual std::uint64_t queries() const noexcept = 0;
};

/// Noisy oracle over the edge set of a hidden graph on vertices 0..n-1.
class EdgeOracle final : public EdgeSource {
 public:
  EdgeOracle(int n, std::span<const Edge> edges, NoiseModel noise, Rng rng,
             bool per_pair = false);

  /// Returns 1{(u,v) in G} through the channel. Throws on u == v or a vertex
  /// out of range.
  bool query(int u, int v) override;
  int vertices() const noexcept override { return n_; }
  const NoiseModel& noise() const noexcept override { return noise_; }
  std::uint64_t queries() const noexcept override { return ledger_.total(); }

  const QueryLedger& ledger() const noexcept { return ledger_; }
  bool has_edge(int u, int v) const;

 private:
  int n_;
  std::vector<bool> adjacency_;  // by pair_index
  NoiseModel noise_;
  std::uint64_t flip_threshold_;
  Rng rng_;
  QueryLedger ledger_;
};

}  // namespace noisyq
