#include "noisyq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace noisyq {

std::uint64_t bernoulli_threshold(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("bernoulli_threshold: p must lie in [0, 1)");
  return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

QueryLedger::QueryLedger(std::size_t keys, bool per_key) {
  if (per_key) per_key_.emplace(keys, 0);
}

std::uint64_t QueryLedger::count(std::size_t key) const {
  if (!per_key_) return 0;
  return per_key_->at(key);
}

std::span<const std::uint64_t> QueryLedger::per_key() const {
  if (!per_key_) return {};
  return *per_key_;
}

BitOracle::BitOracle(std::vector<bool> hidden, NoiseModel noise, Rng rng, bool per_index)
    : hidden_(std::move(hidden)),
      noise_(noise),
      flip_threshold_(bernoulli_threshold(noise.p())),
      rng_(rng),
      ledger_(hidden_.size(), per_index) {}

bool BitOracle::query(std::size_t i) {
  if (i >= hidden_.size()) {
    throw InvalidArgument("BitOracle::query: index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(hidden_.size()) + ")");
  }
  ledger_.record(i);
  const bool flip = rng_() < flip_threshold_;
  return hidden_[i] != flip;
}

std::size_t BitOracle::ones() const noexcept {
  return static_cast<std::size_t>(std::count(hidden_.begin(), hidden_.end(), true));
}

std::size_t pair_index(int u, int v, int n) noexcept {
  if (u > v) std::swap(u, v);
  const auto uu = static_cast<std::size_t>(u);
  const auto nn = static_cast<std::size_t>(n);
  // rows 0..u-1 hold (n-1) + (n-2) + ... + (n-u) pairs
  return uu * (2 * nn - uu - 1) / 2 + static_cast<std::size_t>(v - u - 1);
}

namespace {

std::size_t pair_count(int n) {
  return n < 2 ? 0 : static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

void check_pair(int u, int v, int n) {
  if (u < 0 || v < 0 || u >= n || v >= n) {
    throw InvalidArgument("vertex pair (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") out of range for n = " + std::to_string(n));
  }
  if (u == v) throw InvalidArgument("vertex pair must be distinct, got u = v = " + std::to_string(u));
}

}  // namespace

EdgeOracle::EdgeOracle(int n, std::span<const Edge> edges, NoiseModel noise, Rng rng, bool per_pair)
    : n_(n),
      adjacency_(pair_count(n), false),
      noise_(noise),
      flip_threshold_(bernoulli_threshold(noise.p())),
      rng_(rng),
      ledger_(pair_count(n), per_pair) {
  if (n < 1) throw InvalidArgument("EdgeOracle: need at least one vertex");
  for (const Edge& e : edges) {
    check_pair(e.u, e.v, n);
    adjacency_[pair_index(e.u, e.v, n)] = true;
  }
}

bool EdgeOracle::has_edge(int u, int v) const {
  check_pair(u, v, n_);
  return adjacency_[pair_index(u, v, n_)];
}

bool EdgeOracle::query(int u, int v) {
  check_pair(u, v, n_);
  const std::size_t key = pair_index(u, v, n_);
  ledger_.record(key);
  const bool flip = rng_() < flip_threshold_;
  return adjacency_[key] != flip;
}

}  // namespace noisyq
