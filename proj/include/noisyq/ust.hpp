#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "noisyq/oracle.hpp"
#include "noisyq/rng.hpp"

namespace noisyq {

/// Exact rational num/den, used for balance thresholds.
struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 3;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

namespace beta_presets {
inline constexpr Ratio third{1, 3};
inline constexpr Ratio seventh{1, 7};
inline constexpr Ratio fourteenth{1, 14};
inline constexpr Ratio hard_instance{1, 21};
inline constexpr Ratio forty_second{1, 42};
}  // namespace beta_presets

/// Disjoint sets with path compression and union by size.
class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  bool unite(int a, int b);
  int components() const noexcept { return components_; }
  int size_of(int x) { return size_[static_cast<std::size_t>(find(x))]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int components_;
};

/// Spanning tree on vertices 0..n-1. Construction rejects anything that is
/// not a tree (wrong edge count, self loop, repeated edge, disconnected).
class LabeledTree {
 public:
  LabeledTree(int n, std::vector<Edge> edges);

  int vertices() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
};

/// Uniform spanning tree of K_n by Wilson's loop-erased random walks.
LabeledTree sample_ust(int n, Rng& rng);

/// Prüfer bijection between sequences in [0,n)^(n-2) and labelled trees.
LabeledTree tree_from_prufer(int n, std::span<const int> sequence);
std::vector<int> prufer_code(const LabeledTree& tree);

/// side * den >= num * n and (n - side) * den >= num * n.
bool is_balanced_split(std::int64_t side, std::int64_t n, Ratio beta) noexcept;

struct BalancedEdgeReport {
  Ratio beta;
  std::vector<Edge> balanced_edges;
  /// s_T(e) = min(side, n - side) for tree.edges()[j].
  std::vector<std::int64_t> s_values;
  std::int64_t s_sum = 0;
};

BalancedEdgeReport balanced_edges(const LabeledTree& tree, Ratio beta);

/// True when the edges are empty or form one simple path.
bool forms_chain(std::span<const Edge> edges);

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HardInstance {
  int n = 0;
  std::vector<Edge> graph;
  bool connected = true;
  std::optional<Edge> removed_edge;
  LabeledTree base_tree{1, {}};
};

struct HardInstanceOptions {
  Ratio beta = beta_presets::hard_instance;
  int max_restarts = 10000;
};

/// UST conditioned on a beta-balanced edge; with probability 1/2 that edge
/// (uniform among balanced ones) is removed. Throws SamplingError after
/// max_restarts trees without a balanced edge.
HardInstance sample_hard_instance(int n, Rng& rng, const HardInstanceOptions& options = {});

struct StInstance {
  HardInstance instance;
  int s = 0;
  int t = 0;
  bool st_connected = true;
};

/// Hard instance plus s, t drawn i.i.d. uniform over the vertices.
StInstance sample_st_instance(int n, Rng& rng, const HardInstanceOptions& options = {});

struct ConnectivityResult {
  bool connected = false;
  std::uint64_t queries = 0;
};

/// Check-Bit on every vertex pair at error delta / C(n,2), then union-find on
/// the pairs declared present.
ConnectivityResult naive_connectivity(EdgeSource& oracle, double delta);
/// Same reconstruction, answering whether s and t share a component.
ConnectivityResult naive_st_connectivity(EdgeSource& oracle, int s, int t, double delta);

struct StructureRow {
  int n = 0;
  int samples = 0;
  double mean_balanced = 0.0;
  double stddev_balanced = 0.0;
  double median_balanced = 0.0;
  double mean_s_sum = 0.0;
  double median_s_sum = 0.0;
  std::uint64_t chain_violations = 0;
};

/// Balanced-edge statistics over `samples` USTs on n vertices; sample i uses
/// Rng(seed, {n, i}). Chain violations are counted only for beta >= 1/3.
StructureRow structure_stats(int n, int samples, Ratio beta, std::uint64_t seed);

struct ScalingReport {
  std::vector<StructureRow> rows;
  /// Log-log slopes of the medians against n.
  double balanced_slope = 0.0;
  double s_sum_slope = 0.0;
};

ScalingReport structure_scaling_report(std::span<const int> sizes, int samples, Ratio beta,
                                       std::uint64_t seed);

/// One "u v" line per edge, 1-indexed.
void write_tree(std::ostream& out, const LabeledTree& tree);
LabeledTree read_tree(std::istream& in);
/// Header "label=0|1 removed=u,v|none", then the graph's edge list.
void write_hard_instance(std::ostream& out, const HardInstance& instance);
HardInstance read_hard_instance(std::istream& in);

}  // namespace noisyq
