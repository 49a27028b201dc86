#include "noisyq/ust.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "noisyq/noise.hpp"
#include "noisyq/stats.hpp"
#include "noisyq/walk.hpp"

namespace noisyq {

UnionFind::UnionFind(int n)
    : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1), components_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  int root = x;
  while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
  while (parent_[static_cast<std::size_t>(x)] != root) {
    const int next = parent_[static_cast<std::size_t>(x)];
    parent_[static_cast<std::size_t>(x)] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
  --components_;
  return true;
}

LabeledTree::LabeledTree(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) throw InvalidArgument("a tree needs at least one vertex");
  if (edges_.size() != static_cast<std::size_t>(n - 1)) {
    throw InvalidArgument("a tree on " + std::to_string(n) + " vertices has " + std::to_string(n - 1) +
                          " edges, got " + std::to_string(edges_.size()));
  }
  UnionFind uf(n);
  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw InvalidArgument("tree edge endpoint out of range");
    if (e.u == e.v) throw InvalidArgument("tree edge is a self loop");
    e = Edge::make(e.u, e.v);
    if (!uf.unite(e.u, e.v)) throw InvalidArgument("edge list contains a cycle");
  }
}

LabeledTree sample_ust(int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("sample_ust: n must be positive");
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  std::vector<int> next(static_cast<std::size_t>(n), -1);
  in_tree[0] = 1;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  const auto others = static_cast<std::uint64_t>(n - 1);
  for (int start = 1; start < n; ++start) {
    // the successor pointers keep only the last exit from each vertex,
    // which is exactly the loop erasure
    for (int u = start; !in_tree[static_cast<std::size_t>(u)];) {
      auto v = static_cast<int>(rng.below(others));
      if (v >= u) ++v;
      next[static_cast<std::size_t>(u)] = v;
      u = v;
    }
    for (int u = start; !in_tree[static_cast<std::size_t>(u)]; u = next[static_cast<std::size_t>(u)]) {
      in_tree[static_cast<std::size_t>(u)] = 1;
      edges.push_back(Edge::make(u, next[static_cast<std::size_t>(u)]));
    }
  }
  return LabeledTree(n, std::move(edges));
}

LabeledTree tree_from_prufer(int n, std::span<const int> sequence) {
  if (n < 1) throw InvalidArgument("tree_from_prufer: n must be positive");
  if (n == 1) {
    if (!sequence.empty()) throw InvalidArgument("Prüfer sequence of a 1-vertex tree is empty");
    return LabeledTree(1, {});
  }
  if (sequence.size() != static_cast<std::size_t>(n - 2)) throw InvalidArgument("Prüfer sequence must have n - 2 entries");
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int v : sequence) {
    if (v < 0 || v >= n) throw InvalidArgument("Prüfer entry out of range");
    ++degree[static_cast<std::size_t>(v)];
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  int ptr = 0;
  while (degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
  int leaf = ptr;
  for (int v : sequence) {
    edges.push_back(Edge::make(leaf, v));
    if (--degree[static_cast<std::size_t>(v)] == 1 && v < ptr) {
      leaf = v;
    } else {
      do ++ptr;
      while (degree[static_cast<std::size_t>(ptr)] != 1);
      leaf = ptr;
    }
  }
  edges.push_back(Edge::make(leaf, n - 1));
  return LabeledTree(n, std::move(edges));
}

namespace {

struct RootedTree {
  std::vector<int> parent;
  std::vector<int> order;  // preorder from the root
};

RootedTree root_at(const LabeledTree& tree, int root) {
  const int n = tree.vertices();
  std::vector<int> offsets(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : tree.edges()) {
    ++offsets[static_cast<std::size_t>(e.u) + 1];
    ++offsets[static_cast<std::size_t>(e.v) + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<int> adjacency(offsets.back());
  std::vector<int> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& e : tree.edges()) {
    adjacency[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.u)]++)] = e.v;
    adjacency[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.v)]++)] = e.u;
  }
  RootedTree rooted{std::vector<int>(static_cast<std::size_t>(n), -1), {}};
  rooted.order.reserve(static_cast<std::size_t>(n));
  std::vector<int> stack{root};
  rooted.parent[static_cast<std::size_t>(root)] = root;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    rooted.order.push_back(u);
    for (int k = offsets[static_cast<std::size_t>(u)]; k < offsets[static_cast<std::size_t>(u) + 1]; ++k) {
      const int v = adjacency[static_cast<std::size_t>(k)];
      if (rooted.parent[static_cast<std::size_t>(v)] == -1) {
        rooted.parent[static_cast<std::size_t>(v)] = u;
        stack.push_back(v);
      }
    }
  }
  return rooted;
}

}  // namespace

std::vector<int> prufer_code(const LabeledTree& tree) {
  const int n = tree.vertices();
  if (n <= 2) return {};
  const RootedTree rooted = root_at(tree, n - 1);
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const auto& e : tree.edges()) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  std::vector<int> code;
  code.reserve(static_cast<std::size_t>(n - 2));
  int ptr = 0;
  while (degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
  int leaf = ptr;
  for (int i = 0; i < n - 2; ++i) {
    const int next = rooted.parent[static_cast<std::size_t>(leaf)];
    code.push_back(next);
    if (--degree[static_cast<std::size_t>(next)] == 1 && next < ptr) {
      leaf = next;
    } else {
      do ++ptr;
      while (degree[static_cast<std::size_t>(ptr)] != 1);
      leaf = ptr;
    }
  }
  return code;
}

bool is_balanced_split(std::int64_t side, std::int64_t n, Ratio beta) noexcept {
  const std::int64_t need = beta.num * n;
  return side * beta.den >= need && (n - side) * beta.den >= need;
}

BalancedEdgeReport balanced_edges(const LabeledTree& tree, Ratio beta) {
  if (beta.num <= 0 || beta.den <= 0 || 2 * beta.num >= beta.den) {
    throw InvalidArgument("balance threshold must lie in (0, 1/2)");
  }
  const int n = tree.vertices();
  BalancedEdgeReport report{beta, {}, {}, 0};
  if (n < 2) return report;

  const RootedTree rooted = root_at(tree, 0);
  std::vector<std::int64_t> subtree(static_cast<std::size_t>(n), 1);
  for (auto it = rooted.order.rbegin(); it != rooted.order.rend(); ++it) {
    const int u = *it;
    if (u != 0) subtree[static_cast<std::size_t>(rooted.parent[static_cast<std::size_t>(u)])] += subtree[static_cast<std::size_t>(u)];
  }
  report.s_values.reserve(tree.edges().size());
  for (const auto& e : tree.edges()) {
    const int child = rooted.parent[static_cast<std::size_t>(e.v)] == e.u ? e.v : e.u;
    const std::int64_t side = subtree[static_cast<std::size_t>(child)];
    const std::int64_t s = std::min<std::int64_t>(side, n - side);
    report.s_values.push_back(s);
    report.s_sum += s;
    if (is_balanced_split(side, n, beta)) report.balanced_edges.push_back(e);
  }
  return report;
}

bool forms_chain(std::span<const Edge> edges) {
  if (edges.empty()) return true;
  std::vector<int> vertices;
  for (const auto& e : edges) {
    vertices.push_back(e.u);
    vertices.push_back(e.v);
  }
  std::sort(vertices.begin(), vertices.end());
  // every vertex appears at most twice (degree <= 2)
  for (std::size_t i = 2; i < vertices.size(); ++i) {
    if (vertices[i] == vertices[i - 2]) return false;
  }
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  auto local = [&](int v) {
    return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), v) - vertices.begin());
  };
  UnionFind uf(static_cast<int>(vertices.size()));
  for (const auto& e : edges) {
    if (!uf.unite(local(e.u), local(e.v))) return false;
  }
  return uf.components() == 1;
}

HardInstance sample_hard_instance(int n, Rng& rng, const HardInstanceOptions& options) {
  if (n < 1) throw InvalidArgument("sample_hard_instance: n must be positive");
  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    LabeledTree tree = sample_ust(n, rng);
    const BalancedEdgeReport report = balanced_edges(tree, options.beta);
    if (report.balanced_edges.empty()) continue;
    const Edge removed = report.balanced_edges[static_cast<std::size_t>(rng.below(report.balanced_edges.size()))];
    const bool connected = rng.below(2) == 1;
    HardInstance instance{n, tree.edges(), connected, std::nullopt, std::move(tree)};
    if (!connected) {
      instance.graph.erase(std::find(instance.graph.begin(), instance.graph.end(), removed));
      instance.removed_edge = removed;
    }
    return instance;
  }
  throw SamplingError("no balanced edge after " + std::to_string(options.max_restarts) +
                      " restarts at n = " + std::to_string(n));
}

StInstance sample_st_instance(int n, Rng& rng, const HardInstanceOptions& options) {
  StInstance st;
  st.instance = sample_hard_instance(n, rng, options);
  st.s = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  st.t = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  UnionFind uf(n);
  for (const auto& e : st.instance.graph) uf.unite(e.u, e.v);
  st.st_connected = uf.find(st.s) == uf.find(st.t);
  return st;
}

namespace {

UnionFind reconstruct(EdgeSource& oracle, double delta) {
  if (!std::isfinite(delta) || !(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidArgument("delta must lie strictly inside (0, 1)");
  }
  const int n = oracle.vertices();
  UnionFind uf(n);
  if (n < 2) return uf;
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const WalkPolicy policy = WalkPolicy::from_errors(oracle.noise(), delta / pairs, delta / pairs);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (check_edge(oracle, u, v, policy).decided_one) uf.unite(u, v);
    }
  }
  return uf;
}

}  // namespace

ConnectivityResult naive_connectivity(EdgeSource& oracle, double delta) {
  const std::uint64_t start = oracle.queries();
  UnionFind uf = reconstruct(oracle, delta);
  return {uf.components() <= 1, oracle.queries() - start};
}

ConnectivityResult naive_st_connectivity(EdgeSource& oracle, int s, int t, double delta) {
  const int n = oracle.vertices();
  if (s < 0 || t < 0 || s >= n || t >= n) throw InvalidArgument("s-t vertices out of range");
  const std::uint64_t start = oracle.queries();
  UnionFind uf = reconstruct(oracle, delta);
  return {uf.find(s) == uf.find(t), oracle.queries() - start};
}

StructureRow structure_stats(int n, int samples, Ratio beta, std::uint64_t seed) {
  if (n < 2 || samples < 1) throw InvalidArgument("structure_stats: need n >= 2 and samples >= 1");
  const bool check_chain = beta.num * 3 >= beta.den;
  std::vector<double> balanced_counts, s_sums;
  balanced_counts.reserve(static_cast<std::size_t>(samples));
  s_sums.reserve(static_cast<std::size_t>(samples));
  StructureRow row;
  row.n = n;
  row.samples = samples;
  for (int i = 0; i < samples; ++i) {
    Rng rng(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i)});
    const LabeledTree tree = sample_ust(n, rng);
    const BalancedEdgeReport report = balanced_edges(tree, beta);
    balanced_counts.push_back(static_cast<double>(report.balanced_edges.size()));
    s_sums.push_back(static_cast<double>(report.s_sum));
    if (check_chain && !forms_chain(report.balanced_edges)) ++row.chain_violations;
  }
  CompensatedSum b_sum, b_sq, s_sum;
  for (std::size_t i = 0; i < balanced_counts.size(); ++i) {
    b_sum.add(balanced_counts[i]);
    b_sq.add(balanced_counts[i] * balanced_counts[i]);
    s_sum.add(s_sums[i]);
  }
  const auto count = static_cast<double>(samples);
  row.mean_balanced = b_sum.value() / count;
  row.mean_s_sum = s_sum.value() / count;
  if (samples > 1) {
    const double var = (b_sq.value() - count * row.mean_balanced * row.mean_balanced) / (count - 1);
    row.stddev_balanced = var > 0 ? std::sqrt(var) : 0.0;
  }
  row.median_balanced = median(balanced_counts);
  row.median_s_sum = median(s_sums);
  return row;
}

ScalingReport structure_scaling_report(std::span<const int> sizes, int samples, Ratio beta,
                                       std::uint64_t seed) {
  if (sizes.size() < 2) throw InvalidArgument("scaling report needs at least two sizes");
  ScalingReport report;
  std::vector<double> ns, balanced, s_sum;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 10 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      throw InvalidArgument("scaling sizes must be increasing and >= 10");
    }
    report.rows.push_back(structure_stats(sizes[i], samples, beta, seed));
    ns.push_back(static_cast<double>(sizes[i]));
    balanced.push_back(report.rows.back().median_balanced);
    s_sum.push_back(report.rows.back().median_s_sum);
  }
  report.balanced_slope = loglog_slope(ns, balanced);
  report.s_sum_slope = loglog_slope(ns, s_sum);
  return report;
}

void write_tree(std::ostream& out, const LabeledTree& tree) {
  for (const auto& e : tree.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

namespace {

std::vector<Edge> read_edges(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long u = 0, v = 0;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra)) throw InvalidArgument("malformed edge line: '" + line + "'");
    if (u < 1 || v < 1 || u > (1LL << 30) || v > (1LL << 30)) throw InvalidArgument("edge endpoints are 1-indexed");
    edges.push_back(Edge::make(static_cast<int>(u - 1), static_cast<int>(v - 1)));
  }
  return edges;
}

}  // namespace

LabeledTree read_tree(std::istream& in) {
  std::vector<Edge> edges = read_edges(in);
  const int n = static_cast<int>(edges.size()) + 1;
  return LabeledTree(n, std::move(edges));
}

void write_hard_instance(std::ostream& out, const HardInstance& instance) {
  out << "label=" << (instance.connected ? 1 : 0) << " removed=";
  if (instance.removed_edge) {
    out << instance.removed_edge->u + 1 << ',' << instance.removed_edge->v + 1;
  } else {
    out << "none";
  }
  out << '\n';
  for (const auto& e : instance.graph) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

HardInstance read_hard_instance(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InvalidArgument("missing hard-instance header");
  std::istringstream fields(header);
  std::string label_field, removed_field;
  fields >> label_field >> removed_field;
  if (label_field != "label=0" && label_field != "label=1") throw InvalidArgument("malformed label field");
  if (removed_field.rfind("removed=", 0) != 0) throw InvalidArgument("malformed removed field");
  const bool connected = label_field == "label=1";
  const std::string removed = removed_field.substr(8);
  std::optional<Edge> removed_edge;
  if (removed != "none") {
    const auto comma = removed.find(',');
    if (comma == std::string::npos) throw InvalidArgument("removed edge must be 'u,v'");
    const int u = std::stoi(removed.substr(0, comma));
    const int v = std::stoi(removed.substr(comma + 1));
    if (u < 1 || v < 1) throw InvalidArgument("removed edge endpoints are 1-indexed");
    removed_edge = Edge::make(u - 1, v - 1);
  }
  if (connected == removed_edge.has_value()) {
    throw InvalidArgument("label=1 requires removed=none and label=0 requires a removed edge");
  }
  std::vector<Edge> graph = read_edges(in);
  std::vector<Edge> tree_edges = graph;
  if (removed_edge) tree_edges.push_back(*removed_edge);
  const int n = static_cast<int>(tree_edges.size()) + 1;
  HardInstance instance{n, std::move(graph), connected, removed_edge, LabeledTree(n, std::move(tree_edges))};
  return instance;
}

}  // namespace noisyq
