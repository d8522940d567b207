#include "parmc/contraction.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <stdexcept>
#include <string>

#include "detail/positive_adjacency.hpp"
#include "parmc/parallel.hpp"

namespace parmc {

ContractionMapping ContractionMapping::identity(std::size_t n) {
  ContractionMapping f;
  f.map.resize(n);
  std::iota(f.map.begin(), f.map.end(), NodeId{0});
  f.num_targets = n;
  return f;
}

ContractionMapping compose(const ContractionMapping& first, const ContractionMapping& second) {
  if (second.num_sources() != first.num_targets) {
    throw std::invalid_argument("cannot compose mappings: target/source size mismatch");
  }
  ContractionMapping out;
  out.map.resize(first.map.size());
  for (std::size_t v = 0; v < first.map.size(); ++v) out.map[v] = second.map[first.map[v]];
  out.num_targets = second.num_targets;
  return out;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
  }

  NodeId find(NodeId x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Smaller root wins, which keeps the structure independent of call order
  // for the purpose of the final canonical relabeling.
  bool unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<NodeId> parent_;
};

ContractionMapping canonical_mapping(DisjointSets& sets, std::size_t n) {
  constexpr NodeId kUnset = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> target_of_root(n, kUnset);
  ContractionMapping f;
  f.map.resize(n);
  NodeId next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    NodeId r = sets.find(static_cast<NodeId>(v));
    if (target_of_root[r] == kUnset) target_of_root[r] = next++;
    f.map[v] = target_of_root[r];
  }
  f.num_targets = next;
  return f;
}

struct KeyedValue {
  std::uint64_t key;
  double value;
};

std::uint64_t pack(NodeId a, NodeId b) { return (std::uint64_t{a} << 32) | b; }
NodeId high(std::uint64_t key) { return static_cast<NodeId>(key >> 32); }
NodeId low(std::uint64_t key) { return static_cast<NodeId>(key & 0xffffffffu); }

void sort_by_key(std::vector<KeyedValue>& entries, unsigned threads) {
  parallel_stable_sort(entries.begin(), entries.end(), threads,
                       [](const KeyedValue& a, const KeyedValue& b) { return a.key < b.key; });
}

void check_mapping(std::size_t num_nodes, const ContractionMapping& f) {
  if (f.map.size() != num_nodes) {
    throw std::invalid_argument("contraction mapping covers " + std::to_string(f.map.size()) +
                                " nodes, graph has " + std::to_string(num_nodes));
  }
}

}  // namespace

ContractionMapping connected_components(std::size_t num_nodes, std::span<const NodePair> edges) {
  DisjointSets sets(num_nodes);
  for (const auto& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes) {
      throw std::invalid_argument("contraction edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") out of range");
    }
    sets.unite(e.u, e.v);
  }
  return canonical_mapping(sets, num_nodes);
}

ContractionResult contract(const SparseAdjacency& adj, const ContractionMapping& f,
                           unsigned threads) {
  check_mapping(adj.num_nodes, f);
  const std::size_t nnz = adj.nnz();
  std::vector<KeyedValue> entries(nnz);
  parallel_for(nnz, threads, [&](std::size_t i) {
    entries[i] = {pack(f.map[adj.rows[i]], f.map[adj.cols[i]]), adj.vals[i]};
  });
  sort_by_key(entries, threads);

  ContractionResult out;
  out.mapping = f;
  out.contracted.num_nodes = f.num_targets;
  double diagonal = 0.0;
  for (std::size_t i = 0; i < nnz;) {
    const std::uint64_t key = entries[i].key;
    double sum = 0.0;
    for (; i < nnz && entries[i].key == key; ++i) sum += entries[i].value;
    if (high(key) == low(key)) {
      diagonal += sum;
      continue;
    }
    out.contracted.rows.push_back(high(key));
    out.contracted.cols.push_back(low(key));
    out.contracted.vals.push_back(sum);
  }
  out.joined_cost = diagonal / 2.0;
  return out;
}

GraphContraction contract_graph(const WeightedGraph& g, const ContractionMapping& f,
                                unsigned threads) {
  check_mapping(g.num_nodes(), f);
  const auto edges = g.edges();
  std::vector<KeyedValue> entries(edges.size());
  parallel_for(edges.size(), threads, [&](std::size_t i) {
    NodeId a = f.map[edges[i].u];
    NodeId b = f.map[edges[i].v];
    if (a > b) std::swap(a, b);
    entries[i] = {pack(a, b), edges[i].cost};
  });
  sort_by_key(entries, threads);

  GraphContraction out;
  std::vector<Edge> merged;
  merged.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    const std::uint64_t key = entries[i].key;
    double sum = 0.0;
    for (; i < entries.size() && entries[i].key == key; ++i) sum += entries[i].value;
    if (high(key) == low(key)) {
      out.joined_cost += sum;
    } else {
      merged.push_back({high(key), low(key), sum});
    }
  }
  out.graph = WeightedGraph::from_canonical(f.num_targets, std::move(merged));
  return out;
}

std::vector<NodePair> select_max_edge(const WeightedGraph& g) {
  const Edge* best = nullptr;
  // Edges are sorted, so a strict comparison keeps the smallest (u, v).
  for (const auto& e : g.edges()) {
    if (e.cost > 0.0 && (best == nullptr || e.cost > best->cost)) best = &e;
  }
  if (best == nullptr) return {};
  return {NodePair{best->u, best->v}};
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<NodePair> select_matching(const WeightedGraph& g, const MatchingOptions& opts,
                                      unsigned threads) {
  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  const std::size_t n = g.num_nodes();
  detail::PositiveAdjacency adj(g);
  std::vector<NodeId> mate(n, kNone);
  std::vector<NodeId> proposal(n, kNone);

  auto tie_key = [&](NodeId a, NodeId b) -> std::uint64_t {
    if (!opts.jitter) return b;
    if (a > b) std::swap(a, b);
    return mix(opts.seed ^ mix(pack(a, b)));
  };

  for (int round = 0; round < opts.rounds; ++round) {
    parallel_for(n, threads, [&](std::size_t i) {
      const NodeId v = static_cast<NodeId>(i);
      proposal[v] = kNone;
      if (mate[v] != kNone) return;
      double best_cost = 0.0;
      std::uint64_t best_tie = 0;
      for (const auto& nb : adj.of(v)) {
        if (mate[nb.node] != kNone) continue;
        const std::uint64_t tie = tie_key(v, nb.node);
        if (proposal[v] == kNone || nb.cost > best_cost ||
            (nb.cost == best_cost && tie < best_tie)) {
          proposal[v] = nb.node;
          best_cost = nb.cost;
          best_tie = tie;
        }
      }
    });
    std::vector<std::size_t> added_per_block(block_workers(n, threads), 0);
    parallel_blocks(n, threads, [&](unsigned w, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const NodeId v = static_cast<NodeId>(i);
        const NodeId p = proposal[v];
        if (p != kNone && proposal[p] == v) {
          mate[v] = p;
          ++added_per_block[w];
        }
      }
    });
    if (std::accumulate(added_per_block.begin(), added_per_block.end(), std::size_t{0}) == 0) {
      break;
    }
  }

  std::vector<NodePair> matching;
  for (NodeId v = 0; v < n; ++v) {
    if (mate[v] != kNone && v < mate[v]) matching.push_back({v, mate[v]});
  }
  return matching;
}

std::vector<NodePair> select_spanning_forest_no_conflicts(const WeightedGraph& g) {
  const std::size_t n = g.num_nodes();
  const auto edges = g.edges();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // Total order on attractive edges: higher cost first, then lower index
  // (edges are stored in lexicographic order).
  auto better = [&](std::size_t a, std::size_t b) {
    return edges[a].cost != edges[b].cost ? edges[a].cost > edges[b].cost : a < b;
  };

  // Boruvka.
  DisjointSets components(n);
  std::vector<char> in_forest(edges.size(), 0);
  std::vector<std::size_t> best(n, kNone);
  for (bool progress = true; progress;) {
    progress = false;
    std::fill(best.begin(), best.end(), kNone);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].cost <= 0.0) continue;
      const NodeId a = components.find(edges[i].u);
      const NodeId b = components.find(edges[i].v);
      if (a == b) continue;
      if (best[a] == kNone || better(i, best[a])) best[a] = i;
      if (best[b] == kNone || better(i, best[b])) best[b] = i;
    }
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t i = best[c];
      if (i == kNone) continue;
      if (components.unite(edges[i].u, edges[i].v)) {
        in_forest[i] = 1;
        progress = true;
      }
    }
  }

  // Root every tree at its smallest node.
  std::vector<std::size_t> forest_offsets(n + 1, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!in_forest[i]) continue;
    ++forest_offsets[edges[i].u + 1];
    ++forest_offsets[edges[i].v + 1];
  }
  std::partial_sum(forest_offsets.begin(), forest_offsets.end(), forest_offsets.begin());
  std::vector<std::size_t> forest_edges(forest_offsets.back());
  {
    std::vector<std::size_t> cursor(forest_offsets.begin(), forest_offsets.end() - 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!in_forest[i]) continue;
      forest_edges[cursor[edges[i].u]++] = i;
      forest_edges[cursor[edges[i].v]++] = i;
    }
  }
  constexpr NodeId kNoTree = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> tree(n, kNoTree);
  std::vector<std::size_t> parent_edge(n, kNone);
  std::vector<std::uint32_t> depth(n, 0);
  std::vector<NodeId> queue;
  for (NodeId root = 0; root < n; ++root) {
    if (tree[root] != kNoTree) continue;
    tree[root] = root;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      for (std::size_t k = forest_offsets[v]; k < forest_offsets[v + 1]; ++k) {
        const std::size_t i = forest_edges[k];
        const NodeId w = edges[i].u == v ? edges[i].v : edges[i].u;
        if (tree[w] != kNoTree) continue;
        tree[w] = root;
        parent_edge[w] = i;
        depth[w] = depth[v] + 1;
        queue.push_back(w);
      }
    }
  }

  auto parent_of = [&](NodeId v) {
    const Edge& e = edges[parent_edge[v]];
    return e.u == v ? e.v : e.u;
  };

  // Break conflicts, repulsive edges in ascending lexicographic order.
  std::vector<char> removed(edges.size(), 0);
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (edges[j].cost >= 0.0) continue;
    NodeId a = edges[j].u;
    NodeId b = edges[j].v;
    if (tree[a] != tree[b]) continue;
    std::size_t cheapest = kNone;
    bool connected = true;
    while (a != b) {
      NodeId& deeper = depth[a] >= depth[b] ? a : b;
      const std::size_t i = parent_edge[deeper];
      if (removed[i]) {
        connected = false;
        break;
      }
      if (cheapest == kNone || edges[i].cost < edges[cheapest].cost ||
          (edges[i].cost == edges[cheapest].cost && i < cheapest)) {
        cheapest = i;
      }
      deeper = parent_of(deeper);
    }
    if (connected) removed[cheapest] = 1;
  }

  std::vector<NodePair> selected;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (in_forest[i] && !removed[i]) selected.push_back({edges[i].u, edges[i].v});
  }
  return selected;
}

std::string_view to_string(ContractionPolicy p) {
  switch (p) {
    case ContractionPolicy::kGaec: return "gaec";
    case ContractionPolicy::kMatching: return "matching";
    case ContractionPolicy::kSpanningForest: return "spanning_forest";
    case ContractionPolicy::kAuto: return "auto";
  }
  return "unknown";
}

StepResult contraction_step(const WeightedGraph& g, const StepOptions& opts) {
  std::vector<NodePair> selection;
  ContractionPolicy used = opts.policy;
  switch (opts.policy) {
    case ContractionPolicy::kGaec:
      selection = select_max_edge(g);
      break;
    case ContractionPolicy::kMatching:
      selection = select_matching(g, opts.matching, opts.threads);
      break;
    case ContractionPolicy::kSpanningForest:
      selection = select_spanning_forest_no_conflicts(g);
      break;
    case ContractionPolicy::kAuto: {
      selection = select_matching(g, opts.matching, opts.threads);
      used = ContractionPolicy::kMatching;
      if (static_cast<double>(selection.size()) <
          opts.switch_fraction * static_cast<double>(g.num_nodes())) {
        auto forest = select_spanning_forest_no_conflicts(g);
        // An empty forest would end the caller's loop while the matching
        // still has joins to offer.
        if (!forest.empty()) {
          selection = std::move(forest);
          used = ContractionPolicy::kSpanningForest;
        }
      }
      break;
    }
  }

  StepResult out;
  out.used = used;
  out.selected = selection.size();
  if (selection.empty()) {
    out.graph = g;
    out.mapping = ContractionMapping::identity(g.num_nodes());
    return out;
  }
  out.mapping = connected_components(g.num_nodes(), selection);
  auto contracted = contract_graph(g, out.mapping, opts.threads);
  out.graph = std::move(contracted.graph);
  out.joined_cost = contracted.joined_cost;
  return out;
}

ContractionMapping greedy_additive_contraction(const WeightedGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::unordered_map<NodeId, double>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u][e.v] = e.cost;
    adj[e.v][e.u] = e.cost;
  }

  // Clusters are named by their smallest node, which is also the order of
  // the canonical labeling of the contracted graph. Ties between equal costs
  // therefore resolve to the lexicographically smallest (a, b) exactly as
  // select_max_edge does on the contracted graph.
  struct Candidate {
    double cost;
    NodeId a;
    NodeId b;
  };
  auto lower_priority = [](const Candidate& x, const Candidate& y) {
    if (x.cost != y.cost) return x.cost < y.cost;
    return x.a != y.a ? x.a > y.a : x.b > y.b;
  };
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(lower_priority)> queue(
      lower_priority);
  for (const auto& e : g.edges()) {
    if (e.cost > 0.0) queue.push({e.cost, e.u, e.v});
  }

  std::vector<char> alive(n, 1);
  std::vector<NodePair> merges;
  while (!queue.empty()) {
    const Candidate top = queue.top();
    queue.pop();
    if (!alive[top.a] || !alive[top.b]) continue;
    auto it = adj[top.a].find(top.b);
    if (it == adj[top.a].end() || it->second != top.cost) continue;

    const NodeId keep = top.a;
    const NodeId gone = top.b;
    merges.push_back({keep, gone});
    alive[gone] = 0;
    adj[keep].erase(gone);
    adj[gone].erase(keep);
    for (const auto& [x, c] : adj[gone]) {
      adj[x].erase(gone);
      double& merged = adj[keep][x];
      merged += c;
      adj[x][keep] = merged;
      if (merged > 0.0) queue.push({merged, std::min(keep, x), std::max(keep, x)});
    }
    adj[gone].clear();
  }
  return connected_components(n, merges);
}

}  // namespace parmc
