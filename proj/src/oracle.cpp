#include "parmc/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace parmc::oracle {

OracleResult brute_force_optimum(const WeightedGraph& g) {
  const std::size_t n = g.num_nodes();
  if (n > kMaxBruteForceNodes) {
    throw std::invalid_argument("brute force is limited to " +
                                std::to_string(kMaxBruteForceNodes) + " nodes, got " +
                                std::to_string(n));
  }
  OracleResult best;
  best.optimum_cost = std::numeric_limits<double>::infinity();

  // labels[i] <= 1 + max(labels[0..i-1]) enumerates every partition once.
  std::vector<ClusterId> labels(n, 0);
  std::vector<ClusterId> prefix_max(n, 0);
  auto advance = [&] {
    for (std::size_t i = n; i-- > 1;) {
      if (labels[i] > prefix_max[i - 1]) continue;
      ++labels[i];
      prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);
      for (std::size_t j = i + 1; j < n; ++j) {
        labels[j] = 0;
        prefix_max[j] = prefix_max[i];
      }
      return true;
    }
    return false;
  };
  do {
    double cost = 0.0;
    for (const auto& e : g.edges()) {
      if (labels[e.u] != labels[e.v]) cost += e.cost;
    }
    if (cost < best.optimum_cost) {
      best.optimum_cost = cost;
      best.optimum_labeling.cluster_of = labels;
    }
  } while (advance());
  if (n == 0) best.optimum_cost = 0.0;
  ClusterId max_label = 0;
  for (auto l : best.optimum_labeling.cluster_of) max_label = std::max(max_label, l);
  best.optimum_labeling.num_clusters = n == 0 ? 0 : max_label + 1;
  return best;
}

namespace {

// Plain label propagation until nothing changes.
std::vector<NodeId> component_labels(std::size_t n, const std::vector<NodePair>& S) {
  std::vector<NodeId> label(n);
  for (std::size_t v = 0; v < n; ++v) label[v] = static_cast<NodeId>(v);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : S) {
      NodeId m = std::min(label[p.u], label[p.v]);
      if (label[p.u] != m || label[p.v] != m) {
        label[p.u] = label[p.v] = m;
        changed = true;
      }
    }
  }
  // Component minimum -> dense ids in order of that minimum.
  std::map<NodeId, NodeId> dense;
  for (std::size_t v = 0; v < n; ++v) {
    if (!dense.count(label[v])) {
      NodeId next = static_cast<NodeId>(dense.size());
      dense[label[v]] = next;
    }
  }
  for (auto& l : label) l = dense[l];
  return label;
}

}  // namespace

NaiveContraction naive_contract(const WeightedGraph& g, const std::vector<NodePair>& S) {
  for (const auto& p : S) {
    if (p.u >= g.num_nodes() || p.v >= g.num_nodes()) {
      throw std::invalid_argument("contraction pair out of range");
    }
  }
  std::vector<NodeId> label = component_labels(g.num_nodes(), S);
  NodeId targets = 0;
  for (auto l : label) targets = std::max<NodeId>(targets, l + 1);

  NaiveContraction out;
  std::map<std::pair<NodeId, NodeId>, double> merged;
  for (const auto& e : g.edges()) {
    NodeId a = label[e.u];
    NodeId b = label[e.v];
    if (a == b) {
      out.joined_cost += e.cost;
      continue;
    }
    if (a > b) std::swap(a, b);
    merged[{a, b}] += e.cost;
  }
  std::vector<Edge> edges;
  for (const auto& [key, cost] : merged) edges.push_back({key.first, key.second, cost});
  out.graph = WeightedGraph(g.num_nodes() == 0 ? 0 : targets, std::move(edges));
  return out;
}

OracleResult naive_gaec(const WeightedGraph& g) {
  const std::size_t n = g.num_nodes();
  // Cluster representative = smallest member.
  std::vector<NodeId> rep(n);
  for (std::size_t v = 0; v < n; ++v) rep[v] = static_cast<NodeId>(v);

  while (true) {
    std::map<std::pair<NodeId, NodeId>, double> between;
    for (const auto& e : g.edges()) {
      NodeId a = rep[e.u];
      NodeId b = rep[e.v];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      between[{a, b}] += e.cost;
    }
    bool found = false;
    std::pair<NodeId, NodeId> pick;
    double pick_cost = 0.0;
    for (const auto& [key, cost] : between) {
      if (cost > 0.0 && (!found || cost > pick_cost)) {
        found = true;
        pick = key;
        pick_cost = cost;
      }
    }
    if (!found) break;
    for (auto& r : rep) {
      if (r == pick.second) r = pick.first;
    }
  }

  OracleResult out;
  out.optimum_labeling.cluster_of.resize(n);
  std::map<NodeId, ClusterId> dense;
  for (std::size_t v = 0; v < n; ++v) {
    if (!dense.count(rep[v])) {
      ClusterId next = static_cast<ClusterId>(dense.size());
      dense[rep[v]] = next;
    }
    out.optimum_labeling.cluster_of[v] = dense[rep[v]];
  }
  out.optimum_labeling.num_clusters = dense.size();
  double cost = 0.0;
  for (const auto& e : g.edges()) {
    if (rep[e.u] != rep[e.v]) cost += e.cost;
  }
  out.optimum_cost = cost;
  return out;
}

std::set<ConflictedCycle> enumerate_conflicted_cycles_exhaustive(const WeightedGraph& g,
                                                                 std::size_t max_len) {
  const std::size_t n = g.num_nodes();
  if (n > kMaxCycleEnumerationNodes) {
    throw std::invalid_argument("cycle enumeration is limited to " +
                                std::to_string(kMaxCycleEnumerationNodes) + " nodes");
  }
  std::vector<std::vector<NodeId>> positive(n);
  for (const auto& e : g.edges()) {
    if (e.cost > 0.0) {
      positive[e.u].push_back(e.v);
      positive[e.v].push_back(e.u);
    }
  }

  std::set<ConflictedCycle> cycles;
  for (const auto& e : g.edges()) {
    if (!(e.cost < 0.0)) continue;
    const NodeId start = std::min(e.u, e.v);
    const NodeId goal = std::max(e.u, e.v);
    std::vector<NodeId> path = {start};
    std::vector<bool> on_path(n, false);
    on_path[start] = true;
    std::function<void(NodeId)> extend = [&](NodeId v) {
      for (NodeId w : positive[v]) {
        if (on_path[w]) continue;
        if (w == goal) {
          // path plus goal has path.size() + 1 nodes, that many edges in the cycle.
          if (path.size() + 1 >= 3 && path.size() + 1 <= max_len) {
            std::vector<NodeId> nodes = path;
            nodes.push_back(goal);
            cycles.insert(ConflictedCycle{nodes});
          }
          continue;
        }
        if (path.size() + 1 >= max_len) continue;
        on_path[w] = true;
        path.push_back(w);
        extend(w);
        path.pop_back();
        on_path[w] = false;
      }
    };
    extend(start);
  }
  return cycles;
}

}  // namespace parmc::oracle
