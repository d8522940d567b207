#include "parmc/dual.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "detail/positive_adjacency.hpp"
#include "parmc/parallel.hpp"

namespace parmc {

// ---------------------------------------------------------------------------
// Separation

namespace {

constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Per-worker scratch for bounded searches. Stamps avoid clearing the
/// node-sized arrays between queries.
struct SearchScratch {
  explicit SearchScratch(std::size_t n)
      : seen_stamp(n, 0), parent(n, kNoNode), depth(n, 0), near_stamp(n, 0), near_dist(n, 0) {}

  std::uint32_t next_stamp() {
    if (++stamp == 0) {
      std::fill(seen_stamp.begin(), seen_stamp.end(), 0);
      std::fill(near_stamp.begin(), near_stamp.end(), 0);
      stamp = 1;
    }
    return stamp;
  }

  std::uint32_t stamp = 0;
  std::vector<std::uint32_t> seen_stamp;
  std::vector<NodeId> parent;
  std::vector<std::uint8_t> depth;
  std::vector<std::uint32_t> near_stamp;
  std::vector<std::uint8_t> near_dist;
  std::vector<NodeId> queue;
};

/// Breadth-first search from `from` to `to` over attractive edges, at most
/// max_hops hops. Returns the path from..to, or empty.
///
/// A bounded backward search from `to` gives exact distances within radius
/// max_hops / 2; forward expansion skips nodes that provably cannot reach
/// `to` in the remaining hops. Skipped nodes are never on a qualifying path,
/// and every node on such a path is first discovered from a node that is not
/// skipped, so the returned path equals the one of the unpruned search.
std::vector<NodeId> shortest_attractive_path(const detail::PositiveAdjacency& adj, NodeId from,
                                             NodeId to, std::size_t max_hops,
                                             SearchScratch& s) {
  const std::uint32_t stamp = s.next_stamp();
  const std::size_t radius = max_hops / 2;

  s.queue.assign(1, to);
  s.near_stamp[to] = stamp;
  s.near_dist[to] = 0;
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    const NodeId v = s.queue[head];
    if (s.near_dist[v] >= radius) continue;
    for (const auto& nb : adj.of(v)) {
      if (s.near_stamp[nb.node] == stamp) continue;
      s.near_stamp[nb.node] = stamp;
      s.near_dist[nb.node] = static_cast<std::uint8_t>(s.near_dist[v] + 1);
      s.queue.push_back(nb.node);
    }
  }
  auto distance_bound = [&](NodeId v) -> std::size_t {
    return s.near_stamp[v] == stamp ? s.near_dist[v] : radius + 1;
  };

  s.queue.assign(1, from);
  s.seen_stamp[from] = stamp;
  s.depth[from] = 0;
  s.parent[from] = kNoNode;
  for (std::size_t head = 0; head < s.queue.size(); ++head) {
    const NodeId v = s.queue[head];
    const std::size_t d = s.depth[v];
    if (d >= max_hops || d + distance_bound(v) > max_hops) continue;
    for (const auto& nb : adj.of(v)) {
      const NodeId w = nb.node;
      if (s.seen_stamp[w] == stamp) continue;
      s.seen_stamp[w] = stamp;
      s.parent[w] = v;
      s.depth[w] = static_cast<std::uint8_t>(d + 1);
      if (w == to) {
        std::vector<NodeId> path;
        for (NodeId x = to; x != kNoNode; x = s.parent[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        return path;
      }
      s.queue.push_back(w);
    }
  }
  return {};
}

}  // namespace

std::vector<ConflictedCycle> separate_conflicted_cycles(const WeightedGraph& g,
                                                        std::size_t max_len, unsigned threads) {
  if (max_len < 3) throw std::invalid_argument("maximum cycle length must be at least 3");
  if (max_len > 255) throw std::invalid_argument("maximum cycle length must be at most 255");
  detail::PositiveAdjacency adj(g);

  std::vector<std::size_t> repulsive;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (g.edge(i).cost < 0.0) repulsive.push_back(i);
  }

  std::vector<std::vector<NodeId>> found(repulsive.size());
  parallel_blocks(repulsive.size(), threads, [&](unsigned, std::size_t begin, std::size_t end) {
    SearchScratch scratch(g.num_nodes());
    for (std::size_t r = begin; r < end; ++r) {
      const Edge& e = g.edge(repulsive[r]);
      found[r] = shortest_attractive_path(adj, e.u, e.v, max_len - 1, scratch);
    }
  });

  std::vector<ConflictedCycle> cycles;
  for (auto& path : found) {
    if (!path.empty()) cycles.push_back(ConflictedCycle{std::move(path)});
  }
  return cycles;
}

// ---------------------------------------------------------------------------
// Dual state

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

}  // namespace

DualState::DualState(const WeightedGraph& g)
    : num_nodes_(g.num_nodes()),
      num_original_edges_(g.num_edges()),
      edges_(g.edges().begin(), g.edges().end()) {
  if (g.num_edges() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("too many edges for the dual state");
  }
  sorted_edges_.resize(edges_.size());
  std::iota(sorted_edges_.begin(), sorted_edges_.end(), std::uint32_t{0});
  rebuild_incidence();
}

std::size_t DualState::find_edge(NodeId u, NodeId v) const {
  const std::uint64_t key = pair_key(u, v);
  auto it = std::lower_bound(sorted_edges_.begin(), sorted_edges_.end(), key,
                             [&](std::uint32_t id, std::uint64_t k) {
                               return pair_key(edges_[id].u, edges_[id].v) < k;
                             });
  if (it != sorted_edges_.end() && pair_key(edges_[*it].u, edges_[*it].v) == key) return *it;
  return npos;
}

void DualState::add_cycles(std::span<const ConflictedCycle> cycles) {
  // Candidate triangles in discovery order, deduplicated by node triple.
  struct Candidate {
    std::array<NodeId, 3> nodes;
    std::size_t order;
  };
  std::vector<Candidate> candidates;
  for (const auto& cycle : cycles) {
    const auto& v = cycle.nodes;
    if (v.size() < 3) throw std::invalid_argument("cycle with fewer than three nodes");
    for (std::size_t m = 1; m + 1 < v.size(); ++m) {
      std::array<NodeId, 3> tri = {v[0], v[m], v[m + 1]};
      std::sort(tri.begin(), tri.end());
      if (tri[0] == tri[1] || tri[1] == tri[2]) {
        throw std::invalid_argument("cycle visits a node twice");
      }
      if (tri[2] >= num_nodes_) throw std::invalid_argument("cycle node out of range");
      candidates.push_back({tri, candidates.size()});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.nodes < b.nodes; });
  std::vector<Candidate> fresh;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i > 0 && candidates[i].nodes == candidates[i - 1].nodes) continue;
    if (std::binary_search(sorted_triples_.begin(), sorted_triples_.end(), candidates[i].nodes)) {
      continue;
    }
    fresh.push_back(candidates[i]);
  }
  if (fresh.empty()) return;
  std::vector<std::array<NodeId, 3>> merged_triples;
  merged_triples.reserve(sorted_triples_.size() + fresh.size());
  {
    std::vector<std::array<NodeId, 3>> fresh_sorted;
    fresh_sorted.reserve(fresh.size());
    for (const auto& c : fresh) fresh_sorted.push_back(c.nodes);
    std::merge(sorted_triples_.begin(), sorted_triples_.end(), fresh_sorted.begin(),
               fresh_sorted.end(), std::back_inserter(merged_triples));
  }
  sorted_triples_ = std::move(merged_triples);
  std::sort(fresh.begin(), fresh.end(),
            [](const Candidate& a, const Candidate& b) { return a.order < b.order; });

  std::unordered_map<std::uint64_t, std::uint32_t> chords;
  const std::size_t first_chord = edges_.size();
  auto edge_id = [&](NodeId a, NodeId b) -> std::uint32_t {
    const std::size_t existing = find_edge(a, b);
    if (existing != npos) return static_cast<std::uint32_t>(existing);
    auto [it, inserted] =
        chords.try_emplace(pair_key(a, b), static_cast<std::uint32_t>(edges_.size()));
    if (inserted) edges_.push_back({std::min(a, b), std::max(a, b), 0.0});
    return it->second;
  };
  triplets_.reserve(triplets_.size() + fresh.size());
  for (const auto& c : fresh) {
    const auto [i, j, k] = c.nodes;
    triplets_.push_back({c.nodes, {edge_id(i, j), edge_id(i, k), edge_id(j, k)}});
  }
  lambda_.resize(3 * triplets_.size(), 0.0);

  if (edges_.size() > first_chord) {
    std::vector<std::uint32_t> added(edges_.size() - first_chord);
    std::iota(added.begin(), added.end(), static_cast<std::uint32_t>(first_chord));
    std::sort(added.begin(), added.end(), [&](std::uint32_t a, std::uint32_t b) {
      return pair_key(edges_[a].u, edges_[a].v) < pair_key(edges_[b].u, edges_[b].v);
    });
    std::vector<std::uint32_t> merged;
    merged.reserve(edges_.size());
    std::merge(sorted_edges_.begin(), sorted_edges_.end(), added.begin(), added.end(),
               std::back_inserter(merged), [&](std::uint32_t a, std::uint32_t b) {
                 return pair_key(edges_[a].u, edges_[a].v) < pair_key(edges_[b].u, edges_[b].v);
               });
    sorted_edges_ = std::move(merged);
  }
  rebuild_incidence();
}

void DualState::rebuild_incidence() {
  offsets_.assign(edges_.size() + 1, 0);
  for (const auto& t : triplets_) {
    for (auto e : t.edges) ++offsets_[e + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidence_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t t = 0; t < triplets_.size(); ++t) {
    for (int s = 0; s < 3; ++s) {
      incidence_[cursor[triplets_[t].edges[s]]++] = static_cast<std::uint32_t>(3 * t + s);
    }
  }
}

double DualState::reparametrized_edge_cost(std::size_t e) const {
  double c = edges_[e].cost;
  for (auto idx : incidence(e)) c += lambda_[idx];
  return c;
}

std::vector<double> DualState::reparametrized_edge_costs(unsigned threads) const {
  std::vector<double> costs(edges_.size());
  parallel_for(edges_.size(), threads,
               [&](std::size_t e) { costs[e] = reparametrized_edge_cost(e); });
  return costs;
}

std::array<double, 3> DualState::triplet_coefficients(std::size_t t) const {
  return {-lambda_[3 * t], -lambda_[3 * t + 1], -lambda_[3 * t + 2]};
}

DualState triangulate(std::span<const ConflictedCycle> cycles, const WeightedGraph& g) {
  DualState state(g);
  state.add_cycles(cycles);
  return state;
}

// ---------------------------------------------------------------------------
// Message passing

double triangle_min_marginal(const std::array<double, 3>& coefficients, int slot) {
  const std::uint8_t bit = static_cast<std::uint8_t>(1u << slot);
  double cut = std::numeric_limits<double>::infinity();
  double uncut = std::numeric_limits<double>::infinity();
  for (auto y : kTriangleLabelings) {
    const double c = triangle_cost(coefficients, y);
    if (y & bit) {
      cut = std::min(cut, c);
    } else {
      uncut = std::min(uncut, c);
    }
  }
  return cut - uncut;
}

double triangle_min_marginal(const DualState& state, std::size_t t, int slot) {
  return triangle_min_marginal(state.triplet_coefficients(t), slot);
}

namespace {

void edge_to_triplets(DualState& state, std::size_t e) {
  const std::size_t cov = state.coverage(e);
  if (cov == 0) return;
  const double share = state.reparametrized_edge_cost(e) / static_cast<double>(cov);
  auto lambda = state.lambda();
  for (auto idx : state.incidence(e)) lambda[idx] -= share;
}

struct DampedStep {
  int slot;
  double weight;
};

// ij, ik, jk with 1/3, 1/2, 1; then ij, ik with 1/2, 1; then ij in full.
constexpr std::array<DampedStep, 6> kTripletSchedule = {
    {{0, 1.0 / 3.0}, {1, 0.5}, {2, 1.0}, {0, 0.5}, {1, 1.0}, {0, 1.0}}};

void triplet_to_edges(DualState& state, std::size_t t) {
  auto lambda = state.lambda().subspan(3 * t, 3);
  for (const auto& step : kTripletSchedule) {
    const std::array<double, 3> w = {-lambda[0], -lambda[1], -lambda[2]};
    lambda[step.slot] += step.weight * triangle_min_marginal(w, step.slot);
  }
}

}  // namespace

void mp_edge_to_triplets(DualState& state, unsigned threads) {
  parallel_for(state.num_edges(), threads, [&](std::size_t e) { edge_to_triplets(state, e); });
}

void mp_edge_to_triplets(DualState& state, std::span<const std::size_t> order) {
  for (auto e : order) edge_to_triplets(state, e);
}

void mp_triplets_to_edges(DualState& state, unsigned threads) {
  parallel_for(state.num_triplets(), threads,
               [&](std::size_t t) { triplet_to_edges(state, t); });
}

void mp_triplets_to_edges(DualState& state, std::span<const std::size_t> order) {
  for (auto t : order) triplet_to_edges(state, t);
}

void message_passing_iteration(DualState& state, unsigned threads) {
  mp_edge_to_triplets(state, threads);
  mp_triplets_to_edges(state, threads);
}

namespace {

double triplet_minimum(const std::array<double, 3>& w) {
  double best = std::numeric_limits<double>::infinity();
  for (auto y : kTriangleLabelings) best = std::min(best, triangle_cost(w, y));
  return best;
}

}  // namespace

double lower_bound(const DualState& state, unsigned threads) {
  std::vector<double> edge_terms(state.num_edges());
  parallel_for(state.num_edges(), threads, [&](std::size_t e) {
    edge_terms[e] = std::min(0.0, state.reparametrized_edge_cost(e));
  });
  std::vector<double> triplet_terms(state.num_triplets());
  parallel_for(state.num_triplets(), threads, [&](std::size_t t) {
    triplet_terms[t] = triplet_minimum(state.triplet_coefficients(t));
  });
  // Sequential sums keep the value independent of the thread count.
  double lb = 0.0;
  for (double x : edge_terms) lb += x;
  for (double x : triplet_terms) lb += x;
  return lb;
}

double reparametrized_objective(const DualState& state, std::span<const ClusterId> cluster_of) {
  if (cluster_of.size() != state.num_nodes()) {
    throw std::invalid_argument("labeling size does not match the dual state");
  }
  auto cut = [&](std::size_t e) {
    const Edge& edge = state.edges()[e];
    return cluster_of[edge.u] != cluster_of[edge.v];
  };
  double total = 0.0;
  for (std::size_t e = 0; e < state.num_edges(); ++e) {
    if (cut(e)) total += state.reparametrized_edge_cost(e);
  }
  for (std::size_t t = 0; t < state.num_triplets(); ++t) {
    const auto& tri = state.triplets()[t];
    std::uint8_t y = 0;
    for (int s = 0; s < 3; ++s) {
      if (cut(tri.edges[s])) y |= static_cast<std::uint8_t>(1u << s);
    }
    total += triangle_cost(state.triplet_coefficients(t), y);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Edge-triangle agreement

bool check_edge_triangle_agreement(const DualState& state, double eps) {
  if (eps < 0.0) throw std::invalid_argument("eps must be non-negative");
  const std::size_t num_edges = state.num_edges();
  const std::size_t num_triplets = state.num_triplets();

  // Edge label sets: bit 0 = uncut, bit 1 = cut.
  std::vector<std::uint8_t> edge_set(num_edges, 0);
  for (std::size_t e = 0; e < num_edges; ++e) {
    const double c = state.reparametrized_edge_cost(e);
    const double best = std::min(0.0, c);
    if (0.0 <= best + eps) edge_set[e] |= 1;
    if (c <= best + eps) edge_set[e] |= 2;
  }
  // Triplet pattern sets: bit k = kTriangleLabelings[k].
  std::vector<std::uint8_t> triplet_set(num_triplets, 0);
  for (std::size_t t = 0; t < num_triplets; ++t) {
    const auto w = state.triplet_coefficients(t);
    const double best = triplet_minimum(w);
    for (std::size_t k = 0; k < kTriangleLabelings.size(); ++k) {
      if (triangle_cost(w, kTriangleLabelings[k]) <= best + eps) {
        triplet_set[t] |= static_cast<std::uint8_t>(1u << k);
      }
    }
  }

  auto label_of = [](std::size_t k, int slot) { return (kTriangleLabelings[k] >> slot) & 1; };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t t = 0; t < num_triplets; ++t) {
      const auto& tri = state.triplets()[t];
      std::uint8_t kept = 0;
      for (std::size_t k = 0; k < kTriangleLabelings.size(); ++k) {
        if (!(triplet_set[t] >> k & 1)) continue;
        bool ok = true;
        for (int s = 0; s < 3 && ok; ++s) {
          ok = edge_set[tri.edges[s]] >> label_of(k, s) & 1;
        }
        if (ok) kept |= static_cast<std::uint8_t>(1u << k);
      }
      if (kept != triplet_set[t]) {
        triplet_set[t] = kept;
        changed = true;
      }
      for (int s = 0; s < 3; ++s) {
        std::uint8_t projection = 0;
        for (std::size_t k = 0; k < kTriangleLabelings.size(); ++k) {
          if (kept >> k & 1) projection |= static_cast<std::uint8_t>(1u << label_of(k, s));
        }
        const std::uint32_t e = tri.edges[s];
        const std::uint8_t narrowed = edge_set[e] & projection;
        if (narrowed != edge_set[e]) {
          edge_set[e] = narrowed;
          changed = true;
        }
      }
    }
  }
  return std::none_of(edge_set.begin(), edge_set.end(), [](auto m) { return m == 0; }) &&
         std::none_of(triplet_set.begin(), triplet_set.end(), [](auto m) { return m == 0; });
}

}  // namespace parmc
