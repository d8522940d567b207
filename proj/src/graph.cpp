#include "parmc/graph.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace parmc {

WeightedGraph::WeightedGraph(std::size_t num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes) {
  if (num_nodes > std::numeric_limits<NodeId>::max()) {
    throw std::invalid_argument("node count exceeds the supported id range");
  }
  for (auto& e : edges) {
    if (e.u == e.v) {
      throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    }
    if (e.u >= num_nodes || e.v >= num_nodes) {
      throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.u) + " " +
                                  std::to_string(e.v));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  // Stable so that parallel edges are summed in input order.
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (out > 0 && edges[out - 1].u == edges[i].u && edges[out - 1].v == edges[i].v) {
      edges[out - 1].cost += edges[i].cost;
    } else {
      edges[out++] = edges[i];
    }
  }
  edges.resize(out);
  edges_ = std::move(edges);
}

WeightedGraph WeightedGraph::from_canonical(std::size_t num_nodes, std::vector<Edge> edges) {
#ifndef NDEBUG
  for (std::size_t i = 0; i < edges.size(); ++i) {
    assert(edges[i].u < edges[i].v && edges[i].v < num_nodes);
    assert(i == 0 || edges[i - 1].u < edges[i].u ||
           (edges[i - 1].u == edges[i].u && edges[i - 1].v < edges[i].v));
  }
#endif
  WeightedGraph g;
  g.num_nodes_ = num_nodes;
  g.edges_ = std::move(edges);
  return g;
}

std::size_t WeightedGraph::find_edge(NodeId u, NodeId v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), NodePair{u, v},
                             [](const Edge& e, const NodePair& p) {
                               return e.u != p.u ? e.u < p.u : e.v < p.v;
                             });
  if (it != edges_.end() && it->u == u && it->v == v) {
    return static_cast<std::size_t>(it - edges_.begin());
  }
  return npos;
}

namespace {

template <class Int>
Labeling canonicalize(std::span<const Int> labels) {
  Labeling out;
  out.cluster_of.resize(labels.size());
  std::unordered_map<Int, ClusterId> seen;
  seen.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = seen.try_emplace(labels[i], static_cast<ClusterId>(seen.size()));
    out.cluster_of[i] = it->second;
  }
  out.num_clusters = seen.size();
  return out;
}

}  // namespace

Labeling Labeling::canonical(std::span<const std::uint64_t> labels) {
  return canonicalize(labels);
}

Labeling Labeling::canonical(std::span<const ClusterId> labels) { return canonicalize(labels); }

Labeling Labeling::singletons(std::size_t n) {
  Labeling lab;
  lab.cluster_of.resize(n);
  std::iota(lab.cluster_of.begin(), lab.cluster_of.end(), ClusterId{0});
  lab.num_clusters = n;
  return lab;
}

Labeling Labeling::single_cluster(std::size_t n) {
  Labeling lab;
  lab.cluster_of.assign(n, 0);
  lab.num_clusters = n > 0 ? 1 : 0;
  return lab;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (is_blank(s.front()) || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (is_blank(s.back()) || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_blank(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_blank(s[i])) ++i;
    if (i > start) fields.push_back(s.substr(start, i - start));
  }
  return fields;
}

std::int64_t parse_int(std::string_view field, std::size_t line, const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

double parse_real(std::string_view field, std::size_t line) {
  // from_chars rejects a leading '+', which the format allows.
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, "malformed cost '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

WeightedGraph parse_instance(std::string_view text) {
  bool seen_header = false;
  bool seen_edge = false;
  std::int64_t declared_nodes = -1;
  std::int64_t max_id = -1;
  std::vector<Edge> edges;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;

    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != "MULTICUT") throw ParseError(line_no, "expected MULTICUT header");
      seen_header = true;
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() == 2 && fields[0] == "NODES") {
      if (seen_edge || declared_nodes >= 0) {
        throw ParseError(line_no, "NODES must directly follow the header");
      }
      declared_nodes = parse_int(fields[1], line_no, "node count");
      if (declared_nodes < 0) throw ParseError(line_no, "negative node count");
      continue;
    }
    if (fields.size() != 3) throw ParseError(line_no, "expected '<u> <v> <cost>'");
    std::int64_t u = parse_int(fields[0], line_no, "node id");
    std::int64_t v = parse_int(fields[1], line_no, "node id");
    double c = parse_real(fields[2], line_no);
    if (u < 0 || v < 0) throw ParseError(line_no, "negative node id");
    if (u == v) throw ParseError(line_no, "self-loop on node " + std::to_string(u));
    if (std::max(u, v) >= static_cast<std::int64_t>(std::numeric_limits<NodeId>::max())) {
      throw ParseError(line_no, "node id too large");
    }
    if (declared_nodes >= 0 && std::max(u, v) >= declared_nodes) {
      throw ParseError(line_no, "node id exceeds NODES " + std::to_string(declared_nodes));
    }
    max_id = std::max({max_id, u, v});
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), c});
    seen_edge = true;
  }
  if (!seen_header) throw ParseError(line_no + 1, "missing MULTICUT header");

  std::size_t n = declared_nodes >= 0 ? static_cast<std::size_t>(declared_nodes)
                                      : static_cast<std::size_t>(max_id + 1);
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const WeightedGraph& g) {
  std::string out = "MULTICUT\nNODES " + std::to_string(g.num_nodes()) + "\n";
  out.reserve(out.size() + g.num_edges() * 32);
  char buf[64];
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += ' ';
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.cost);
    out.append(buf, ptr);
    out += '\n';
  }
  return out;
}

void write_instance(const std::filesystem::path& path, const WeightedGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_instance(g);
}

SparseAdjacency build_adjacency(const WeightedGraph& g) {
  SparseAdjacency adj;
  adj.num_nodes = g.num_nodes();
  const std::size_t nnz = 2 * g.num_edges();

  // Counting sort by row. Edges are sorted by (u, v), so row r receives its
  // entries (r, x < r) in ascending x before any entry (r, x > r), which also
  // arrive in ascending x: every row comes out sorted without a second pass.
  std::vector<std::size_t> offsets(g.num_nodes() + 1, 0);
  for (const auto& e : g.edges()) {
    ++offsets[e.u + 1];
    ++offsets[e.v + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  adj.rows.resize(nnz);
  adj.cols.resize(nnz);
  adj.vals.resize(nnz);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& e : g.edges()) {
    std::size_t a = cursor[e.u]++;
    adj.rows[a] = e.u;
    adj.cols[a] = e.v;
    adj.vals[a] = e.cost;
    std::size_t b = cursor[e.v]++;
    adj.rows[b] = e.v;
    adj.cols[b] = e.u;
    adj.vals[b] = e.cost;
  }
  return adj;
}

WeightedGraph adjacency_to_graph(const SparseAdjacency& adj) {
  std::vector<Edge> edges;
  edges.reserve(adj.nnz() / 2);
  for (std::size_t i = 0; i < adj.nnz(); ++i) {
    if (adj.rows[i] < adj.cols[i]) edges.push_back({adj.rows[i], adj.cols[i], adj.vals[i]});
  }
  return WeightedGraph(adj.num_nodes, std::move(edges));
}

double clustering_cost(const WeightedGraph& g, std::span<const ClusterId> cluster_of) {
  if (cluster_of.size() != g.num_nodes()) {
    throw std::invalid_argument("labeling has " + std::to_string(cluster_of.size()) +
                                " entries for a graph with " + std::to_string(g.num_nodes()) +
                                " nodes");
  }
  double cost = 0.0;
  for (const auto& e : g.edges()) {
    if (cluster_of[e.u] != cluster_of[e.v]) cost += e.cost;
  }
  return cost;
}

double clustering_cost(const WeightedGraph& g, const Labeling& lab) {
  return clustering_cost(g, std::span<const ClusterId>(lab.cluster_of));
}

}  // namespace parmc
