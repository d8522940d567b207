#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <tuple>

#include "parmc/contraction.hpp"
#include "parmc/dual.hpp"
#include "parmc/generate.hpp"
#include "parmc/graph.hpp"
#include "parmc/oracle.hpp"
#include "parmc/solver.hpp"

namespace py = pybind11;
using namespace parmc;

namespace {

using EdgeTuple = std::tuple<NodeId, NodeId, double>;

WeightedGraph graph_from_tuples(std::size_t num_nodes, const std::vector<EdgeTuple>& edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [u, v, c] : edges) out.push_back({u, v, c});
  return WeightedGraph(num_nodes, std::move(out));
}

std::vector<EdgeTuple> graph_edges(const WeightedGraph& g) {
  std::vector<EdgeTuple> out;
  out.reserve(g.num_edges());
  for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.cost);
  return out;
}

py::tuple oracle_tuple(const oracle::OracleResult& r) {
  return py::make_tuple(r.optimum_cost, r.optimum_labeling.cluster_of);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parallel primal-dual minimum-cost multicut solver";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Edge>(m, "Edge")
      .def(py::init<NodeId, NodeId, double>(), py::arg("u"), py::arg("v"), py::arg("cost"))
      .def_readwrite("u", &Edge::u)
      .def_readwrite("v", &Edge::v)
      .def_readwrite("cost", &Edge::cost)
      .def("__eq__", [](const Edge& a, const Edge& b) { return a == b; })
      .def("__repr__", [](const Edge& e) {
        return "Edge(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ", " +
               py::repr(py::float_(e.cost)).cast<std::string>() + ")";
      });

  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def(py::init(&graph_from_tuples), py::arg("num_nodes"), py::arg("edges"),
           "Graph from (u, v, cost) triples. Parallel edges are summed.")
      .def_property_readonly("num_nodes", &WeightedGraph::num_nodes)
      .def_property_readonly("num_edges", &WeightedGraph::num_edges)
      .def_property_readonly("edges", &graph_edges, "Canonical (u, v, cost) triples, u < v.")
      .def("find_edge",
           [](const WeightedGraph& g, NodeId u, NodeId v) -> std::optional<std::size_t> {
             auto e = g.find_edge(u, v);
             if (e == WeightedGraph::npos) return std::nullopt;
             return e;
           })
      .def("__repr__", [](const WeightedGraph& g) {
        return "WeightedGraph(num_nodes=" + std::to_string(g.num_nodes()) +
               ", num_edges=" + std::to_string(g.num_edges()) + ")";
      });

  py::class_<Labeling>(m, "Labeling")
      .def_readonly("cluster_of", &Labeling::cluster_of)
      .def_readonly("num_clusters", &Labeling::num_clusters);

  py::class_<ContractionMapping>(m, "ContractionMapping")
      .def(py::init([](std::vector<NodeId> map, std::size_t num_targets) {
             return ContractionMapping{std::move(map), num_targets};
           }),
           py::arg("map"), py::arg("num_targets"))
      .def_readonly("map", &ContractionMapping::map)
      .def_readonly("num_targets", &ContractionMapping::num_targets);

  m.def("parse_instance", &parse_instance, py::arg("text"));
  m.def("read_instance", &read_instance, py::arg("path"));
  m.def("serialize_instance", &serialize_instance, py::arg("graph"));
  m.def("write_instance", &write_instance, py::arg("path"), py::arg("graph"));
  m.def(
      "clustering_cost",
      [](const WeightedGraph& g, const std::vector<ClusterId>& labels) {
        return clustering_cost(g, labels);
      },
      py::arg("graph"), py::arg("labels"));

  m.def(
      "connected_components",
      [](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
        std::vector<NodePair> s;
        for (const auto& [u, v] : pairs) s.push_back({u, v});
        return connected_components(n, s);
      },
      py::arg("num_nodes"), py::arg("pairs"));
  m.def(
      "contract_graph",
      [](const WeightedGraph& g, const ContractionMapping& f, unsigned threads) {
        auto r = contract_graph(g, f, threads);
        return py::make_tuple(std::move(r.graph), r.joined_cost);
      },
      py::arg("graph"), py::arg("mapping"), py::arg("threads") = 1,
      "Returns (contracted graph, joined cost).");
  m.def("greedy_additive_contraction", &greedy_additive_contraction, py::arg("graph"));
  m.def(
      "separate_conflicted_cycles",
      [](const WeightedGraph& g, std::size_t max_len, unsigned threads) {
        std::vector<std::vector<NodeId>> out;
        for (auto& c : separate_conflicted_cycles(g, max_len, threads)) {
          out.push_back(std::move(c.nodes));
        }
        return out;
      },
      py::arg("graph"), py::arg("max_len") = 5, py::arg("threads") = 1);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init([](const std::string& mode, int mp_iterations,
                       std::optional<int> max_cycle_length, double matching_switch_fraction,
                       int max_rounds, int dual_separation_rounds, std::uint64_t seed,
                       int threads) {
             SolverConfig cfg;
             cfg.mode = parse_mode(mode);
             cfg.mp_iterations = mp_iterations;
             cfg.max_cycle_length = max_cycle_length;
             cfg.matching_switch_fraction = matching_switch_fraction;
             cfg.max_rounds = max_rounds;
             cfg.dual_separation_rounds = dual_separation_rounds;
             cfg.seed = seed;
             cfg.threads = threads;
             return cfg;
           }),
           py::kw_only(), py::arg("mode") = "PD", py::arg("mp_iterations") = 5,
           py::arg("max_cycle_length") = py::none(), py::arg("matching_switch_fraction") = 0.1,
           py::arg("max_rounds") = 100, py::arg("dual_separation_rounds") = 1,
           py::arg("seed") = 0, py::arg("threads") = 0)
      .def_property(
          "mode", [](const SolverConfig& c) { return std::string(to_string(c.mode)); },
          [](SolverConfig& c, const std::string& m) { c.mode = parse_mode(m); })
      .def_readwrite("mp_iterations", &SolverConfig::mp_iterations)
      .def_readwrite("max_cycle_length", &SolverConfig::max_cycle_length)
      .def_readwrite("matching_switch_fraction", &SolverConfig::matching_switch_fraction)
      .def_readwrite("max_rounds", &SolverConfig::max_rounds)
      .def_readwrite("dual_separation_rounds", &SolverConfig::dual_separation_rounds)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("threads", &SolverConfig::threads)
      .def("effective_cycle_length", &SolverConfig::effective_cycle_length)
      .def("validate", &SolverConfig::validate);

  py::class_<RoundRecord>(m, "RoundRecord")
      .def_readonly("round", &RoundRecord::round)
      .def_readonly("nodes", &RoundRecord::nodes)
      .def_readonly("edges", &RoundRecord::edges)
      .def_readonly("triplets", &RoundRecord::triplets)
      .def_readonly("lower_bound", &RoundRecord::lower_bound)
      .def_readonly("lower_bound_valid", &RoundRecord::lower_bound_valid)
      .def_readonly("contracted", &RoundRecord::contracted)
      .def_readonly("strategy", &RoundRecord::strategy)
      .def_readonly("elapsed_ms", &RoundRecord::elapsed_ms);

  py::class_<Solution>(m, "Solution")
      .def_readonly("labeling", &Solution::labeling)
      .def_readonly("primal_cost", &Solution::primal_cost)
      .def_readonly("lower_bound", &Solution::lower_bound)
      .def_readonly("trace", &Solution::trace);

  m.def("solve", &solve, py::arg("graph"), py::arg("config") = SolverConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("dual_bound", &dual_bound, py::arg("graph"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "brute_force_optimum",
      [](const WeightedGraph& g) { return oracle_tuple(oracle::brute_force_optimum(g)); },
      py::arg("graph"), "Exact optimum by enumeration: (cost, labels).");
  m.def(
      "naive_gaec", [](const WeightedGraph& g) { return oracle_tuple(oracle::naive_gaec(g)); },
      py::arg("graph"), "Reference greedy additive edge contraction: (cost, labels).");

  m.def("generate_random", &generate_random, py::arg("n"), py::arg("p"), py::arg("seed") = 0);
  m.def(
      "generate_grid",
      [](std::size_t height, std::size_t width, std::size_t stride, std::uint64_t seed) {
        GridOptions opts;
        opts.height = height;
        opts.width = width;
        opts.stride = stride;
        return generate_grid(opts, seed);
      },
      py::arg("height"), py::arg("width"), py::arg("stride") = 0, py::arg("seed") = 0);
}
