#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qna/cluster.hpp"

namespace qna {

struct GraphNode {
  std::string actor;
  std::uint64_t weight = 0;  // frequency as subject or object over kept edges
};

struct GraphEdge {
  std::string src;
  std::string dst;
  std::string verb;
  std::uint64_t weight = 0;  // cluster count
};

struct GraphMeta {
  std::string event;
  std::string group;
  double fraction = 1.0;
};

// Directed multigraph: parallel edges between the same actors are kept when
// their verbs differ. Nodes are sorted by actor; edges keep the kept-cluster
// order (count descending, canonical ties).
struct NarrativeGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  GraphMeta meta;

  bool operator==(const NarrativeGraph& other) const;
};

// Keeps the top ceil(fraction * clusters) clusters; every cluster tied with
// the one at the cutoff is also kept. One edge per kept cluster; node
// weights are recomputed from kept edges only (a self-loop counts its actor
// on both sides).
NarrativeGraph build_graph(std::vector<NarrativeCluster> clusters, double fraction,
                           const GraphMeta& meta = {});

// DOT digraph; node width maps linearly onto [0.5, 3.0] and edge penwidth
// onto [1, 8], verbs become edge labels, statements are sorted
// lexicographically.
std::string export_dot(const NarrativeGraph& graph);

// Lossless JSON with stable key order; import(export(g)) == g.
std::string export_json(const NarrativeGraph& graph);
NarrativeGraph import_json(const std::string& text);

std::string export_graphml(const NarrativeGraph& graph);

}  // namespace qna
