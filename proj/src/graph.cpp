#include "qna/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"
#include "qna/error.hpp"

namespace qna {

bool NarrativeGraph::operator==(const NarrativeGraph& other) const {
  if (nodes.size() != other.nodes.size() || edges.size() != other.edges.size()) return false;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].actor != other.nodes[i].actor || nodes[i].weight != other.nodes[i].weight)
      return false;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& a = edges[i];
    const auto& b = other.edges[i];
    if (a.src != b.src || a.dst != b.dst || a.verb != b.verb || a.weight != b.weight)
      return false;
  }
  return meta.event == other.meta.event && meta.group == other.meta.group &&
         meta.fraction == other.meta.fraction;
}

NarrativeGraph build_graph(std::vector<NarrativeCluster> clusters, double fraction,
                           const GraphMeta& meta) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw Error("build_graph: fraction must be in (0, 1]");
  NarrativeGraph graph;
  graph.meta = meta;
  graph.meta.fraction = fraction;
  if (clusters.empty()) return graph;

  std::sort(clusters.begin(), clusters.end(),
            [](const NarrativeCluster& a, const NarrativeCluster& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.canonical < b.canonical;
            });
  const double raw = fraction * static_cast<double>(clusters.size());
  std::size_t slots = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  slots = std::max<std::size_t>(1, std::min(slots, clusters.size()));
  const std::uint64_t cutoff = clusters[slots - 1].count;
  // ties at the cutoff are all included
  std::size_t kept = slots;
  while (kept < clusters.size() && clusters[kept].count == cutoff) ++kept;

  std::map<std::string, std::uint64_t> node_weight;
  for (std::size_t i = 0; i < kept; ++i) {
    const auto& c = clusters[i];
    GraphEdge e;
    e.src = c.canonical[0];
    e.verb = c.canonical[1];
    e.dst = c.canonical[2];
    e.weight = c.count;
    node_weight[e.src] += e.weight;  // subject side
    node_weight[e.dst] += e.weight;  // object side; self-loops count twice
    graph.edges.push_back(std::move(e));
  }
  graph.nodes.reserve(node_weight.size());
  for (const auto& [actor, weight] : node_weight) graph.nodes.push_back({actor, weight});
  return graph;
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// linear map of weight in [lo_w, hi_w] onto [lo, hi]; the degenerate
// all-equal case lands mid-range
double scale_weight(std::uint64_t w, std::uint64_t lo_w, std::uint64_t hi_w, double lo,
                    double hi) {
  if (hi_w == lo_w) return (lo + hi) / 2.0;
  const double t = static_cast<double>(w - lo_w) / static_cast<double>(hi_w - lo_w);
  return lo + t * (hi - lo);
}

}  // namespace

std::string export_dot(const NarrativeGraph& graph) {
  if (graph.nodes.empty() && graph.edges.empty()) return "digraph {}\n";
  std::uint64_t node_lo = UINT64_MAX, node_hi = 0, edge_lo = UINT64_MAX, edge_hi = 0;
  for (const auto& n : graph.nodes) {
    node_lo = std::min(node_lo, n.weight);
    node_hi = std::max(node_hi, n.weight);
  }
  for (const auto& e : graph.edges) {
    edge_lo = std::min(edge_lo, e.weight);
    edge_hi = std::max(edge_hi, e.weight);
  }

  std::vector<const GraphNode*> nodes;
  for (const auto& n : graph.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(),
            [](const GraphNode* a, const GraphNode* b) { return a->actor < b->actor; });
  std::vector<const GraphEdge*> edges;
  for (const auto& e : graph.edges) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(), [](const GraphEdge* a, const GraphEdge* b) {
    if (a->src != b->src) return a->src < b->src;
    if (a->dst != b->dst) return a->dst < b->dst;
    if (a->verb != b->verb) return a->verb < b->verb;
    return a->weight < b->weight;
  });

  std::string out = "digraph {\n";
  for (const auto* n : nodes) {
    out += "  ";
    out += dot_quote(n->actor);
    out += " [width=" + fixed3(scale_weight(n->weight, node_lo, node_hi, 0.5, 3.0));
    out += ", fixedsize=false];\n";
  }
  for (const auto* e : edges) {
    out += "  ";
    out += dot_quote(e->src);
    out += " -> ";
    out += dot_quote(e->dst);
    out += " [label=" + dot_quote(e->verb);
    out += ", penwidth=" + fixed3(scale_weight(e->weight, edge_lo, edge_hi, 1.0, 8.0));
    out += "];\n";
  }
  out += "}\n";
  return out;
}

std::string export_json(const NarrativeGraph& graph) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& n : graph.nodes) {
    nlohmann::ordered_json nj;
    nj["actor"] = n.actor;
    nj["weight"] = n.weight;
    nodes.push_back(std::move(nj));
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : graph.edges) {
    nlohmann::ordered_json ej;
    ej["src"] = e.src;
    ej["dst"] = e.dst;
    ej["verb"] = e.verb;
    ej["weight"] = e.weight;
    edges.push_back(std::move(ej));
  }
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  nlohmann::ordered_json meta;
  meta["event"] = graph.meta.event;
  meta["group"] = graph.meta.group;
  meta["fraction"] = graph.meta.fraction;
  j["meta"] = std::move(meta);
  return j.dump(2) + "\n";
}

NarrativeGraph import_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("graph json: ") + e.what());
  }
  NarrativeGraph g;
  for (const auto& nj : j.at("nodes"))
    g.nodes.push_back({nj.at("actor").get<std::string>(), nj.at("weight").get<std::uint64_t>()});
  for (const auto& ej : j.at("edges"))
    g.edges.push_back({ej.at("src").get<std::string>(), ej.at("dst").get<std::string>(),
                       ej.at("verb").get<std::string>(), ej.at("weight").get<std::uint64_t>()});
  const auto& meta = j.at("meta");
  g.meta.event = meta.at("event").get<std::string>();
  g.meta.group = meta.at("group").get<std::string>();
  g.meta.fraction = meta.at("fraction").get<double>();

  // sanity: every edge endpoint must exist
  std::map<std::string, std::uint64_t> weights;
  for (const auto& n : g.nodes) weights.emplace(n.actor, n.weight);
  for (const auto& e : g.edges)
    if (!weights.count(e.src) || !weights.count(e.dst))
      throw Error("graph json: edge endpoint missing from nodes");
  return g;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string export_graphml(const NarrativeGraph& graph) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"w\" for=\"node\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      "  <key id=\"verb\" for=\"edge\" attr.name=\"verb\" attr.type=\"string\"/>\n"
      "  <key id=\"ew\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      "  <graph edgedefault=\"directed\">\n";
  for (const auto& n : graph.nodes) {
    out += "    <node id=\"" + xml_escape(n.actor) + "\"><data key=\"w\">" +
           std::to_string(n.weight) + "</data></node>\n";
  }
  for (const auto& e : graph.edges) {
    out += "    <edge source=\"" + xml_escape(e.src) + "\" target=\"" + xml_escape(e.dst) +
           "\"><data key=\"verb\">" + xml_escape(e.verb) + "</data><data key=\"ew\">" +
           std::to_string(e.weight) + "</data></edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

}  // namespace qna
