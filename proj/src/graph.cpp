#include "streetnet/graph.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>

#include "streetnet/error.hpp"

namespace streetnet {

double great_circle(const Point& a, const Point& b) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double phi1 = a.y * deg;
  const double phi2 = b.y * deg;
  const double dphi = (b.y - a.y) * deg;
  const double dlambda = (b.x - a.x) * deg;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

std::string Crs::to_string() const {
  if (kind == Kind::Wgs84) return "epsg:4326";
  return "utm:" + std::to_string(zone) + (south ? "S" : "N");
}

Crs Crs::parse(const std::string& text) {
  if (text == "epsg:4326" || text == "wgs84") return {};
  if (text.rfind("utm:", 0) == 0 && text.size() >= 6) {
    Crs c;
    c.kind = Kind::Utm;
    const char hemi = text.back();
    if (hemi != 'N' && hemi != 'S') throw Error(ErrorKind::ParseError, "bad CRS text '" + text + "'");
    c.south = hemi == 'S';
    try {
      c.zone = std::stoi(text.substr(4, text.size() - 5));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad CRS text '" + text + "'");
    }
    if (c.zone < 1 || c.zone > 60) throw Error(ErrorKind::ParseError, "bad UTM zone in '" + text + "'");
    return c;
  }
  throw Error(ErrorKind::ParseError, "unrecognized CRS '" + text + "'");
}

NodeRecord& StreetGraph::add_node(NodeRecord record) {
  if (index_.contains(record.id)) {
    throw Error(ErrorKind::InvalidArgument, "duplicate node id " + std::to_string(record.id));
  }
  index_.emplace(record.id, nodes_.size());
  nodes_.push_back(std::move(record));
  out_.emplace_back();
  in_.emplace_back();
  return nodes_.back();
}

std::size_t StreetGraph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorKind::UnknownNode, "unknown node " + std::to_string(id));
  return it->second;
}

EdgeKey StreetGraph::add_edge(NodeId u, NodeId v, EdgeRecord data) {
  const std::size_t iu = index_of(u);
  const std::size_t iv = index_of(v);
  EdgeKey& next = next_key_[{u, v}];
  const EdgeKey key = next++;
  out_[iu].push_back(edges_.size());
  in_[iv].push_back(edges_.size());
  edges_.push_back(Edge{u, v, key, std::move(data)});
  return key;
}

std::vector<osm::OsmElement> filter_elements(const std::vector<osm::OsmElement>& elements,
                                             osm::NetworkType type) {
  const auto accept = osm::tag_filter(type);
  std::unordered_set<osm::OsmId> referenced;
  std::vector<osm::OsmElement> ways;
  for (const auto& e : elements) {
    if (e.kind == osm::ElementKind::Way && accept(e.tags)) {
      referenced.insert(e.node_refs.begin(), e.node_refs.end());
      ways.push_back(e);
    }
  }
  std::vector<osm::OsmElement> out;
  std::unordered_set<osm::OsmId> seen;
  for (const auto& e : elements) {
    if (e.kind == osm::ElementKind::Node && referenced.contains(e.id) && seen.insert(e.id).second) {
      out.push_back(e);
    }
  }
  out.insert(out.end(), ways.begin(), ways.end());
  return out;
}

namespace {

std::vector<std::string> single_tag(const osm::Tags& tags, const char* key) {
  auto it = tags.find(key);
  if (it == tags.end()) return {};
  return {it->second};
}

}  // namespace

StreetGraph build_graph(const std::vector<osm::OsmElement>& elements, osm::NetworkType type) {
  std::unordered_map<osm::OsmId, const osm::OsmElement*> node_elems;
  std::unordered_set<osm::OsmId> referenced;
  for (const auto& e : elements) {
    if (e.kind == osm::ElementKind::Node) {
      node_elems.emplace(e.id, &e);
    } else {
      for (auto ref : e.node_refs) {
        if (!node_elems.contains(ref)) {
          // nodes may follow ways in the payload; check again below
          referenced.insert(ref);
        }
      }
    }
  }
  for (auto ref : referenced) {
    if (!node_elems.contains(ref)) {
      throw Error(ErrorKind::DanglingRef, "way references missing node " + std::to_string(ref));
    }
  }

  std::unordered_set<osm::OsmId> used;
  for (const auto& e : elements) {
    if (e.kind == osm::ElementKind::Way) used.insert(e.node_refs.begin(), e.node_refs.end());
  }

  StreetGraph g;
  g.meta.network_type = type;
  for (const auto& e : elements) {
    if (e.kind == osm::ElementKind::Node && used.contains(e.id) && !g.contains(e.id)) {
      g.add_node(NodeRecord{e.id, e.lon, e.lat, std::nullopt, std::nullopt, {}});
    }
  }

  const bool force_two_way = osm::is_bidirectional_network(type);
  for (const auto& way : elements) {
    if (way.kind != osm::ElementKind::Way) continue;
    auto direction = force_two_way ? osm::OnewayDirection::Both : osm::decode_oneway(way.tags);
    std::vector<osm::OsmId> refs = way.node_refs;
    if (direction == osm::OnewayDirection::Reverse) std::reverse(refs.begin(), refs.end());
    const bool oneway = direction != osm::OnewayDirection::Both;

    EdgeRecord proto;
    proto.osmid = {way.id};
    proto.oneway = oneway;
    proto.highway = single_tag(way.tags, "highway");
    proto.name = single_tag(way.tags, "name");

    for (std::size_t i = 0; i + 1 < refs.size(); ++i) {
      const NodeId u = refs[i];
      const NodeId v = refs[i + 1];
      EdgeRecord rec = proto;
      rec.length = great_circle(g.node(u).point(), g.node(v).point());
      g.add_edge(u, v, rec);
      if (!oneway) g.add_edge(v, u, std::move(rec));
    }
  }
  return g;
}

namespace {

bool lengths_match(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= 1e-6 * scale;
}

}  // namespace

StreetGraph undirected_projection(const StreetGraph& g) {
  std::map<std::pair<NodeId, NodeId>, std::vector<std::size_t>> pending;
  std::vector<bool> keep(g.edge_count(), false);
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    auto& partners = pending[{e.v, e.u}];
    auto match = std::find_if(partners.begin(), partners.end(), [&](std::size_t j) {
      return edges[j].data.osmid == e.data.osmid && lengths_match(edges[j].data.length, e.data.length);
    });
    if (match != partners.end()) {
      partners.erase(match);
      continue;
    }
    keep[i] = true;
    pending[{e.u, e.v}].push_back(i);
  }
  StreetGraph out;
  out.meta = g.meta;
  out.meta.directed = false;
  for (const auto& n : g.nodes()) out.add_node(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (keep[i]) out.add_edge(edges[i].u, edges[i].v, edges[i].data);
  }
  return out;
}

std::map<NodeId, int> streets_per_node(const StreetGraph& g) {
  const StreetGraph und = g.meta.directed ? undirected_projection(g) : g;
  std::map<NodeId, int> counts;
  for (const auto& n : und.nodes()) counts[n.id] = 0;
  for (const auto& e : und.edges()) {
    counts[e.u] += 1;
    counts[e.v] += 1;
  }
  return counts;
}

void assign_street_counts(StreetGraph& g) {
  for (const auto& [id, count] : streets_per_node(g)) g.node(id).street_count = count;
}

double geometric_length(const StreetGraph& g, const Edge& e) {
  if (e.data.geometry && e.data.geometry->size() >= 2) {
    const auto& pts = *e.data.geometry;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += great_circle(pts[i], pts[i + 1]);
    return sum;
  }
  return great_circle(g.node(e.u).point(), g.node(e.v).point());
}

}  // namespace streetnet
