#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace streetnet::osm {

using OsmId = std::int64_t;
using Tags = std::map<std::string, std::string>;

enum class ElementKind { Node, Way };

/// A raw OpenStreetMap node or way. Nodes carry lon/lat, ways carry an
/// ordered list of at least two node references.
struct OsmElement {
  OsmId id = 0;
  ElementKind kind = ElementKind::Node;
  double lon = 0.0;
  double lat = 0.0;
  std::vector<OsmId> node_refs;
  Tags tags;

  friend bool operator==(const OsmElement&, const OsmElement&) = default;
};

struct RelationMember {
  std::string type;
  OsmId ref = 0;
  std::string role;

  friend bool operator==(const RelationMember&, const RelationMember&) = default;
};

/// Relations are only materialized for building footprints.
struct OsmRelation {
  OsmId id = 0;
  std::vector<RelationMember> members;
  Tags tags;
};

struct ParseResult {
  std::vector<OsmElement> elements;
  std::vector<OsmRelation> relations;
  std::size_t skipped_relations = 0;
  std::size_t skipped_other = 0;
  std::vector<std::string> warnings;
};

enum class PayloadFormat { Json, Xml };

PayloadFormat parse_payload_format(std::string_view name);

struct ParseOptions {
  bool keep_relations = false;
};

/// Parses an Overpass JSON response or an OSM XML document.
/// Throws Error(MalformedPayload) with the byte offset of the failure.
ParseResult parse_overpass(std::string_view payload, PayloadFormat format,
                           ParseOptions options = {});

/// Writes elements back out as an Overpass-style JSON document.
std::string serialize_overpass_json(const std::vector<OsmElement>& elements);

enum class NetworkType { Drive, DriveService, Walk, Bike, All, AllPrivate };

std::string_view to_string(NetworkType type);
NetworkType parse_network_type(std::string_view name);

/// Walk networks ignore one-way tags.
constexpr bool is_bidirectional_network(NetworkType type) { return type == NetworkType::Walk; }

using TagPredicate = std::function<bool(const Tags&)>;

/// Total predicate deciding whether a way becomes part of the network.
/// The accepted tag sets are listed in docs/network_types.md.
TagPredicate tag_filter(NetworkType type);

/// access=private or access=no.
bool is_private(const Tags& tags);

/// Overpass QL filter clauses matching tag_filter() server-side.
std::string overpass_filter(NetworkType type);

enum class OnewayDirection { Both, Forward, Reverse };

/// yes/true/1 is forward, -1/reverse is against the node order, anything
/// else is two-way.
OnewayDirection decode_oneway(const Tags& tags);

}  // namespace streetnet::osm
