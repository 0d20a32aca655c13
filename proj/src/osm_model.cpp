#include "streetnet/osm_model.hpp"

#include <expat.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <memory>
#include <set>

#include "json.hpp"
#include "streetnet/error.hpp"

namespace streetnet::osm {

using nlohmann::json;

PayloadFormat parse_payload_format(std::string_view name) {
  if (name == "json") return PayloadFormat::Json;
  if (name == "xml" || name == "osm") return PayloadFormat::Xml;
  throw Error(ErrorKind::UnsupportedFormat, "unsupported payload format '" + std::string(name) + "'");
}

namespace {

void validate_node(const OsmElement& e, std::size_t offset) {
  if (e.id <= 0) {
    throw Error(ErrorKind::MalformedPayload,
                "node id " + std::to_string(e.id) + " is not positive (near byte " +
                    std::to_string(offset) + ")");
  }
  if (!std::isfinite(e.lon) || !std::isfinite(e.lat) || e.lon < -180.0 || e.lon > 180.0 ||
      e.lat < -90.0 || e.lat > 90.0) {
    throw Error(ErrorKind::MalformedPayload,
                "node " + std::to_string(e.id) + " has out-of-range coordinates (near byte " +
                    std::to_string(offset) + ")");
  }
}

// Returns false when the way should be skipped.
bool validate_way(const OsmElement& e, ParseResult& out) {
  if (e.id <= 0) {
    throw Error(ErrorKind::MalformedPayload, "way id " + std::to_string(e.id) + " is not positive");
  }
  if (e.node_refs.size() < 2) {
    out.skipped_other++;
    out.warnings.push_back("way " + std::to_string(e.id) + " has fewer than two node refs; skipped");
    return false;
  }
  return true;
}

std::string tag_value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

ParseResult parse_json(std::string_view payload, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(payload.begin(), payload.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedPayload,
                "malformed JSON payload at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("elements") || !doc["elements"].is_array()) {
    throw Error(ErrorKind::MalformedPayload, "JSON payload has no 'elements' array (at byte 0)");
  }
  ParseResult out;
  std::size_t index = 0;
  for (const auto& item : doc["elements"]) {
    const std::string type = item.value("type", "");
    try {
      if (type == "node") {
        OsmElement e;
        e.kind = ElementKind::Node;
        e.id = item.at("id").get<OsmId>();
        e.lat = item.at("lat").get<double>();
        e.lon = item.at("lon").get<double>();
        if (item.contains("tags")) {
          for (const auto& [k, v] : item["tags"].items()) e.tags[k] = tag_value_text(v);
        }
        validate_node(e, 0);
        out.elements.push_back(std::move(e));
      } else if (type == "way") {
        OsmElement e;
        e.kind = ElementKind::Way;
        e.id = item.at("id").get<OsmId>();
        e.node_refs = item.at("nodes").get<std::vector<OsmId>>();
        if (item.contains("tags")) {
          for (const auto& [k, v] : item["tags"].items()) e.tags[k] = tag_value_text(v);
        }
        if (validate_way(e, out)) out.elements.push_back(std::move(e));
      } else if (type == "relation") {
        if (options.keep_relations) {
          OsmRelation r;
          r.id = item.at("id").get<OsmId>();
          for (const auto& m : item.value("members", json::array())) {
            r.members.push_back({m.value("type", ""), m.at("ref").get<OsmId>(), m.value("role", "")});
          }
          if (item.contains("tags")) {
            for (const auto& [k, v] : item["tags"].items()) r.tags[k] = tag_value_text(v);
          }
          out.relations.push_back(std::move(r));
        } else {
          out.skipped_relations++;
          out.warnings.push_back("relation " + std::to_string(item.value("id", OsmId{0})) + " skipped");
        }
      } else {
        out.skipped_other++;
        out.warnings.push_back("element of unknown type '" + type + "' skipped");
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::MalformedPayload,
                  "element #" + std::to_string(index) + " is malformed: " + e.what());
    }
    ++index;
  }
  return out;
}

struct XmlState {
  XML_Parser parser = nullptr;
  ParseResult out;
  ParseOptions options;
  enum class Current { None, Node, Way, Relation, Skipped } current = Current::None;
  OsmElement element;
  OsmRelation relation;
  std::string error;
};

const char* find_attr(const XML_Char** attrs, const char* name) {
  for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
    if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
  }
  return nullptr;
}

template <typename T>
bool parse_number(const char* text, T& value) {
  if (text == nullptr) return false;
  const char* end = text + std::strlen(text);
  auto [ptr, ec] = std::from_chars(text, end, value);
  return ec == std::errc() && ptr == end;
}

void fail(XmlState& st, std::string message) {
  if (st.error.empty()) {
    st.error = message + " at byte " + std::to_string(XML_GetCurrentByteIndex(st.parser));
  }
  XML_StopParser(st.parser, XML_FALSE);
}

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<XmlState*>(data);
  const std::string_view tag(name);
  if (tag == "node") {
    st.current = XmlState::Current::Node;
    st.element = {};
    st.element.kind = ElementKind::Node;
    if (!parse_number(find_attr(attrs, "id"), st.element.id) ||
        !parse_number(find_attr(attrs, "lat"), st.element.lat) ||
        !parse_number(find_attr(attrs, "lon"), st.element.lon)) {
      fail(st, "node element lacks numeric id/lat/lon");
    }
  } else if (tag == "way") {
    st.current = XmlState::Current::Way;
    st.element = {};
    st.element.kind = ElementKind::Way;
    if (!parse_number(find_attr(attrs, "id"), st.element.id)) fail(st, "way element lacks numeric id");
  } else if (tag == "relation") {
    st.relation = {};
    if (st.options.keep_relations) {
      st.current = XmlState::Current::Relation;
      if (!parse_number(find_attr(attrs, "id"), st.relation.id)) {
        fail(st, "relation element lacks numeric id");
      }
    } else {
      st.current = XmlState::Current::Skipped;
      st.out.skipped_relations++;
      const char* id = find_attr(attrs, "id");
      st.out.warnings.push_back(std::string("relation ") + (id ? id : "?") + " skipped");
    }
  } else if (tag == "nd") {
    OsmId ref = 0;
    if (st.current != XmlState::Current::Way || !parse_number(find_attr(attrs, "ref"), ref)) {
      fail(st, "misplaced or malformed nd element");
      return;
    }
    st.element.node_refs.push_back(ref);
  } else if (tag == "member") {
    if (st.current == XmlState::Current::Relation) {
      RelationMember m;
      const char* type = find_attr(attrs, "type");
      const char* role = find_attr(attrs, "role");
      if (!parse_number(find_attr(attrs, "ref"), m.ref)) {
        fail(st, "member element lacks numeric ref");
        return;
      }
      m.type = type ? type : "";
      m.role = role ? role : "";
      st.relation.members.push_back(std::move(m));
    }
  } else if (tag == "tag") {
    const char* k = find_attr(attrs, "k");
    const char* v = find_attr(attrs, "v");
    if (k == nullptr || v == nullptr) {
      fail(st, "tag element lacks k/v");
      return;
    }
    if (st.current == XmlState::Current::Node || st.current == XmlState::Current::Way) {
      st.element.tags[k] = v;
    } else if (st.current == XmlState::Current::Relation) {
      st.relation.tags[k] = v;
    }
  }
}

void XMLCALL on_end(void* data, const XML_Char* name) {
  auto& st = *static_cast<XmlState*>(data);
  const std::string_view tag(name);
  try {
    if (tag == "node" && st.current == XmlState::Current::Node) {
      validate_node(st.element, static_cast<std::size_t>(XML_GetCurrentByteIndex(st.parser)));
      st.out.elements.push_back(std::move(st.element));
      st.current = XmlState::Current::None;
    } else if (tag == "way" && st.current == XmlState::Current::Way) {
      if (validate_way(st.element, st.out)) st.out.elements.push_back(std::move(st.element));
      st.current = XmlState::Current::None;
    } else if (tag == "relation") {
      if (st.current == XmlState::Current::Relation) st.out.relations.push_back(std::move(st.relation));
      st.current = XmlState::Current::None;
    }
  } catch (const Error& e) {
    fail(st, e.what());
  }
}

ParseResult parse_xml(std::string_view payload, const ParseOptions& options) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  XmlState st;
  st.parser = parser.get();
  st.options = options;
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  const auto status = XML_Parse(parser.get(), payload.data(), static_cast<int>(payload.size()), XML_TRUE);
  if (!st.error.empty()) throw Error(ErrorKind::MalformedPayload, "malformed OSM XML: " + st.error);
  if (status != XML_STATUS_OK) {
    throw Error(ErrorKind::MalformedPayload,
                std::string("malformed OSM XML at byte ") +
                    std::to_string(XML_GetCurrentByteIndex(parser.get())) + ": " +
                    XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  return std::move(st.out);
}

}  // namespace

ParseResult parse_overpass(std::string_view payload, PayloadFormat format, ParseOptions options) {
  switch (format) {
    case PayloadFormat::Json: return parse_json(payload, options);
    case PayloadFormat::Xml: return parse_xml(payload, options);
  }
  throw Error(ErrorKind::UnsupportedFormat, "unsupported payload format");
}

std::string serialize_overpass_json(const std::vector<OsmElement>& elements) {
  json doc;
  doc["version"] = 0.6;
  doc["elements"] = json::array();
  for (const auto& e : elements) {
    json item;
    if (e.kind == ElementKind::Node) {
      item["type"] = "node";
      item["id"] = e.id;
      item["lat"] = e.lat;
      item["lon"] = e.lon;
    } else {
      item["type"] = "way";
      item["id"] = e.id;
      item["nodes"] = e.node_refs;
    }
    if (!e.tags.empty()) item["tags"] = e.tags;
    doc["elements"].push_back(std::move(item));
  }
  return doc.dump();
}

std::string_view to_string(NetworkType type) {
  switch (type) {
    case NetworkType::Drive: return "drive";
    case NetworkType::DriveService: return "drive_service";
    case NetworkType::Walk: return "walk";
    case NetworkType::Bike: return "bike";
    case NetworkType::All: return "all";
    case NetworkType::AllPrivate: return "all_private";
  }
  return "unknown";
}

NetworkType parse_network_type(std::string_view name) {
  constexpr std::array kinds{NetworkType::Drive, NetworkType::DriveService, NetworkType::Walk,
                             NetworkType::Bike, NetworkType::All, NetworkType::AllPrivate};
  for (auto k : kinds) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown network type '" + std::string(name) + "'");
}

namespace {

const std::set<std::string, std::less<>> kDriveExcluded{
    "footway", "cycleway", "path", "steps", "pedestrian", "track", "service", "construction", "proposed"};
const std::set<std::string, std::less<>> kDriveServiceExcluded{
    "footway", "cycleway", "path", "steps", "pedestrian", "track", "construction", "proposed"};

std::string_view tag_or_empty(const Tags& tags, const char* key) {
  auto it = tags.find(key);
  return it == tags.end() ? std::string_view{} : std::string_view(it->second);
}

}  // namespace

bool is_private(const Tags& tags) {
  const auto access = tag_or_empty(tags, "access");
  return access == "private" || access == "no";
}

TagPredicate tag_filter(NetworkType type) {
  switch (type) {
    case NetworkType::Drive:
      return [](const Tags& t) {
        auto hw = tag_or_empty(t, "highway");
        return !hw.empty() && !kDriveExcluded.contains(hw) && !is_private(t);
      };
    case NetworkType::DriveService:
      return [](const Tags& t) {
        auto hw = tag_or_empty(t, "highway");
        return !hw.empty() && !kDriveServiceExcluded.contains(hw) && !is_private(t);
      };
    case NetworkType::Walk:
      return [](const Tags& t) {
        auto hw = tag_or_empty(t, "highway");
        return !hw.empty() && hw != "motorway" && hw != "motorway_link" &&
               tag_or_empty(t, "foot") != "no" && !is_private(t);
      };
    case NetworkType::Bike:
      return [](const Tags& t) {
        auto hw = tag_or_empty(t, "highway");
        return !hw.empty() && hw != "motorway" && tag_or_empty(t, "bicycle") != "no" && !is_private(t);
      };
    case NetworkType::All:
      return [](const Tags& t) { return !tag_or_empty(t, "highway").empty() && !is_private(t); };
    case NetworkType::AllPrivate:
      return [](const Tags& t) { return !tag_or_empty(t, "highway").empty(); };
  }
  return [](const Tags&) { return false; };
}

std::string overpass_filter(NetworkType type) {
  const std::string not_private = R"(["access"!~"^(private|no)$"])";
  switch (type) {
    case NetworkType::Drive:
      return R"(["highway"]["highway"!~"^(footway|cycleway|path|steps|pedestrian|track|service|construction|proposed)$"])" +
             not_private;
    case NetworkType::DriveService:
      return R"(["highway"]["highway"!~"^(footway|cycleway|path|steps|pedestrian|track|construction|proposed)$"])" +
             not_private;
    case NetworkType::Walk:
      return R"(["highway"]["highway"!~"^(motorway|motorway_link)$"]["foot"!~"^no$"])" + not_private;
    case NetworkType::Bike:
      return R"(["highway"]["highway"!~"^motorway$"]["bicycle"!~"^no$"])" + not_private;
    case NetworkType::All: return R"(["highway"])" + not_private;
    case NetworkType::AllPrivate: return R"(["highway"])";
  }
  return {};
}

OnewayDirection decode_oneway(const Tags& tags) {
  const auto v = tag_or_empty(tags, "oneway");
  if (v == "yes" || v == "true" || v == "1") return OnewayDirection::Forward;
  if (v == "-1" || v == "reverse") return OnewayDirection::Reverse;
  return OnewayDirection::Both;
}

}  // namespace streetnet::osm
