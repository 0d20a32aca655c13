#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "streetnet/error.hpp"
#include "streetnet/io.hpp"

namespace streetnet::io {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string join_ids(const std::vector<osm::OsmId>& ids) {
  if (ids.size() == 1) return std::to_string(ids.front());
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(ids[i]);
  }
  return out + "]";
}

std::string join_strings(const std::vector<std::string>& values) {
  if (values.size() == 1) return values.front();
  return nlohmann::json(values).dump();
}

enum class Domain { Graph, Node, Edge };

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::Graph: return "graph";
    case Domain::Node: return "node";
    case Domain::Edge: return "edge";
  }
  return "";
}

struct KeyTable {
  // (domain, name) -> id, in declaration order
  std::vector<std::tuple<Domain, std::string, std::string, std::string>> decls;  // domain, name, type, id
  std::map<std::pair<Domain, std::string>, std::string> ids;

  void declare(Domain d, const std::string& name, const std::string& type) {
    if (ids.contains({d, name})) return;
    const std::string id = "d" + std::to_string(decls.size());
    decls.emplace_back(d, name, type, id);
    ids[{d, name}] = id;
  }
  const std::string& id(Domain d, const std::string& name) const { return ids.at({d, name}); }
};

void put(std::ostringstream& os, const KeyTable& keys, Domain d, const std::string& name,
         const std::string& value, const char* indent) {
  os << indent << "<data key=\"" << keys.id(d, name) << "\">" << xml_escape(value) << "</data>\n";
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string linestring_wkt(const std::vector<Point>& points) {
  std::string out = "LINESTRING (";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out += ", ";
    out += format_number(points[i].x) + " " + format_number(points[i].y);
  }
  return out + ")";
}

std::string multipolygon_wkt(const MultiPolygon& mp) {
  auto ring = [](const Ring& r) {
    std::string out = "(";
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ", ";
      out += format_number(r[i].x) + " " + format_number(r[i].y);
    }
    return out + ")";
  };
  std::string out = "MULTIPOLYGON (";
  for (std::size_t p = 0; p < mp.size(); ++p) {
    if (p) out += ", ";
    out += "(" + ring(mp[p].outer);
    for (const auto& h : mp[p].holes) out += ", " + ring(h);
    out += ")";
  }
  return out + ")";
}

namespace {

class WktReader {
 public:
  explicit WktReader(std::string_view s) : s_(s) {}

  void expect_word(std::string_view word) {
    skip();
    std::string got;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      got += static_cast<char>(std::toupper(static_cast<unsigned char>(s_[pos_++])));
    }
    if (got != word) fail("expected " + std::string(word));
  }
  std::string word() {
    skip();
    std::string got;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      got += static_cast<char>(std::toupper(static_cast<unsigned char>(s_[pos_++])));
    }
    return got;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double number() {
    skip();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }
  std::vector<Point> coords() {
    std::vector<Point> pts;
    expect('(');
    do {
      const double x = number();
      const double y = number();
      pts.push_back({x, y});
    } while (accept(','));
    expect(')');
    return pts;
  }
  Polygon polygon() {
    Polygon p;
    expect('(');
    p.outer = coords();
    while (accept(',')) p.holes.push_back(coords());
    expect(')');
    return p;
  }
  void finish() {
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::SchemaViolation, "bad WKT at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Point> parse_linestring_wkt(std::string_view text) {
  WktReader r(text);
  r.expect_word("LINESTRING");
  auto pts = r.coords();
  r.finish();
  return pts;
}

MultiPolygon parse_polygon_wkt(std::string_view text) {
  WktReader r(text);
  const std::string kind = r.word();
  MultiPolygon mp;
  if (kind == "POLYGON") {
    mp.push_back(r.polygon());
  } else if (kind == "MULTIPOLYGON") {
    r.expect('(');
    do mp.push_back(r.polygon());
    while (r.accept(','));
    r.expect(')');
  } else {
    throw Error(ErrorKind::SchemaViolation, "expected POLYGON or MULTIPOLYGON WKT");
  }
  r.finish();
  return mp;
}

std::string write_graphml(const StreetGraph& g) {
  KeyTable keys;
  keys.declare(Domain::Graph, "crs", "string");
  keys.declare(Domain::Graph, "network_type", "string");
  keys.declare(Domain::Graph, "simplified", "boolean");
  keys.declare(Domain::Graph, "boundary", "string");
  for (const auto& [k, v] : g.meta.extra) keys.declare(Domain::Graph, k, "string");
  keys.declare(Domain::Node, "x", "double");
  keys.declare(Domain::Node, "y", "double");
  keys.declare(Domain::Node, "street_count", "long");
  keys.declare(Domain::Node, "elevation", "double");
  for (const auto& n : g.nodes()) {
    for (const auto& [k, v] : n.extra) keys.declare(Domain::Node, k, "string");
  }
  keys.declare(Domain::Edge, "key", "long");
  keys.declare(Domain::Edge, "osmid", "string");
  keys.declare(Domain::Edge, "length", "double");
  keys.declare(Domain::Edge, "oneway", "boolean");
  keys.declare(Domain::Edge, "highway", "string");
  keys.declare(Domain::Edge, "name", "string");
  keys.declare(Domain::Edge, "geometry", "string");
  keys.declare(Domain::Edge, "grade", "double");
  for (const auto& e : g.edges()) {
    for (const auto& [k, v] : e.data.extra) keys.declare(Domain::Edge, k, "string");
  }

  std::ostringstream os;
  os << "<?xml version='1.0' encoding='utf-8'?>\n"
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
        "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
        "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
        "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  for (const auto& [d, name, type, id] : keys.decls) {
    os << "  <key id=\"" << id << "\" for=\"" << domain_name(d) << "\" attr.name=\"" << xml_escape(name)
       << "\" attr.type=\"" << type << "\"/>\n";
  }
  os << "  <graph edgedefault=\"" << (g.meta.directed ? "directed" : "undirected") << "\">\n";
  const char* gi = "    ";
  put(os, keys, Domain::Graph, "crs", g.meta.crs.to_string(), gi);
  put(os, keys, Domain::Graph, "network_type", std::string(osm::to_string(g.meta.network_type)), gi);
  put(os, keys, Domain::Graph, "simplified", g.meta.simplified ? "true" : "false", gi);
  if (g.meta.boundary) put(os, keys, Domain::Graph, "boundary", multipolygon_wkt(*g.meta.boundary), gi);
  for (const auto& [k, v] : g.meta.extra) put(os, keys, Domain::Graph, k, v, gi);

  const char* di = "      ";
  for (const auto& n : g.nodes()) {
    os << "    <node id=\"" << n.id << "\">\n";
    put(os, keys, Domain::Node, "x", format_number(n.x), di);
    put(os, keys, Domain::Node, "y", format_number(n.y), di);
    if (n.street_count) put(os, keys, Domain::Node, "street_count", std::to_string(*n.street_count), di);
    if (n.elevation) put(os, keys, Domain::Node, "elevation", format_number(*n.elevation), di);
    for (const auto& [k, v] : n.extra) put(os, keys, Domain::Node, k, v, di);
    os << "    </node>\n";
  }
  for (const auto& e : g.edges()) {
    os << "    <edge source=\"" << e.u << "\" target=\"" << e.v << "\">\n";
    const auto& d = e.data;
    put(os, keys, Domain::Edge, "key", std::to_string(e.key), di);
    put(os, keys, Domain::Edge, "osmid", join_ids(d.osmid), di);
    put(os, keys, Domain::Edge, "length", format_number(d.length), di);
    put(os, keys, Domain::Edge, "oneway", d.oneway ? "true" : "false", di);
    if (!d.highway.empty()) put(os, keys, Domain::Edge, "highway", join_strings(d.highway), di);
    if (!d.name.empty()) put(os, keys, Domain::Edge, "name", join_strings(d.name), di);
    if (d.geometry) put(os, keys, Domain::Edge, "geometry", linestring_wkt(*d.geometry), di);
    if (d.grade) put(os, keys, Domain::Edge, "grade", format_number(*d.grade), di);
    for (const auto& [k, v] : d.extra) put(os, keys, Domain::Edge, k, v, di);
    os << "    </edge>\n";
  }
  os << "  </graph>\n</graphml>\n";
  return os.str();
}

namespace {

struct RawElement {
  std::string id;      // node id
  std::string source;  // edge endpoints
  std::string target;
  std::map<std::string, std::string> data;  // attr.name -> text
};

struct Reader {
  XML_Parser parser = nullptr;
  std::map<std::string, std::pair<std::string, std::string>> keys;  // id -> (for, attr.name)
  bool directed = true;
  std::map<std::string, std::string> graph_data;
  std::vector<RawElement> nodes;
  std::vector<RawElement> edges;

  enum class In { None, Node, Edge } in = In::None;
  std::map<std::string, std::string>* data_target = nullptr;
  std::string data_name;
  std::string text;
  bool in_data = false;
  std::optional<Error> error;

  void fail(ErrorKind kind, std::string msg) {
    if (!error) error.emplace(kind, std::move(msg));
    XML_StopParser(parser, XML_FALSE);
  }

  static const char* attr(const XML_Char** atts, const char* name) {
    for (int i = 0; atts[i]; i += 2) {
      if (std::strcmp(atts[i], name) == 0) return atts[i + 1];
    }
    return nullptr;
  }

  void start(const char* name, const XML_Char** atts) {
    const std::string_view tag(name);
    if (tag == "key") {
      const char* id = attr(atts, "id");
      const char* dom = attr(atts, "for");
      const char* an = attr(atts, "attr.name");
      if (!id) return fail(ErrorKind::SchemaViolation, "<key> without id");
      keys[id] = {dom ? dom : "all", an ? an : id};
    } else if (tag == "graph") {
      const char* ed = attr(atts, "edgedefault");
      directed = !(ed && std::string_view(ed) == "undirected");
    } else if (tag == "node") {
      const char* id = attr(atts, "id");
      if (!id) return fail(ErrorKind::SchemaViolation, "<node> without id");
      nodes.push_back({id, {}, {}, {}});
      in = In::Node;
    } else if (tag == "edge") {
      const char* s = attr(atts, "source");
      const char* t = attr(atts, "target");
      if (!s || !t) return fail(ErrorKind::SchemaViolation, "<edge> without source/target");
      edges.push_back({{}, s, t, {}});
      in = In::Edge;
    } else if (tag == "data") {
      const char* k = attr(atts, "key");
      if (!k) return fail(ErrorKind::SchemaViolation, "<data> without key");
      auto it = keys.find(k);
      if (it == keys.end()) return fail(ErrorKind::SchemaViolation, std::string("undeclared key '") + k + "'");
      const std::string& dom = it->second.first;
      const char* want = in == In::Node ? "node" : in == In::Edge ? "edge" : "graph";
      if (dom != "all" && dom != want) {
        return fail(ErrorKind::SchemaViolation,
                    std::string("key '") + k + "' declared for " + dom + " used on " + want);
      }
      data_target = in == In::Node ? &nodes.back().data : in == In::Edge ? &edges.back().data : &graph_data;
      data_name = it->second.second;
      text.clear();
      in_data = true;
    }
  }

  void end(const char* name) {
    const std::string_view tag(name);
    if (tag == "data" && in_data) {
      (*data_target)[data_name] = text;
      in_data = false;
    } else if (tag == "node" || tag == "edge") {
      in = In::None;
    }
  }
};

extern "C" {
static void on_start(void* ud, const XML_Char* name, const XML_Char** atts) {
  static_cast<Reader*>(ud)->start(name, atts);
}
static void on_end(void* ud, const XML_Char* name) { static_cast<Reader*>(ud)->end(name); }
static void on_text(void* ud, const XML_Char* s, int len) {
  auto* r = static_cast<Reader*>(ud);
  if (r->in_data) r->text.append(s, static_cast<std::size_t>(len));
}
}

NodeId parse_node_id(const std::string& text) {
  NodeId v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::SchemaViolation, "node id '" + text + "' is not an integer");
  }
  return v;
}

template <typename T>
T parse_num(const std::string& text, const std::string& where) {
  T v{};
  const char* b = text.data();
  const char* e = b + text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(e[-1]))) --e;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw Error(ErrorKind::SchemaViolation, where + ": '" + text + "' is not a number");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "True" || text == "1") return true;
  if (text == "false" || text == "False" || text == "0") return false;
  throw Error(ErrorKind::SchemaViolation, where + ": '" + text + "' is not a boolean");
}

std::vector<osm::OsmId> parse_ids(const std::string& text, const std::string& where) {
  std::string t = text;
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw Error(ErrorKind::SchemaViolation, where + ": bad osmid list");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<osm::OsmId> ids;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) ids.push_back(parse_num<osm::OsmId>(item, where));
  if (ids.empty()) throw Error(ErrorKind::SchemaViolation, where + ": empty osmid");
  return ids;
}

std::vector<std::string> parse_strings(const std::string& text) {
  if (!text.empty() && text.front() == '[') {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_array() && std::all_of(j.begin(), j.end(), [](const auto& v) { return v.is_string(); })) {
      return j.get<std::vector<std::string>>();
    }
  }
  return {text};
}

}  // namespace

StreetGraph read_graphml(std::string_view document) {
  Reader r;
  r.parser = XML_ParserCreate("UTF-8");
  XML_SetUserData(r.parser, &r);
  XML_SetElementHandler(r.parser, on_start, on_end);
  XML_SetCharacterDataHandler(r.parser, on_text);
  const auto status = XML_Parse(r.parser, document.data(), static_cast<int>(document.size()), XML_TRUE);
  if (status == XML_STATUS_ERROR && !r.error) {
    const std::string msg = std::string("GraphML parse error at byte ") +
                            std::to_string(XML_GetCurrentByteIndex(r.parser)) + ": " +
                            XML_ErrorString(XML_GetErrorCode(r.parser));
    XML_ParserFree(r.parser);
    throw Error(ErrorKind::ParseError, msg);
  }
  XML_ParserFree(r.parser);
  if (r.error) throw *r.error;

  StreetGraph g;
  g.meta.directed = r.directed;
  for (auto& [k, v] : r.graph_data) {
    if (k == "crs") {
      try {
        g.meta.crs = Crs::parse(v);
      } catch (const Error& e) {
        throw Error(ErrorKind::SchemaViolation, std::string("graph crs: ") + e.what());
      }
    } else if (k == "network_type") {
      try {
        g.meta.network_type = osm::parse_network_type(v);
      } catch (const Error& e) {
        throw Error(ErrorKind::SchemaViolation, std::string("graph network_type: ") + e.what());
      }
    } else if (k == "simplified") {
      g.meta.simplified = parse_bool(v, "graph simplified");
    } else if (k == "boundary") {
      g.meta.boundary = parse_polygon_wkt(v);
    } else {
      g.meta.extra[k] = v;
    }
  }

  for (auto& raw : r.nodes) {
    NodeRecord n;
    n.id = parse_node_id(raw.id);
    const std::string where = "node " + raw.id;
    if (g.contains(n.id)) throw Error(ErrorKind::SchemaViolation, where + " is declared twice");
    for (const char* req : {"x", "y"}) {
      if (!raw.data.contains(req)) throw Error(ErrorKind::SchemaViolation, where + " has no '" + req + "'");
    }
    for (auto& [k, v] : raw.data) {
      if (k == "x") n.x = parse_num<double>(v, where);
      else if (k == "y") n.y = parse_num<double>(v, where);
      else if (k == "street_count") n.street_count = parse_num<int>(v, where);
      else if (k == "elevation") n.elevation = parse_num<double>(v, where);
      else n.extra[k] = v;
    }
    g.add_node(std::move(n));
  }

  // keys absent from the file are numbered per endpoint pair, in document order
  std::map<std::pair<std::string, std::string>, int> seen;
  for (auto& raw : r.edges) {
    const int ordinal = seen[{raw.source, raw.target}]++;
    const std::string where = "edge (" + raw.source + ", " + raw.target + ", " +
                              (raw.data.contains("key") ? raw.data["key"] : std::to_string(ordinal)) + ")";
    for (const char* req : {"length", "osmid"}) {
      if (!raw.data.contains(req)) throw Error(ErrorKind::SchemaViolation, where + " has no '" + req + "'");
    }
    const NodeId u = parse_node_id(raw.source);
    const NodeId v = parse_node_id(raw.target);
    if (!g.contains(u) || !g.contains(v)) {
      throw Error(ErrorKind::SchemaViolation, where + " references an undeclared node");
    }
    EdgeRecord d;
    for (auto& [k, val] : raw.data) {
      if (k == "key") parse_num<long>(val, where);  // keys are reassigned densely
      else if (k == "osmid") d.osmid = parse_ids(val, where);
      else if (k == "length") d.length = parse_num<double>(val, where);
      else if (k == "oneway") d.oneway = parse_bool(val, where);
      else if (k == "highway") d.highway = parse_strings(val);
      else if (k == "name") d.name = parse_strings(val);
      else if (k == "geometry") d.geometry = parse_linestring_wkt(val);
      else if (k == "grade") d.grade = parse_num<double>(val, where);
      else d.extra[k] = val;
    }
    g.add_edge(u, v, std::move(d));
  }
  return g;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_graphml(const StreetGraph& g, const std::filesystem::path& path) {
  write_text(path, write_graphml(g));
}

StreetGraph load_graphml(const std::filesystem::path& path) { return read_graphml(read_text(path)); }

}  // namespace streetnet::io
