#include "streetnet/osm_client.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "streetnet/error.hpp"
#include "streetnet/geo_ops.hpp"

namespace streetnet::osm {

using nlohmann::json;

// --- clock / limiter --------------------------------------------------------

Clock::time_point SystemClock::now() { return std::chrono::steady_clock::now(); }

void SystemClock::sleep_for(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

std::int64_t SystemClock::unix_time() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

RateLimiter::RateLimiter(std::shared_ptr<Clock> clock, std::chrono::milliseconds min_interval)
    : clock_(std::move(clock)), min_interval_(min_interval) {}

std::unique_lock<std::mutex> RateLimiter::acquire(const std::string& host) {
  Slot* slot = nullptr;
  {
    std::lock_guard table(table_mutex_);
    auto& p = slots_[host];
    if (!p) p = std::make_unique<Slot>();
    slot = p.get();
  }
  std::unique_lock lock(slot->m);
  if (slot->last) {
    const auto ready = *slot->last + min_interval_;
    const auto now = clock_->now();
    if (now < ready) clock_->sleep_for(std::chrono::ceil<std::chrono::milliseconds>(ready - now));
  }
  slot->last = clock_->now();
  return lock;
}

std::string host_of(const std::string& url) {
  auto start = url.find("://");
  start = start == std::string::npos ? 0 : start + 3;
  const auto end = url.find_first_of("/?#", start);
  return url.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

// --- cache ------------------------------------------------------------------

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string ResponseCache::key_for(std::string_view service, std::string_view query) {
  std::string text(service);
  text += '\n';
  text += query;
  return sha256_hex(text);
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  std::shared_lock lock(mutex_);
  std::ifstream in(dir_ / (key + ".body"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::int64_t> ResponseCache::fetched_at(const std::string& key) const {
  std::shared_lock lock(mutex_);
  std::ifstream in(dir_ / (key + ".meta.json"));
  if (!in) return std::nullopt;
  auto meta = json::parse(in, nullptr, false);
  if (!meta.is_object() || !meta.contains("fetched_at")) return std::nullopt;
  return meta["fetched_at"].get<std::int64_t>();
}

namespace {

void atomic_write(const std::filesystem::path& path, std::string_view data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot rename into " + path.string() + ": " + ec.message());
}

}  // namespace

void ResponseCache::put(const std::string& key, std::string_view service, std::string_view query,
                        std::string_view body, std::int64_t fetched_at) {
  std::unique_lock lock(mutex_);
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create cache dir " + dir_.string() + ": " + ec.message());
  const json meta = {{"service", service}, {"query", query}, {"fetched_at", fetched_at}, {"key", key}};
  // body first, so a reader never sees metadata without its payload
  atomic_write(dir_ / (key + ".body"), body);
  atomic_write(dir_ / (key + ".meta.json"), meta.dump(2));
}

// --- transports ----------------------------------------------------------------

HttpResponse FailingTransport::send(const HttpRequest& request) {
  ++attempts_;
  throw Error(ErrorKind::Transport, "network access disabled (request to " + host_of(request.url) + ")");
}

std::string_view to_string(FetchMode mode) {
  switch (mode) {
    case FetchMode::Live: return "live";
    case FetchMode::CacheFirst: return "cache-first";
    case FetchMode::Fixture: return "fixture";
  }
  return "";
}

FetchMode parse_fetch_mode(std::string_view text) {
  if (text == "live") return FetchMode::Live;
  if (text == "cache-first" || text == "cache_first") return FetchMode::CacheFirst;
  if (text == "fixture") return FetchMode::Fixture;
  throw Error(ErrorKind::InvalidArgument, "unknown fetch mode '" + std::string(text) + "'");
}

// --- query text ----------------------------------------------------------------

namespace {

std::string fmt7(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.7f", v);
  return buf;
}

std::string region_clause(const Region& region) {
  if (const auto* b = std::get_if<BBox>(&region)) {
    return "(" + fmt7(b->south) + "," + fmt7(b->west) + "," + fmt7(b->north) + "," + fmt7(b->east) + ")";
  }
  const auto& mp = std::get<MultiPolygon>(region);
  if (mp.size() != 1) throw std::logic_error("poly clause needs a single polygon tile");
  std::string pts;
  Ring ring = mp.front().outer;
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  for (const auto& p : ring) {
    if (!pts.empty()) pts += ' ';
    pts += fmt7(p.y) + " " + fmt7(p.x);
  }
  return "(poly:\"" + pts + "\")";
}

std::string header(int timeout_s) { return "[out:json][timeout:" + std::to_string(timeout_s) + "];"; }

bool overlaps(const BBox& a, const BBox& b) {
  return a.south <= b.north && b.south <= a.north && a.west <= b.east && b.west <= a.east;
}

}  // namespace

std::string streets_query(const Region& region, NetworkType type, int timeout_s) {
  return header(timeout_s) + "(way" + overpass_filter(type) + region_clause(region) + ";>;);out;";
}

std::string footprints_query(const Region& region, int timeout_s) {
  const auto clause = region_clause(region);
  return header(timeout_s) + "(way[\"building\"]" + clause + ";>;relation[\"building\"][\"type\"=\"multipolygon\"]" +
         clause + ";>>;);out;";
}

double region_area_km2(const Region& region) {
  if (const auto* b = std::get_if<BBox>(&region)) {
    if (!b->has_area()) return 0.0;
    return geo::area_km2(MultiPolygon{b->to_polygon()});
  }
  const auto& mp = std::get<MultiPolygon>(region);
  if (mp.empty()) return 0.0;
  return geo::area_km2(mp);
}

std::vector<Region> tile_region(const Region& region, double max_km2) {
  std::vector<Region> parts;
  if (const auto* mp = std::get_if<MultiPolygon>(&region); mp && mp->size() > 1) {
    for (const auto& p : *mp) parts.emplace_back(MultiPolygon{p});
  } else {
    parts.push_back(region);
  }

  std::vector<Region> tiles;
  for (const auto& part : parts) {
    const double area = region_area_km2(part);
    if (area <= max_km2) {
      tiles.push_back(part);
      continue;
    }
    const BBox box = std::holds_alternative<BBox>(part) ? std::get<BBox>(part) : bounds_of(std::get<MultiPolygon>(part));
    const double box_area = region_area_km2(box);
    int k = std::max(2, static_cast<int>(std::ceil(std::sqrt(box_area / max_km2))));
    for (;; ++k) {
      std::vector<BBox> cells;
      bool fits = true;
      const double dy = (box.north - box.south) / k;
      const double dx = (box.east - box.west) / k;
      for (int i = 0; i < k && fits; ++i) {
        for (int j = 0; j < k; ++j) {
          BBox c{box.south + i * dy, box.west + j * dx, i == k - 1 ? box.north : box.south + (i + 1) * dy,
                 j == k - 1 ? box.east : box.west + (j + 1) * dx};
          if (region_area_km2(c) > max_km2) {
            fits = false;
            break;
          }
          cells.push_back(c);
        }
      }
      if (!fits) continue;
      for (const auto& c : cells) {
        if (const auto* poly = std::get_if<MultiPolygon>(&part)) {
          if (!overlaps(c, bounds_of(*poly))) continue;
        }
        tiles.emplace_back(c);
      }
      break;
    }
  }
  return tiles;
}

// --- client --------------------------------------------------------------------

OsmClient::OsmClient(ClientConfig config, std::shared_ptr<Transport> transport, std::shared_ptr<Clock> clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      clock_(std::move(clock)),
      limiter_(clock_, config_.min_interval),
      cache_(config_.cache_dir) {}

std::string OsmClient::exchange(std::string_view service, const HttpRequest& request, const std::string& query_text,
                                std::int64_t* fetched_at) {
  const std::string key = ResponseCache::key_for(service, query_text);
  if (config_.mode != FetchMode::Live) {
    if (auto hit = cache_.get(key)) {
      if (fetched_at) *fetched_at = cache_.fetched_at(key).value_or(0);
      return *hit;
    }
    if (config_.mode == FetchMode::Fixture) {
      throw Error(ErrorKind::FixtureMissing,
                  std::string(service) + " response not in cache " + cache_.dir().string() + " (key " + key + ")");
    }
  }

  const std::string host = host_of(request.url);
  for (int attempt = 0;; ++attempt) {
    HttpResponse resp;
    {
      auto lock = limiter_.acquire(host);
      resp = transport_->send(request);
    }
    if (resp.status == 200) {
      const auto now = clock_->unix_time();
      cache_.put(key, service, query_text, resp.body, now);
      if (fetched_at) *fetched_at = now;
      return resp.body;
    }
    const bool exhausted = attempt >= config_.max_retries;
    const auto backoff = config_.backoff_base * (1LL << std::min(attempt, 16));
    if (resp.status == 429) {
      if (exhausted) throw Error(ErrorKind::RateLimited, host + " kept answering 429 Too Many Requests");
      auto wait = backoff;
      if (auto it = resp.headers.find("retry-after"); it != resp.headers.end()) {
        try {
          wait = std::chrono::seconds(std::stoll(it->second));
        } catch (const std::exception&) {
        }
      }
      clock_->sleep_for(wait);
      continue;
    }
    if (resp.status == 503 || resp.status == 504) {
      if (exhausted) {
        throw Error(ErrorKind::ServerBusy,
                    host + " busy (HTTP " + std::to_string(resp.status) + ") after " + std::to_string(attempt + 1) +
                        " attempts");
      }
      clock_->sleep_for(backoff);
      continue;
    }
    if (resp.status == 401 || resp.status == 403) {
      throw Error(ErrorKind::ProviderAuth, host + " rejected the request (HTTP " + std::to_string(resp.status) + ")");
    }
    throw Error(ErrorKind::Transport, host + " answered HTTP " + std::to_string(resp.status));
  }
}

std::string OsmClient::overpass(const std::string& query, std::int64_t* fetched_at) {
  HttpRequest req;
  req.method = "POST";
  req.url = config_.overpass_url;
  req.content_type = "application/x-www-form-urlencoded";
  std::string encoded;
  for (unsigned char c : query) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      encoded += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      encoded += buf;
    }
  }
  req.body = "data=" + encoded;
  return exchange("overpass", req, query, fetched_at);
}

std::string OsmClient::geocode_query(const std::string& name) {
  std::string q;
  for (unsigned char c : name) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      q += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      q += buf;
    }
  }
  return "q=" + q + "&format=json&polygon_geojson=1&limit=10";
}

namespace {

Ring ring_from(const json& coords) {
  Ring r;
  for (const auto& p : coords) r.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  close_ring(r);
  return r;
}

Polygon polygon_from(const json& rings) {
  Polygon p;
  for (std::size_t i = 0; i < rings.size(); ++i) {
    if (i == 0) p.outer = ring_from(rings[i]);
    else p.holes.push_back(ring_from(rings[i]));
  }
  return p;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

}  // namespace

PlaceBoundary OsmClient::geocode_place(const std::string& name) {
  if (trim(name).empty()) throw Error(ErrorKind::NoResult, "empty place query");
  const std::string query = geocode_query(trim(name));
  HttpRequest req;
  req.url = config_.nominatim_url + "?" + query;
  const std::string body = exchange("nominatim", req, query);

  const json results = json::parse(body, nullptr, false);
  if (!results.is_array()) throw Error(ErrorKind::MalformedPayload, "geocoder answer is not a JSON array");
  if (results.empty()) throw Error(ErrorKind::NoResult, "no geocoding result for '" + name + "'");

  try {
    for (const auto& r : results) {
      if (!r.contains("geojson")) continue;
      const auto& gj = r["geojson"];
      const std::string type = gj.value("type", "");
      PlaceBoundary b;
      if (type == "Polygon") {
        b.geometry.push_back(polygon_from(gj["coordinates"]));
      } else if (type == "MultiPolygon") {
        for (const auto& poly : gj["coordinates"]) b.geometry.push_back(polygon_from(poly));
      } else {
        continue;
      }
      geo::validate_polygon(b.geometry);
      b.display_name = r.value("display_name", name);
      b.bbox = bounds_of(b.geometry);
      if (r.contains("boundingbox") && r["boundingbox"].size() == 4) {
        const auto& bb = r["boundingbox"];
        auto num = [](const json& v) { return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>(); };
        b.bbox.south = std::min(b.bbox.south, num(bb[0]));
        b.bbox.north = std::max(b.bbox.north, num(bb[1]));
        b.bbox.west = std::min(b.bbox.west, num(bb[2]));
        b.bbox.east = std::max(b.bbox.east, num(bb[3]));
      }
      b.centroid = centroid_of(b.geometry);
      return b;
    }
    const auto& r = results.front();
    auto num = [](const json& v) { return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>(); };
    PlaceBoundary b;
    b.display_name = r.value("display_name", name);
    b.centroid = {num(r.at("lon")), num(r.at("lat"))};
    b.bbox = {b.centroid.y, b.centroid.x, b.centroid.y, b.centroid.x};
    b.point_only = true;
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedPayload, std::string("unexpected geocoder answer: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::MalformedPayload, "geocoder coordinate is not a number");
  }
}

std::vector<std::string> OsmClient::plan_streets(const Region& region, NetworkType type) const {
  if (region_area_km2(region) <= 0.0) throw Error(ErrorKind::InvalidArgument, "query region has zero area");
  std::vector<std::string> out;
  for (const auto& tile : tile_region(region, config_.max_tile_km2)) {
    out.push_back(streets_query(tile, type, config_.overpass_timeout_s));
  }
  return out;
}

std::vector<std::string> OsmClient::plan_footprints(const Region& region) const {
  if (region_area_km2(region) <= 0.0) throw Error(ErrorKind::InvalidArgument, "query region has zero area");
  std::vector<std::string> out;
  for (const auto& tile : tile_region(region, config_.max_tile_km2)) {
    out.push_back(footprints_query(tile, config_.overpass_timeout_s));
  }
  return out;
}

OverpassResponse OsmClient::fetch_streets(const Region& region, NetworkType type) {
  OverpassResponse resp;
  std::set<std::pair<int, OsmId>> seen;
  std::vector<OsmElement> merged;
  for (const auto& q : plan_streets(region, type)) {
    std::int64_t at = 0;
    const auto body = overpass(q, &at);
    resp.fetched_at = std::max(resp.fetched_at, at);
    resp.query_hashes.push_back(ResponseCache::key_for("overpass", q));
    auto parsed = parse_overpass(body, PayloadFormat::Json);
    for (auto& w : parsed.warnings) resp.warnings.push_back(std::move(w));
    for (auto& e : parsed.elements) {
      if (seen.insert({static_cast<int>(e.kind), e.id}).second) merged.push_back(std::move(e));
    }
  }
  resp.elements = filter_elements(merged, type);

  std::set<OsmId> node_ids;
  for (const auto& e : resp.elements) {
    if (e.kind == ElementKind::Node) node_ids.insert(e.id);
  }
  for (const auto& e : resp.elements) {
    if (e.kind != ElementKind::Way) continue;
    for (auto ref : e.node_refs) {
      if (!node_ids.contains(ref)) {
        throw Error(ErrorKind::MalformedPayload,
                    "way " + std::to_string(e.id) + " references node " + std::to_string(ref) + " missing from the response");
      }
    }
  }
  return resp;
}

namespace {

// Joins way segments end to end into closed rings. Returns nullopt if some
// segment cannot be closed.
std::optional<std::vector<Ring>> assemble_rings(std::vector<std::vector<OsmId>> segments,
                                                const std::map<OsmId, Point>& coords) {
  std::vector<Ring> rings;
  while (!segments.empty()) {
    std::vector<OsmId> cur = std::move(segments.back());
    segments.pop_back();
    while (cur.front() != cur.back()) {
      bool joined = false;
      for (std::size_t i = 0; i < segments.size(); ++i) {
        auto& s = segments[i];
        if (s.front() == cur.back()) {
          cur.insert(cur.end(), s.begin() + 1, s.end());
        } else if (s.back() == cur.back()) {
          cur.insert(cur.end(), s.rbegin() + 1, s.rend());
        } else {
          continue;
        }
        segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(i));
        joined = true;
        break;
      }
      if (!joined) return std::nullopt;
    }
    if (cur.size() < 4) return std::nullopt;
    Ring r;
    for (auto id : cur) {
      auto it = coords.find(id);
      if (it == coords.end()) return std::nullopt;
      r.push_back(it->second);
    }
    rings.push_back(std::move(r));
  }
  return rings;
}

}  // namespace

FootprintCollection OsmClient::fetch_footprints(const Region& region) {
  FootprintCollection out;
  std::map<OsmId, Point> coords;
  std::map<OsmId, OsmElement> ways;
  std::map<OsmId, OsmRelation> relations;
  for (const auto& q : plan_footprints(region)) {
    const auto body = overpass(q, nullptr);
    auto parsed = parse_overpass(body, PayloadFormat::Json, ParseOptions{.keep_relations = true});
    for (auto& e : parsed.elements) {
      if (e.kind == ElementKind::Node) coords.emplace(e.id, Point{e.lon, e.lat});
      else ways.emplace(e.id, std::move(e));
    }
    for (auto& r : parsed.relations) relations.emplace(r.id, std::move(r));
  }

  for (const auto& [id, w] : ways) {
    if (!w.tags.contains("building")) continue;
    const bool closed = w.node_refs.size() >= 4 && w.node_refs.front() == w.node_refs.back();
    auto rings = closed ? assemble_rings({w.node_refs}, coords) : std::nullopt;
    if (!rings) {
      ++out.skipped;
      out.warnings.push_back("building way " + std::to_string(id) + " is not a closed ring; skipped");
      continue;
    }
    out.features.push_back({id, false, MultiPolygon{Polygon{rings->front(), {}}}, w.tags});
  }

  for (const auto& [id, r] : relations) {
    if (!r.tags.contains("building")) continue;
    std::vector<std::vector<OsmId>> outer, inner;
    bool missing = false;
    for (const auto& m : r.members) {
      if (m.type != "way") continue;
      auto it = ways.find(m.ref);
      if (it == ways.end()) {
        missing = true;
        break;
      }
      (m.role == "inner" ? inner : outer).push_back(it->second.node_refs);
    }
    auto outer_rings = missing ? std::nullopt : assemble_rings(outer, coords);
    auto inner_rings = missing ? std::nullopt : assemble_rings(inner, coords);
    if (!outer_rings || !inner_rings || outer_rings->empty()) {
      ++out.skipped;
      out.warnings.push_back("building relation " + std::to_string(id) + " has no closed outer ring; skipped");
      continue;
    }
    MultiPolygon mp;
    for (auto& ring : *outer_rings) mp.push_back({std::move(ring), {}});
    for (auto& hole : *inner_rings) {
      for (auto& poly : mp) {
        if (contains(Polygon{poly.outer, {}}, hole.front())) {
          poly.holes.push_back(std::move(hole));
          break;
        }
      }
    }
    out.features.push_back({id, true, std::move(mp), r.tags});
  }
  return out;
}

// --- elevation -------------------------------------------------------------------

FixtureElevationProvider::FixtureElevationProvider(std::size_t batch_limit) : batch_limit_(batch_limit) {}

std::pair<std::int64_t, std::int64_t> FixtureElevationProvider::grid(double lon, double lat) {
  return {std::llround(lon * 1e7), std::llround(lat * 1e7)};
}

void FixtureElevationProvider::add(double lon, double lat, double elevation) { table_[grid(lon, lat)] = elevation; }

FixtureElevationProvider FixtureElevationProvider::from_json(const std::string& document, std::size_t batch_limit) {
  FixtureElevationProvider p(batch_limit);
  const auto j = json::parse(document, nullptr, false);
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw Error(ErrorKind::MalformedPayload, "elevation fixture needs a \"points\" array");
  }
  for (const auto& pt : j["points"]) {
    const double z = pt.at(2).is_null() ? std::nan("") : pt.at(2).get<double>();
    p.add(pt.at(0).get<double>(), pt.at(1).get<double>(), z);
  }
  return p;
}

std::vector<double> FixtureElevationProvider::lookup(const std::vector<NodeLocation>& batch) {
  ++calls_;
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& loc : batch) {
    auto it = table_.find(grid(loc.lon, loc.lat));
    out.push_back(it == table_.end() ? std::nan("") : it->second);
  }
  return out;
}

HttpElevationProvider::HttpElevationProvider(OsmClient& client, std::string url, std::size_t batch_limit)
    : client_(client), url_(std::move(url)), batch_limit_(batch_limit) {}

std::vector<double> HttpElevationProvider::lookup(const std::vector<NodeLocation>& batch) {
  json locations = json::array();
  for (const auto& loc : batch) locations.push_back({{"latitude", loc.lat}, {"longitude", loc.lon}});
  HttpRequest req;
  req.method = "POST";
  req.url = url_;
  req.content_type = "application/json";
  req.body = json{{"locations", locations}}.dump();
  const auto body = client_.exchange("elevation", req, req.body);
  const auto j = json::parse(body, nullptr, false);
  if (!j.is_object() || !j.contains("results") || !j["results"].is_array()) {
    throw Error(ErrorKind::MalformedPayload, "elevation answer has no results array");
  }
  std::vector<double> out;
  for (const auto& r : j["results"]) {
    const auto& z = r.contains("elevation") ? r["elevation"] : json();
    out.push_back(z.is_number() ? z.get<double>() : std::nan(""));
  }
  return out;
}

std::vector<ElevationRecord> fetch_elevations(ElevationProvider& provider, const std::vector<NodeLocation>& nodes) {
  if (nodes.empty()) throw Error(ErrorKind::InvalidArgument, "no coordinates to look up");
  const std::size_t limit = std::max<std::size_t>(1, provider.batch_limit());
  std::vector<ElevationRecord> out;
  out.reserve(nodes.size());
  std::vector<NodeId> failed;
  for (std::size_t start = 0; start < nodes.size(); start += limit) {
    const std::vector<NodeLocation> batch(nodes.begin() + static_cast<std::ptrdiff_t>(start),
                                          nodes.begin() + static_cast<std::ptrdiff_t>(std::min(nodes.size(), start + limit)));
    const auto values = provider.lookup(batch);
    if (values.size() != batch.size()) {
      throw Error(ErrorKind::MalformedPayload, "elevation provider returned " + std::to_string(values.size()) +
                                                   " values for " + std::to_string(batch.size()) + " points");
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!std::isfinite(values[i])) failed.push_back(batch[i].id);
      out.push_back({batch[i].id, values[i]});
    }
  }
  if (!failed.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < failed.size() && i < 20; ++i) ids += (i ? ", " : "") + std::to_string(failed[i]);
    if (failed.size() > 20) ids += ", ...";
    throw Error(ErrorKind::PartialFailure,
                std::to_string(failed.size()) + " node(s) without elevation: " + ids);
  }
  return out;
}

void add_node_elevations(StreetGraph& g, ElevationProvider& provider) {
  std::vector<NodeLocation> locs;
  for (const auto& n : g.nodes()) {
    const Point ll = geo::to_lonlat(g.meta.crs, n.point());
    locs.push_back({n.id, ll.x, ll.y});
  }
  if (locs.empty()) return;
  const auto records = fetch_elevations(provider, locs);
  for (std::size_t i = 0; i < records.size(); ++i) g.nodes()[i].elevation = records[i].elevation;
}

}  // namespace streetnet::osm
