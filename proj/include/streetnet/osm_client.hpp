#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "streetnet/geometry.hpp"
#include "streetnet/graph.hpp"
#include "streetnet/osm_model.hpp"

namespace streetnet::osm {

// --- transport ---------------------------------------------------------------

struct HttpRequest {
  std::string method = "GET";
  std::string url;  // scheme://host[:port]/path?query
  std::string body;
  std::string content_type;
  std::map<std::string, std::string> headers;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;  // lower-case names
};

class Transport {
 public:
  virtual ~Transport() = default;
  /// Throws Error(Transport) when no response could be obtained.
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// cpp-httplib backed HTTP(S) transport.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(180),
                         std::string user_agent = "streetnet/0.1");
  HttpResponse send(const HttpRequest& request) override;

 private:
  std::chrono::seconds timeout_;
  std::string user_agent_;
};

/// Fails every request; offline runs use it to prove nothing touches the
/// network.
class FailingTransport : public Transport {
 public:
  HttpResponse send(const HttpRequest& request) override;
  int attempts() const { return attempts_; }

 private:
  int attempts_ = 0;
};

// --- clock and rate limiting -----------------------------------------------------

class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;
  /// Wall-clock seconds since the epoch, for cache metadata.
  virtual std::int64_t unix_time() = 0;
};

class SystemClock : public Clock {
 public:
  time_point now() override;
  void sleep_for(std::chrono::milliseconds d) override;
  std::int64_t unix_time() override;
};

/// Serializes requests per host and spaces them at least `min_interval`
/// apart. Different hosts do not wait on each other.
class RateLimiter {
 public:
  RateLimiter(std::shared_ptr<Clock> clock, std::chrono::milliseconds min_interval);

  /// Blocks until a request to `host` may start; the returned lock keeps
  /// other requests to the same host waiting until it is released.
  std::unique_lock<std::mutex> acquire(const std::string& host);

 private:
  struct Slot {
    std::mutex m;
    std::optional<Clock::time_point> last;
  };
  std::shared_ptr<Clock> clock_;
  std::chrono::milliseconds min_interval_;
  std::mutex table_mutex_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
};

std::string host_of(const std::string& url);

// --- response cache ------------------------------------------------------------

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Raw response bodies on disk, `<key>.body` plus `<key>.meta.json`
/// (service, query text, fetch time). Writes go through a temporary file
/// and a rename.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  static std::string key_for(std::string_view service, std::string_view query);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, std::string_view service, std::string_view query,
           std::string_view body, std::int64_t fetched_at);
  std::optional<std::int64_t> fetched_at(const std::string& key) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
};

// --- client ----------------------------------------------------------------------

enum class FetchMode {
  Live,        // always ask the service, refresh the cache
  CacheFirst,  // serve from cache, ask the service on a miss
  Fixture,     // cache only; a miss is Error(FixtureMissing)
};

std::string_view to_string(FetchMode mode);
FetchMode parse_fetch_mode(std::string_view text);

struct ClientConfig {
  std::string overpass_url = "https://overpass-api.de/api/interpreter";
  std::string nominatim_url = "https://nominatim.openstreetmap.org/search";
  std::filesystem::path cache_dir = ".streetnet-cache";
  FetchMode mode = FetchMode::CacheFirst;
  int overpass_timeout_s = 180;
  double max_tile_km2 = 50.0;
  std::chrono::milliseconds min_interval{1000};
  std::chrono::milliseconds backoff_base{2000};
  int max_retries = 4;
};

struct PlaceBoundary {
  std::string display_name;
  MultiPolygon geometry;  // empty when point_only
  Point centroid;
  BBox bbox;
  bool point_only = false;
};

struct OverpassResponse {
  std::vector<OsmElement> elements;
  std::int64_t fetched_at = 0;
  /// One cache key per request that contributed (one per tile).
  std::vector<std::string> query_hashes;
  std::vector<std::string> warnings;
};

using Region = std::variant<BBox, MultiPolygon>;

struct FootprintCollection {
  struct Footprint {
    OsmId id = 0;
    bool relation = false;
    MultiPolygon geometry;
    Tags tags;
  };
  std::vector<Footprint> features;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Overpass QL for the streets of one region tile.
std::string streets_query(const Region& region, NetworkType type, int timeout_s = 180);
std::string footprints_query(const Region& region, int timeout_s = 180);
/// Splits a region whose area exceeds max_km2 into bbox tiles that cover it.
std::vector<Region> tile_region(const Region& region, double max_km2);
double region_area_km2(const Region& region);

class OsmClient {
 public:
  OsmClient(ClientConfig config, std::shared_ptr<Transport> transport,
            std::shared_ptr<Clock> clock = std::make_shared<SystemClock>());

  const ClientConfig& config() const { return config_; }
  ResponseCache& cache() { return cache_; }

  /// Throws Error(NoResult), Error(RateLimited), Error(Transport),
  /// Error(FixtureMissing).
  PlaceBoundary geocode_place(const std::string& name);

  /// Query texts fetch_streets would send for this region, one per tile.
  std::vector<std::string> plan_streets(const Region& region, NetworkType type) const;
  std::vector<std::string> plan_footprints(const Region& region) const;
  /// Nominatim query string used for `name`.
  static std::string geocode_query(const std::string& name);

  /// Ways passing the network type's filter plus the nodes they use; tiles
  /// merged and deduplicated by id.
  OverpassResponse fetch_streets(const Region& region, NetworkType type);
  FootprintCollection fetch_footprints(const Region& region);

  /// Cached request/response exchange; exposed for the elevation provider.
  std::string exchange(std::string_view service, const HttpRequest& request, const std::string& query_text,
                       std::int64_t* fetched_at = nullptr);

 private:
  std::string overpass(const std::string& query, std::int64_t* fetched_at);

  ClientConfig config_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<Clock> clock_;
  RateLimiter limiter_;
  ResponseCache cache_;
};

// --- elevation ---------------------------------------------------------------------

struct NodeLocation {
  NodeId id = 0;
  double lon = 0.0;
  double lat = 0.0;
};

struct ElevationRecord {
  NodeId node_id = 0;
  double elevation = 0.0;
};

class ElevationProvider {
 public:
  virtual ~ElevationProvider() = default;
  virtual std::size_t batch_limit() const = 0;
  /// One value per location, same order; NaN marks a point without data.
  virtual std::vector<double> lookup(const std::vector<NodeLocation>& batch) = 0;
};

/// Serves elevations from a table of (lon, lat) -> meters, matched to
/// 7 decimals. Unknown points yield NaN.
class FixtureElevationProvider : public ElevationProvider {
 public:
  explicit FixtureElevationProvider(std::size_t batch_limit = 512);
  static FixtureElevationProvider from_json(const std::string& document, std::size_t batch_limit = 512);

  void add(double lon, double lat, double elevation);
  std::size_t batch_limit() const override { return batch_limit_; }
  std::vector<double> lookup(const std::vector<NodeLocation>& batch) override;
  int calls() const { return calls_; }

 private:
  static std::pair<std::int64_t, std::int64_t> grid(double lon, double lat);
  std::size_t batch_limit_;
  std::map<std::pair<std::int64_t, std::int64_t>, double> table_;
  int calls_ = 0;
};

/// Open-Elevation style endpoint: POST {"locations":[{latitude,longitude}]}
/// answering {"results":[{"elevation":z}]}. Responses go through the client
/// cache. 401/403 raise Error(ProviderAuth).
class HttpElevationProvider : public ElevationProvider {
 public:
  HttpElevationProvider(OsmClient& client, std::string url, std::size_t batch_limit = 512);
  std::size_t batch_limit() const override { return batch_limit_; }
  std::vector<double> lookup(const std::vector<NodeLocation>& batch) override;

 private:
  OsmClient& client_;
  std::string url_;
  std::size_t batch_limit_;
};

/// One record per input node, in input order. Throws Error(PartialFailure)
/// naming the nodes that came back without a finite value.
std::vector<ElevationRecord> fetch_elevations(ElevationProvider& provider,
                                              const std::vector<NodeLocation>& nodes);

/// Stores elevations on every node of a lon/lat graph.
void add_node_elevations(StreetGraph& g, ElevationProvider& provider);

}  // namespace streetnet::osm
