#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <algorithm>
#include <cctype>

#include "streetnet/error.hpp"
#include "streetnet/osm_client.hpp"

namespace streetnet::osm {

HttpTransport::HttpTransport(std::chrono::seconds timeout, std::string user_agent)
    : timeout_(timeout), user_agent_(std::move(user_agent)) {}

HttpResponse HttpTransport::send(const HttpRequest& request) {
  const auto scheme_end = request.url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorKind::InvalidArgument, "not a URL: " + request.url);
  const auto path_start = request.url.find('/', scheme_end + 3);
  const std::string base = request.url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

  httplib::Client client(base);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  httplib::Headers headers{{"User-Agent", user_agent_}};
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);

  httplib::Result res = request.method == "POST"
                            ? client.Post(path, headers, request.body, request.content_type)
                            : client.Get(path, headers);
  if (!res) {
    throw Error(ErrorKind::Transport,
                "request to " + host_of(request.url) + " failed: " + httplib::to_string(res.error()));
  }
  HttpResponse out;
  out.status = res->status;
  out.body = res->body;
  for (const auto& [k, v] : res->headers) {
    std::string name = k;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    out.headers[name] = v;
  }
  return out;
}

}  // namespace streetnet::osm
