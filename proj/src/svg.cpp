#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

#include "streetnet/error.hpp"
#include "streetnet/geo_ops.hpp"
#include "streetnet/io.hpp"

namespace streetnet::io {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

}  // namespace

std::string render_svg(const StreetGraph& g, const SvgOptions& options) {
  if (!g.meta.crs.projected()) {
    throw Error(ErrorKind::NotProjected, "figure-ground rendering needs a projected graph");
  }
  if (g.empty()) throw Error(ErrorKind::EmptyGraph, "graph has no nodes");

  const StreetGraph und = undirected_projection(g);
  std::vector<const Edge*> order;
  for (const auto& e : und.edges()) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Edge* a, const Edge* b) {
    return std::tie(a->u, a->v, a->key) < std::tie(b->u, b->v, b->key);
  });

  auto polyline = [&](const Edge& e) {
    return e.data.geometry.value_or(std::vector<Point>{und.node(e.u).point(), und.node(e.v).point()});
  };

  double minx, miny, maxx, maxy;
  if (options.square_mile_center) {
    const Point c = geo::from_lonlat(g.meta.crs, *options.square_mile_center);
    const double h = kSquareMileSideM / 2.0;
    minx = c.x - h;
    maxx = c.x + h;
    miny = c.y - h;
    maxy = c.y + h;
  } else if (options.bbox) {
    std::tie(minx, miny, maxx, maxy) = std::tuple((*options.bbox)[0], (*options.bbox)[1], (*options.bbox)[2],
                                                  (*options.bbox)[3]);
    if (!(maxx > minx && maxy > miny)) throw Error(ErrorKind::InvalidArgument, "empty SVG bounding box");
  } else {
    minx = miny = std::numeric_limits<double>::infinity();
    maxx = maxy = -std::numeric_limits<double>::infinity();
    for (const auto& n : und.nodes()) {
      minx = std::min(minx, n.x);
      maxx = std::max(maxx, n.x);
      miny = std::min(miny, n.y);
      maxy = std::max(maxy, n.y);
    }
    for (const auto* e : order) {
      for (const auto& p : polyline(*e)) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
      }
    }
    const double pad = options.stroke_m;
    minx -= pad;
    miny -= pad;
    maxx += pad;
    maxy += pad;
  }
  const double w = maxx - minx;
  const double h = maxy - miny;
  const int height_px = std::max(1, static_cast<int>(std::lround(options.width_px * h / w)));

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(options.width_px) + "\" height=\"" + std::to_string(height_px) + "\" viewBox=\"" +
         fixed3(minx) + " " + fixed3(-maxy) + " " + fixed3(w) + " " + fixed3(h) + "\">\n";
  out += "<rect x=\"" + fixed3(minx) + "\" y=\"" + fixed3(-maxy) + "\" width=\"" + fixed3(w) + "\" height=\"" +
         fixed3(h) + "\" fill=\"#ffffff\"/>\n";
  out += "<g fill=\"none\" stroke=\"#000000\" stroke-width=\"" + fixed3(options.stroke_m) +
         "\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
  for (const auto* e : order) {
    const auto pts = polyline(*e);
    double ex0 = pts[0].x, ex1 = pts[0].x, ey0 = pts[0].y, ey1 = pts[0].y;
    for (const auto& p : pts) {
      ex0 = std::min(ex0, p.x);
      ex1 = std::max(ex1, p.x);
      ey0 = std::min(ey0, p.y);
      ey1 = std::max(ey1, p.y);
    }
    if (ex1 < minx || ex0 > maxx || ey1 < miny || ey0 > maxy) continue;
    out += "<path d=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out += i == 0 ? "M" : " L";
      out += fixed3(pts[i].x) + " " + fixed3(-pts[i].y);
    }
    out += "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace streetnet::io
