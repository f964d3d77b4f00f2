#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rescue/features.hpp"
#include "rescue/full_address.hpp"
#include "rescue/geocode.hpp"
#include "rescue/timezone.hpp"
#include "rescue/tweet.hpp"

namespace rescue {

struct RescueRequest {
  Tweet tweet;
  FeatureVector features;
  FullAddress address;  // completed
  GeocodeResult geocode;
  CentralTime local_time;
};

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline std::string dump(const ordered_json& j, int indent = -1) {
  return j.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

inline ordered_json request_properties(const RescueRequest& r) {
  ordered_json p;
  p["id"] = r.tweet.id;
  p["text"] = r.tweet.text;
  p["completed_address"] = r.address.completed;
  p["local_time"] = r.local_time.iso8601();
  p["completion_rule"] = std::string(to_string(r.address.completion_rule));
  if (!r.address.additional.empty()) {
    ordered_json extra = ordered_json::array();
    for (const auto& m : r.address.additional)
      extra.push_back({{"start", m.start}, {"end", m.end}, {"text", m.matched_text}});
    p["additional_addresses"] = extra;
  }
  return p;
}

}  // namespace detail

/// A GeoJSON FeatureCollection with one Point per successfully geocoded
/// request. Requests whose geocode failed go to the top-level "ungeocoded"
/// array with their status, so features + ungeocoded == requests.
inline std::string to_geojson(const std::vector<RescueRequest>& requests) {
  using detail::ordered_json;
  ordered_json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = ordered_json::array();
  fc["ungeocoded"] = ordered_json::array();
  for (const auto& r : requests) {
    auto props = detail::request_properties(r);
    if (r.geocode.ok() && r.geocode.point) {
      ordered_json f;
      f["type"] = "Feature";
      f["geometry"] = {{"type", "Point"},
                       {"coordinates", {r.geocode.point->longitude, r.geocode.point->latitude}}};
      props["precision"] = std::string(to_string(r.geocode.point->precision));
      f["properties"] = std::move(props);
      fc["features"].push_back(std::move(f));
    } else {
      props["status"] = std::string(to_string(r.geocode.status));
      fc["ungeocoded"].push_back(std::move(props));
    }
  }
  return detail::dump(fc, 2) + "\n";
}

/// JSON made safe to embed inside a <script> element: '<', '>' and '&'
/// only ever occur inside strings, where \u escapes are equivalent.
inline std::string json_for_script(std::string_view json) {
  std::string out;
  out.reserve(json.size());
  for (char c : json) {
    switch (c) {
      case '<': out += "\\u003c"; break;
      case '>': out += "\\u003e"; break;
      case '&': out += "\\u0026"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

/// Self-contained HTML page with a Leaflet map: one marker per geocoded
/// request, pop-up with tweet text, completed address and US/Central time.
/// Marker data is embedded; only the map library and tiles load remotely.
inline std::string to_map_document(const std::vector<RescueRequest>& requests,
                                   const BoundingBox& default_view = kHarveyBoundingBox) {
  using detail::ordered_json;
  ordered_json data;
  ordered_json markers = ordered_json::array();
  double west = 180, south = 90, east = -180, north = -90;
  std::size_t ungeocoded = 0;
  for (const auto& r : requests) {
    if (!r.geocode.ok() || !r.geocode.point) {
      ++ungeocoded;
      continue;
    }
    const GeoPoint& p = *r.geocode.point;
    west = std::min(west, p.longitude);
    east = std::max(east, p.longitude);
    south = std::min(south, p.latitude);
    north = std::max(north, p.latitude);
    markers.push_back({{"id", r.tweet.id},
                       {"lat", p.latitude},
                       {"lng", p.longitude},
                       {"text", r.tweet.text},
                       {"address", r.address.completed},
                       {"time", r.local_time.display()}});
  }
  if (markers.empty()) {
    west = default_view.west;
    south = default_view.south;
    east = default_view.east;
    north = default_view.north;
  }
  data["bounds"] = {{south, west}, {north, east}};
  data["markers"] = std::move(markers);
  data["ungeocoded"] = ungeocoded;

  std::string html = R"html(<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>Rescue requests</title>
<meta name="viewport" content="width=device-width, initial-scale=1">
<link rel="stylesheet" href="https://unpkg.com/leaflet@1.9.4/dist/leaflet.css">
<script src="https://unpkg.com/leaflet@1.9.4/dist/leaflet.js"></script>
<style>
  html, body, #map { height: 100%; margin: 0; }
  .popup-text { max-width: 280px; white-space: pre-wrap; }
  .popup-meta { color: #555; font-size: 0.9em; }
</style>
</head>
<body>
<div id="map"></div>
<script type="application/json" id="rescue-data">)html";
  html += json_for_script(detail::dump(data));
  html += R"html(</script>
<script>
(function () {
  var data = JSON.parse(document.getElementById('rescue-data').textContent);
  var map = L.map('map');
  L.tileLayer('https://{s}.tile.openstreetmap.org/{z}/{x}/{y}.png', {
    maxZoom: 19,
    attribution: '&copy; OpenStreetMap contributors'
  }).addTo(map);
  map.fitBounds(data.bounds, { maxZoom: 16, padding: [20, 20] });
  function line(cls, value) {
    var div = document.createElement('div');
    div.className = cls;
    div.textContent = value;
    return div;
  }
  data.markers.forEach(function (m) {
    var box = document.createElement('div');
    box.appendChild(line('popup-text', m.text));
    box.appendChild(line('popup-meta', m.address));
    box.appendChild(line('popup-meta', m.time));
    L.marker([m.lat, m.lng]).bindPopup(box).addTo(map);
  });
})();
</script>
</body>
</html>
)html";
  return html;
}

}  // namespace rescue
