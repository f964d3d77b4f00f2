#pragma once

// HTTP(S) geocoding backend. Requires cpp-httplib; define
// CPPHTTPLIB_OPENSSL_SUPPORT (and link OpenSSL) for https endpoints.

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "rescue/error.hpp"
#include "rescue/geocode.hpp"

namespace rescue {

inline constexpr std::string_view kGeocoderKeyVariable = "RESCUE_GEOCODER_KEY";

struct HttpGeocoderConfig {
  /// Request URL with "{query}" and optional "{key}" placeholders, e.g.
  /// "https://maps.googleapis.com/maps/api/geocode/json?address={query}&key={key}".
  std::string url_template;
  std::string api_key;
  std::chrono::milliseconds min_interval{100};
  std::chrono::milliseconds timeout{5000};

  /// Reads the credential from the environment; never from flags.
  static HttpGeocoderConfig from_environment(std::string url_template,
                                             std::string_view variable = kGeocoderKeyVariable) {
    HttpGeocoderConfig c;
    c.url_template = std::move(url_template);
    if (const char* key = std::getenv(std::string(variable).c_str())) c.api_key = key;
    return c;
  }
};

struct HttpReply {
  int status = 0;  // 0: no response (connect failure, timeout)
  std::string body;
  std::string error;
};

inline std::string url_encode(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

inline std::string expand_url_template(std::string_view tmpl, std::string_view query,
                                       std::string_view key) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl.compare(i, 7, "{query}") == 0) {
      out += url_encode(query);
      i += 7;
    } else if (tmpl.compare(i, 5, "{key}") == 0) {
      out += url_encode(key);
      i += 5;
    } else {
      out.push_back(tmpl[i++]);
    }
  }
  return out;
}

/// Interprets a Google-Maps-style geocoding reply:
/// {"status": "OK", "results": [{"geometry": {"location": {"lat", "lng"},
/// "location_type": "ROOFTOP"}}]}. Only the first result is used.
inline BackendResponse parse_geocoder_reply(const HttpReply& reply) {
  if (reply.status == 0)
    return BackendResponse::failure(GeocodeStatus::backend_error,
                                    reply.error.empty() ? "no response" : reply.error);
  if (reply.status == 429)
    return BackendResponse::failure(GeocodeStatus::rate_limited, "HTTP 429");
  if (reply.status < 200 || reply.status >= 300)
    return BackendResponse::failure(GeocodeStatus::backend_error,
                                    "HTTP " + std::to_string(reply.status));

  using nlohmann::json;
  json j = json::parse(reply.body, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    return BackendResponse::failure(GeocodeStatus::backend_error, "malformed body");

  const std::string status = j.value("status", std::string("OK"));
  if (status == "ZERO_RESULTS") return BackendResponse::missing();
  if (status == "OVER_QUERY_LIMIT" || status == "OVER_DAILY_LIMIT")
    return BackendResponse::failure(GeocodeStatus::rate_limited, status);
  if (status != "OK") return BackendResponse::failure(GeocodeStatus::backend_error, status);

  auto results = j.find("results");
  if (results == j.end() || !results->is_array())
    return BackendResponse::failure(GeocodeStatus::backend_error, "missing results");
  if (results->empty()) return BackendResponse::missing();

  try {
    const json& geometry = results->front().at("geometry");
    const json& loc = geometry.at("location");
    GeoPoint p;
    p.latitude = loc.at("lat").get<double>();
    p.longitude = loc.at("lng").get<double>();
    const std::string type = geometry.value("location_type", std::string());
    if (type == "ROOFTOP")
      p.precision = Precision::rooftop;
    else if (type == "RANGE_INTERPOLATED" || type == "GEOMETRIC_CENTER")
      p.precision = Precision::street;
    else if (type == "APPROXIMATE")
      p.precision = Precision::locality;
    if (!p.valid()) return BackendResponse::failure(GeocodeStatus::backend_error, "point out of range");
    return BackendResponse::found(p);
  } catch (const json::exception& e) {
    return BackendResponse::failure(GeocodeStatus::backend_error, e.what());
  }
}

/// Performs one GET. Swappable so tests can replay recorded replies.
using HttpTransport = std::function<HttpReply(const std::string& url, std::chrono::milliseconds timeout)>;

inline HttpReply httplib_get(const std::string& url, std::chrono::milliseconds timeout) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return {0, {}, "bad URL: " + url};
  auto path_start = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  httplib::Client client(origin);
  if (!client.is_valid()) return {0, {}, "unsupported endpoint: " + origin};
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  auto res = client.Get(path);
  if (!res) return {0, {}, httplib::to_string(res.error())};
  return {res->status, res->body, {}};
}

class HttpGeocoderBackend final : public GeocoderBackend {
 public:
  explicit HttpGeocoderBackend(HttpGeocoderConfig config,
                               std::shared_ptr<Clock> clock = std::make_shared<SteadyClock>(),
                               HttpTransport transport = httplib_get)
      : config_(std::move(config)),
        pacer_(std::move(clock), config_.min_interval),
        transport_(std::move(transport)) {
    if (config_.url_template.find("{query}") == std::string::npos)
      throw ConfigError("geocoder URL template must contain {query}");
  }

  BackendResponse lookup(const std::string& query) override {
    pacer_.wait_turn();
    HttpReply reply =
        transport_(expand_url_template(config_.url_template, query, config_.api_key), config_.timeout);
    return parse_geocoder_reply(reply);
  }

  const HttpGeocoderConfig& config() const { return config_; }

 private:
  HttpGeocoderConfig config_;
  RequestPacer pacer_;
  HttpTransport transport_;
};

}  // namespace rescue
