#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rescue/error.hpp"
#include "rescue/text.hpp"

namespace rescue {

enum class Precision { rooftop, street, locality, unknown };

inline constexpr std::string_view to_string(Precision p) {
  switch (p) {
    case Precision::rooftop: return "rooftop";
    case Precision::street: return "street";
    case Precision::locality: return "locality";
    case Precision::unknown: return "unknown";
  }
  return "unknown";
}

inline Precision parse_precision(std::string_view s) {
  auto f = text::fold(text::trim(s));
  if (f == "rooftop") return Precision::rooftop;
  if (f == "street") return Precision::street;
  if (f == "locality") return Precision::locality;
  return Precision::unknown;
}

struct GeoPoint {
  double longitude = 0.0;
  double latitude = 0.0;
  Precision precision = Precision::unknown;

  bool valid() const {
    return longitude >= -180.0 && longitude <= 180.0 && latitude >= -90.0 && latitude <= 90.0;
  }
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

enum class GeocodeStatus { ok, not_found, backend_error, rate_limited };

inline constexpr std::string_view to_string(GeocodeStatus s) {
  switch (s) {
    case GeocodeStatus::ok: return "ok";
    case GeocodeStatus::not_found: return "not_found";
    case GeocodeStatus::backend_error: return "backend_error";
    case GeocodeStatus::rate_limited: return "rate_limited";
  }
  return "";
}

/// What a backend reports for one query. `point` is set iff status is ok.
struct BackendResponse {
  GeocodeStatus status = GeocodeStatus::not_found;
  std::optional<GeoPoint> point;
  std::string detail;

  static BackendResponse found(GeoPoint p) { return {GeocodeStatus::ok, p, {}}; }
  static BackendResponse missing() { return {GeocodeStatus::not_found, std::nullopt, {}}; }
  static BackendResponse failure(GeocodeStatus s, std::string why) {
    return {s, std::nullopt, std::move(why)};
  }
};

struct GeocodeResult {
  std::string query;
  std::optional<GeoPoint> point;
  GeocodeStatus status = GeocodeStatus::not_found;
  bool from_cache = false;

  bool ok() const { return status == GeocodeStatus::ok; }
};

/// Cache and gazetteer key: case-folded, whitespace runs collapsed, and
/// commas rewritten as ", " regardless of surrounding whitespace.
inline std::string normalize_address_key(std::string_view address) {
  const std::string f = text::fold(address);
  std::string out;
  out.reserve(f.size());
  bool pending_space = false;
  for (char c : f) {
    if (text::is_space(c)) {
      pending_space = !out.empty();
    } else if (c == ',') {
      out.push_back(',');
      pending_space = true;
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

class GeocoderBackend {
 public:
  virtual ~GeocoderBackend() = default;
  virtual BackendResponse lookup(const std::string& query) = 0;
};

/// Offline address table standing in for an external geocoding service.
class Gazetteer {
 public:
  /// TSV rows: address, longitude, latitude[, precision]. Blank lines and
  /// lines starting with "# " are skipped.
  static Gazetteer load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open gazetteer: " + path.string());
    Gazetteer g;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      auto trimmed = text::trim(line);
      if (trimmed.empty() || (trimmed.front() == '#' && (trimmed.size() == 1 || text::is_space(trimmed[1]))))
        continue;
      auto where = [&] { return path.string() + ":" + std::to_string(row); };
      std::vector<std::string> cols;
      std::size_t from = 0;
      std::string_view lv = line;
      if (!lv.empty() && lv.back() == '\r') lv.remove_suffix(1);
      while (true) {
        auto tab = lv.find('\t', from);
        cols.emplace_back(lv.substr(from, tab == std::string_view::npos ? lv.npos : tab - from));
        if (tab == std::string_view::npos) break;
        from = tab + 1;
      }
      if (cols.size() < 3 || cols.size() > 4)
        throw LoadError(where() + ": expected address<TAB>longitude<TAB>latitude[<TAB>precision]");
      GeoPoint p;
      if (!parse_double(cols[1], p.longitude) || !parse_double(cols[2], p.latitude))
        throw LoadError(where() + ": bad coordinate");
      if (!p.valid()) throw LoadError(where() + ": coordinate out of range");
      p.precision = cols.size() == 4 ? parse_precision(cols[3]) : Precision::unknown;
      std::string key = normalize_address_key(cols[0]);
      if (key.empty()) throw LoadError(where() + ": empty address");
      if (!g.table_.emplace(key, p).second)
        throw LoadError(where() + ": duplicate address '" + cols[0] + "'");
    }
    return g;
  }

  void insert(std::string_view address, GeoPoint p) {
    table_.insert_or_assign(normalize_address_key(address), p);
  }

  std::optional<GeoPoint> find(std::string_view address) const {
    auto it = table_.find(normalize_address_key(address));
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return table_.size(); }

 private:
  static bool parse_double(std::string_view s, double& out) {
    std::string str(text::trim(s));
    if (str.empty()) return false;
    char* end = nullptr;
    out = std::strtod(str.c_str(), &end);
    return end == str.c_str() + str.size();
  }

  std::unordered_map<std::string, GeoPoint> table_;
};

class GazetteerBackend final : public GeocoderBackend {
 public:
  explicit GazetteerBackend(Gazetteer g) : gazetteer_(std::move(g)) {}
  BackendResponse lookup(const std::string& query) override {
    if (auto p = gazetteer_.find(query)) return BackendResponse::found(*p);
    return BackendResponse::missing();
  }
  const Gazetteer& gazetteer() const { return gazetteer_; }

 private:
  Gazetteer gazetteer_;
};

/// Cache in front of a backend. ok and not_found results are kept for the
/// life of the object; errors are not, so a later call retries. Concurrent
/// calls for one key share a single backend request.
class Geocoder {
 public:
  explicit Geocoder(std::shared_ptr<GeocoderBackend> backend) : backend_(std::move(backend)) {}

  GeocodeResult geocode(const std::string& query) {
    GeocodeResult result;
    result.query = query;
    const std::string key = normalize_address_key(query);
    if (key.empty()) return result;

    std::shared_future<BackendResponse> pending;
    std::promise<BackendResponse> promise;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      auto it = entries_.find(key);
      if (it != entries_.end()) {
        pending = it->second;
      } else {
        pending = promise.get_future().share();
        entries_.emplace(key, pending);
        owner = true;
      }
    }
    if (owner) {
      BackendResponse r = call_backend(query);
      promise.set_value(r);
      if (r.status != GeocodeStatus::ok && r.status != GeocodeStatus::not_found) {
        std::lock_guard lock(mutex_);
        entries_.erase(key);
      }
    }
    const BackendResponse& r = pending.get();
    result.status = r.status;
    result.point = r.point;
    result.from_cache = !owner;
    return result;
  }

  std::size_t backend_calls() const { return backend_calls_.load(); }

  std::size_t cached_entries() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

 private:
  BackendResponse call_backend(const std::string& query) {
    ++backend_calls_;
    BackendResponse r;
    try {
      r = backend_->lookup(query);
    } catch (const std::exception& e) {
      return BackendResponse::failure(GeocodeStatus::backend_error, e.what());
    }
    if (r.status == GeocodeStatus::ok && (!r.point || !r.point->valid()))
      return BackendResponse::failure(GeocodeStatus::backend_error, "backend returned invalid point");
    if (r.status != GeocodeStatus::ok) r.point.reset();
    return r;
  }

  std::shared_ptr<GeocoderBackend> backend_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_future<BackendResponse>> entries_;
  std::atomic<std::size_t> backend_calls_{0};
};

// ---------------------------------------------------------------------------
// Clocks for request pacing

class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_until(time_point t) = 0;
};

class SteadyClock final : public Clock {
 public:
  time_point now() override { return std::chrono::steady_clock::now(); }
  void sleep_until(time_point t) override { std::this_thread::sleep_until(t); }
};

/// Time only moves when someone sleeps.
class VirtualClock final : public Clock {
 public:
  time_point now() override {
    std::lock_guard lock(mutex_);
    return now_;
  }
  void sleep_until(time_point t) override {
    std::lock_guard lock(mutex_);
    if (t > now_) now_ = t;
  }
  void advance(std::chrono::nanoseconds d) {
    std::lock_guard lock(mutex_);
    now_ += d;
  }

 private:
  std::mutex mutex_;
  time_point now_{};
};

/// Enforces a minimum interval between successive request starts.
class RequestPacer {
 public:
  RequestPacer(std::shared_ptr<Clock> clock, std::chrono::milliseconds min_interval)
      : clock_(std::move(clock)), interval_(min_interval) {}

  void wait_turn() {
    std::lock_guard lock(mutex_);
    if (last_) clock_->sleep_until(*last_ + interval_);
    last_ = clock_->now();
  }

  std::chrono::milliseconds interval() const { return interval_; }

 private:
  std::shared_ptr<Clock> clock_;
  std::chrono::milliseconds interval_;
  std::mutex mutex_;
  std::optional<Clock::time_point> last_;
};

}  // namespace rescue
