#pragma once

#include <chrono>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rescue/error.hpp"
#include "rescue/text.hpp"
#include "rescue/timezone.hpp"

namespace rescue {

struct Coordinates {
  double longitude = 0.0;
  double latitude = 0.0;

  bool valid() const {
    return longitude >= -180.0 && longitude <= 180.0 && latitude >= -90.0 && latitude <= 90.0;
  }
  friend bool operator==(const Coordinates&, const Coordinates&) = default;
};

struct Tweet {
  std::string id;
  std::string text;
  Timestamp created_at_utc{};
  std::vector<std::string> hashtags;  // lowercase, without '#'
  std::optional<Coordinates> coordinates;
  std::optional<std::string> user_location;
};

/// Every '#'-prefixed token of `text`, lowercased, '#' stripped, in order of
/// appearance. Tag characters are word characters (letters, digits, '_',
/// and any non-ASCII byte).
inline std::vector<std::string> extract_hashtags(std::string_view text) {
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '#') continue;
    if (i > 0 && text::is_word_char(text[i - 1])) continue;
    std::size_t j = i + 1;
    while (j < text.size() && text::is_word_char(text[j])) ++j;
    if (j > i + 1) tags.push_back(text::fold(text.substr(i + 1, j - i - 1)));
    i = j - 1;
  }
  return tags;
}

namespace detail {

inline bool parse_uint(std::string_view s, int& out) {
  if (s.empty()) return false;
  int v = 0;
  for (char c : s) {
    if (!text::is_digit(c)) return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

inline std::optional<Timestamp> make_timestamp(int y, int mo, int d, int h, int mi, int s,
                                               int offset_minutes) {
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
}

inline int parse_offset(std::string_view s, bool& ok) {
  // "+0000", "-0500", "+05:00", "Z"
  ok = false;
  if (s == "Z" || s == "z") {
    ok = true;
    return 0;
  }
  if (s.size() < 5 || (s[0] != '+' && s[0] != '-')) return 0;
  std::string digits;
  for (char c : s.substr(1))
    if (c != ':') digits.push_back(c);
  int hh = 0, mm = 0;
  if (digits.size() != 4 || !parse_uint(std::string_view(digits).substr(0, 2), hh) ||
      !parse_uint(std::string_view(digits).substr(2, 2), mm))
    return 0;
  ok = true;
  int total = hh * 60 + mm;
  return s[0] == '-' ? -total : total;
}

}  // namespace detail

/// Parses the streaming-API form "Sun Aug 27 12:00:00 +0000 2017" or
/// ISO 8601 "2017-08-27T12:00:00Z" (optional fraction and numeric offset).
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  s = text::trim(s);
  auto parts = text::split_ws(s);
  if (parts.size() == 6) {
    static constexpr std::string_view months[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                                  "jul", "aug", "sep", "oct", "nov", "dec"};
    auto mon = text::fold(parts[1]);
    int mo = 0;
    for (int i = 0; i < 12; ++i)
      if (mon == months[i]) mo = i + 1;
    int d = 0, y = 0, h = 0, mi = 0, sec = 0;
    auto clock = parts[3];
    bool ok = mo > 0 && detail::parse_uint(parts[2], d) && detail::parse_uint(parts[5], y) &&
              clock.size() == 8 && clock[2] == ':' && clock[5] == ':' &&
              detail::parse_uint(clock.substr(0, 2), h) &&
              detail::parse_uint(clock.substr(3, 2), mi) &&
              detail::parse_uint(clock.substr(6, 2), sec);
    bool off_ok = false;
    int off = detail::parse_offset(parts[4], off_ok);
    if (!ok || !off_ok) return std::nullopt;
    return detail::make_timestamp(y, mo, d, h, mi, sec, off);
  }
  if (parts.size() == 1 && s.size() >= 19 && s[4] == '-' && s[7] == '-' &&
      (s[10] == 'T' || s[10] == 't' || s[10] == ' ') && s[13] == ':' && s[16] == ':') {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!detail::parse_uint(s.substr(0, 4), y) || !detail::parse_uint(s.substr(5, 2), mo) ||
        !detail::parse_uint(s.substr(8, 2), d) || !detail::parse_uint(s.substr(11, 2), h) ||
        !detail::parse_uint(s.substr(14, 2), mi) || !detail::parse_uint(s.substr(17, 2), sec))
      return std::nullopt;
    auto rest = s.substr(19);
    if (!rest.empty() && rest[0] == '.') {
      std::size_t k = 1;
      while (k < rest.size() && text::is_digit(rest[k])) ++k;
      rest.remove_prefix(k);
    }
    int off = 0;
    if (!rest.empty()) {
      bool off_ok = false;
      off = detail::parse_offset(rest, off_ok);
      if (!off_ok) return std::nullopt;
    }
    return detail::make_timestamp(y, mo, d, h, mi, sec, off);
  }
  return std::nullopt;
}

/// "2017-08-27T12:00:00Z"
inline std::string format_utc(Timestamp t) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  year_month_day ymd{day};
  hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<long>(hms.hours().count()),
                static_cast<long>(hms.minutes().count()), static_cast<long>(hms.seconds().count()));
  return buf;
}

/// Maps one newline-delimited record to a Tweet.
///
/// Accepted keys: "id_str" or "id"; "full_text", "extended_tweet.full_text"
/// or "text"; "created_at"; "coordinates" as a GeoJSON Point or a bare
/// [lon, lat] pair; "user.location" or "user_location". Hashtags are always
/// recomputed from the text.
inline Tweet parse_tweet(std::string_view record, std::size_t line_no = 0) {
  using nlohmann::json;
  json j = json::parse(record.begin(), record.end(), nullptr, false);
  if (j.is_discarded()) throw ParseError(line_no, "malformed record");
  if (!j.is_object()) throw ParseError(line_no, "record is not an object");

  Tweet t;
  if (auto it = j.find("id_str"); it != j.end() && it->is_string()) {
    t.id = it->get<std::string>();
  } else if (auto id = j.find("id"); id != j.end()) {
    if (id->is_string())
      t.id = id->get<std::string>();
    else if (id->is_number_integer())
      t.id = std::to_string(id->get<long long>());
  }
  if (t.id.empty()) throw ParseError(line_no, "missing id");

  const json* text = nullptr;
  if (auto it = j.find("full_text"); it != j.end() && it->is_string()) {
    text = &*it;
  } else if (auto ext = j.find("extended_tweet"); ext != j.end() && ext->is_object() &&
                                                   ext->contains("full_text") &&
                                                   (*ext)["full_text"].is_string()) {
    text = &(*ext)["full_text"];
  } else if (auto it2 = j.find("text"); it2 != j.end() && it2->is_string()) {
    text = &*it2;
  }
  if (!text) throw ParseError(line_no, "missing text");
  t.text = text->get<std::string>();

  auto created = j.find("created_at");
  if (created == j.end() || !created->is_string())
    throw ParseError(line_no, "missing created_at");
  auto ts = parse_timestamp(created->get<std::string>());
  if (!ts) throw ParseError(line_no, "unparseable created_at");
  t.created_at_utc = *ts;

  if (auto c = j.find("coordinates"); c != j.end() && !c->is_null()) {
    const json* pair = c->is_object() && c->contains("coordinates") ? &(*c)["coordinates"] : &*c;
    if (!pair->is_array() || pair->size() != 2 || !(*pair)[0].is_number() ||
        !(*pair)[1].is_number())
      throw ParseError(line_no, "malformed coordinates");
    Coordinates xy{(*pair)[0].get<double>(), (*pair)[1].get<double>()};
    if (!xy.valid()) throw ParseError(line_no, "coordinates out of range");
    t.coordinates = xy;
  }

  if (auto u = j.find("user"); u != j.end() && u->is_object()) {
    if (auto loc = u->find("location"); loc != u->end() && loc->is_string())
      t.user_location = loc->get<std::string>();
  } else if (auto loc = j.find("user_location"); loc != j.end() && loc->is_string()) {
    t.user_location = loc->get<std::string>();
  }

  t.hashtags = extract_hashtags(t.text);
  return t;
}

struct IngestStats {
  std::size_t lines = 0;       // non-blank lines seen
  std::size_t accepted = 0;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> diagnostics;  // first kMaxDiagnostics parse errors

  static constexpr std::size_t kMaxDiagnostics = 100;
};

/// Sequential replay of newline-delimited records. One reader may consume
/// several sources in order; duplicate ids are dropped across all of them.
class TweetReader {
 public:
  /// Invokes `sink(Tweet&&)` for every accepted record, in input order.
  template <class Sink>
  void read(std::istream& in, Sink&& sink) {
    if (!in.good()) throw IoError("unreadable input stream");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      ++stats_.lines;
      Tweet t;
      try {
        t = parse_tweet(line, line_no);
      } catch (const ParseError& e) {
        ++stats_.malformed;
        if (stats_.diagnostics.size() < IngestStats::kMaxDiagnostics)
          stats_.diagnostics.emplace_back(e.what());
        continue;
      }
      if (!seen_.insert(t.id).second) {
        ++stats_.duplicates;
        continue;
      }
      ++stats_.accepted;
      sink(std::move(t));
    }
    if (in.bad()) throw IoError("read error on input stream");
  }

  template <class Sink>
  void read_file(const std::filesystem::path& path, Sink&& sink) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file: " + path.string());
    read(in, std::forward<Sink>(sink));
  }

  const IngestStats& stats() const { return stats_; }

 private:
  IngestStats stats_;
  std::unordered_set<std::string> seen_;
};

struct IngestResult {
  std::vector<Tweet> tweets;
  IngestStats stats;
};

inline IngestResult read_stream(std::istream& in) {
  TweetReader reader;
  IngestResult result;
  reader.read(in, [&](Tweet&& t) { result.tweets.push_back(std::move(t)); });
  result.stats = reader.stats();
  return result;
}

/// Reads a corpus manifest: one input path per line, '#' comments ignored,
/// relative paths resolved against the manifest's directory.
inline std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot open manifest: " + manifest.string());
  std::vector<std::filesystem::path> files;
  std::string line;
  while (std::getline(in, line)) {
    auto entry = text::trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    std::filesystem::path p{std::string(entry)};
    files.push_back(p.is_absolute() ? p : manifest.parent_path() / p);
  }
  return files;
}

// ---------------------------------------------------------------------------
// Stream pre-filter (keywords OR bounding box)

struct BoundingBox {
  double west = 0.0;
  double south = 0.0;
  double east = 0.0;
  double north = 0.0;

  bool valid() const { return west < east && south < north; }

  /// Boundary-inclusive.
  bool contains(const Coordinates& c) const {
    return c.longitude >= west && c.longitude <= east && c.latitude >= south &&
           c.latitude <= north;
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline constexpr BoundingBox kHarveyBoundingBox{-99.0, 27.6, -90.8, 33.5};

inline const std::vector<std::string>& harvey_track_keywords() {
  static const std::vector<std::string> kw{"#HurricaneHarvey", "#Harvey", "Hurricane", "flooding"};
  return kw;
}

/// Track keywords and bounding box, always combined with OR.
class StreamConfig {
 public:
  StreamConfig(std::vector<std::string> keywords, std::optional<BoundingBox> bbox)
      : keywords_(std::move(keywords)), bbox_(bbox) {
    if (bbox_ && !bbox_->valid()) throw ConfigError("bounding box must have west < east and south < north");
    std::erase_if(keywords_, [](const std::string& k) { return text::trim(k).empty(); });
    if (keywords_.empty() && !bbox_) throw ConfigError("stream filter needs keywords or a bounding box");
    for (const auto& k : keywords_) folded_.push_back(text::fold(text::trim(k)));
  }

  static StreamConfig harvey() { return StreamConfig(harvey_track_keywords(), kHarveyBoundingBox); }

  const std::vector<std::string>& keywords() const { return keywords_; }
  const std::optional<BoundingBox>& bbox() const { return bbox_; }
  const std::vector<std::string>& folded_keywords() const { return folded_; }

 private:
  std::vector<std::string> keywords_;
  std::optional<BoundingBox> bbox_;
  std::vector<std::string> folded_;
};

/// True iff the text or hashtags contain any keyword (case-insensitive
/// substring) OR the tweet's coordinates fall inside the bounding box.
inline bool passes_stream_filter(const Tweet& tweet, const StreamConfig& cfg) {
  if (!cfg.folded_keywords().empty()) {
    const std::string text = text::fold(tweet.text);
    for (const auto& kw : cfg.folded_keywords()) {
      if (text.find(kw) != std::string::npos) return true;
      for (const auto& tag : tweet.hashtags)
        if (("#" + tag).find(kw) != std::string::npos) return true;
    }
  }
  return cfg.bbox() && tweet.coordinates && cfg.bbox()->contains(*tweet.coordinates);
}

}  // namespace rescue
