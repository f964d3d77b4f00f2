#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rescue/address.hpp"
#include "rescue/lexicon.hpp"
#include "rescue/text.hpp"

namespace rescue {

enum class CompletionRule { none, houston_hashtag, texas_default, texas_appended };

inline constexpr std::string_view to_string(CompletionRule r) {
  switch (r) {
    case CompletionRule::none: return "none";
    case CompletionRule::houston_hashtag: return "houston_hashtag";
    case CompletionRule::texas_default: return "texas_default";
    case CompletionRule::texas_appended: return "texas_appended";
  }
  return "";
}

/// One optional locality component and whether a comma separated it from
/// the preceding component in the source text.
struct AddressPart {
  std::string value;
  bool comma_before = false;
  friend bool operator==(const AddressPart&, const AddressPart&) = default;
};

struct FullAddress {
  std::string house_number;
  std::string street;
  AddressForm form = AddressForm::name_suffix;
  std::optional<AddressPart> unit;
  std::optional<AddressPart> city;
  std::optional<AddressPart> state;
  std::optional<AddressPart> zip;

  std::string completed;  // set by complete_address()
  CompletionRule completion_rule = CompletionRule::none;

  /// Extent of the extracted chain in the source text.
  std::size_t start = 0;
  std::size_t end = 0;
  /// Further address mentions in the same text, not extracted.
  std::vector<AddressMatch> additional;

  bool has_locality() const { return city || state || zip; }

  /// Extracted components joined with ", " where the source had a comma and
  /// a single space otherwise. No completion suffix.
  std::string assembled() const {
    std::string s = house_number + " " + street;
    for (const auto* part : {&unit, &city, &state, &zip}) {
      if (!*part) continue;
      s += (*part)->comma_before ? ", " : " ";
      s += (*part)->value;
    }
    return s;
  }

  friend bool operator==(const FullAddress&, const FullAddress&) = default;
};

inline constexpr std::array<std::string_view, 52> kStateAbbreviations{
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "FL", "GA", "HI", "ID", "IL",
    "IN", "IA", "KS", "KY", "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT",
    "NE", "NV", "NH", "NJ", "NM", "NY", "NC", "ND", "OH", "OK", "OR", "PA", "RI",
    "SC", "SD", "TN", "TX", "UT", "VT", "VA", "WA", "WV", "WI", "WY", "DC", "PR"};

inline constexpr std::array<std::string_view, 52> kStateNames{
    "alabama", "alaska", "arizona", "arkansas", "california", "colorado", "connecticut",
    "delaware", "florida", "georgia", "hawaii", "idaho", "illinois", "indiana", "iowa",
    "kansas", "kentucky", "louisiana", "maine", "maryland", "massachusetts", "michigan",
    "minnesota", "mississippi", "missouri", "montana", "nebraska", "nevada", "new hampshire",
    "new jersey", "new mexico", "new york", "north carolina", "north dakota", "ohio", "oklahoma",
    "oregon", "pennsylvania", "rhode island", "south carolina", "south dakota", "tennessee",
    "texas", "utah", "vermont", "virginia", "washington", "west virginia", "wisconsin", "wyoming",
    "district of columbia", "puerto rico"};

inline constexpr std::array<std::string_view, 6> kUnitKeywords{"apartment", "apt", "unit",
                                                               "suite", "ste", "#"};

inline bool is_state_abbreviation(std::string_view word) {
  if (word.size() != 2) return false;
  std::string up{text::ascii_upper(word[0]), text::ascii_upper(word[1])};
  for (auto s : kStateAbbreviations)
    if (up == s) return true;
  return false;
}

/// Case-insensitive "texas" substring, or "TX" as a standalone token.
inline bool mentions_texas(std::string_view s) {
  const std::string f = text::fold(s);
  if (f.find("texas") != std::string::npos) return true;
  for (std::size_t pos = f.find("tx"); pos != std::string::npos; pos = f.find("tx", pos + 1))
    if (text::word_boundary_before(f, pos) && text::word_boundary_after(f, pos + 2)) return true;
  return false;
}

namespace detail {

inline bool is_connector_char(char c) { return text::is_space(c) || c == ',' || c == '.'; }

struct Connector {
  std::size_t end = 0;
  bool comma = false;
};

inline std::optional<Connector> parse_connector(std::string_view s, std::size_t pos) {
  Connector c{pos, false};
  while (c.end < s.size() && is_connector_char(s[c.end])) {
    c.comma = c.comma || s[c.end] == ',';
    ++c.end;
  }
  if (c.end == pos) return std::nullopt;
  return c;
}

struct Span {
  std::size_t end = 0;
  std::string value;
};

// [apt|apartment|unit|suite|ste][.] [#]<designator> or #<designator>.
// Designator: up to 6 letters/digits/'-', containing a digit or a single letter.
inline std::optional<Span> parse_unit(std::string_view s, std::size_t pos) {
  const std::string f = text::fold(s.substr(pos, 16));
  std::size_t i = 0;
  std::string keyword;
  if (!f.empty() && f[0] == '#') {
    keyword = "#";
    i = 1;
  } else {
    std::size_t e = letters_end(f, 0);
    std::string_view w(f.data(), e);
    for (auto k : kUnitKeywords)
      if (w == k) keyword = std::string(s.substr(pos, e));
    if (keyword.empty()) return std::nullopt;
    i = e;
    if (i < f.size() && f[i] == '.') ++i;
    i = skip_space(f, i);
    if (i < f.size() && f[i] == '#') ++i;
  }
  std::size_t d = i;
  bool digit = false;
  while (d < f.size() && d - i < 7 && (text::is_ascii_alpha(f[d]) || text::is_digit(f[d]) || f[d] == '-')) {
    digit = digit || text::is_digit(f[d]);
    ++d;
  }
  std::size_t len = d - i;
  if (len == 0 || len > 6 || !(digit || len == 1)) return std::nullopt;
  if (!text::word_boundary_after(s, pos + d)) return std::nullopt;
  return Span{pos + d, text::collapse_ws(s.substr(pos, d))};
}

// City word: [#]<Letter>[letters'-]*, capitalised unless hashtagged.
inline std::optional<Span> parse_city_word(std::string_view s, std::size_t pos, bool allow_tag = true) {
  std::size_t i = pos;
  bool tagged = false;
  if (allow_tag && i < s.size() && s[i] == '#') {
    tagged = true;
    ++i;
  }
  if (i >= s.size() || !text::is_ascii_alpha(s[i])) return std::nullopt;
  if (!tagged && !text::is_upper(s[i])) return std::nullopt;
  std::size_t e = i + 1;
  while (e < s.size() && (text::is_ascii_alpha(s[e]) || s[e] == '\'' || s[e] == '-')) ++e;
  if (!text::word_boundary_after(s, e)) return std::nullopt;
  std::string_view word = s.substr(i, e - i);
  if (word.size() == 2 && text::is_upper(word[0]) && text::is_upper(word[1]) &&
      is_state_abbreviation(word))
    return std::nullopt;
  return Span{e, std::string(word)};
}

// City of `words` words separated by plain whitespace. Only the first word
// may be a hashtag, so "Katy #HoustonFlood" stays a one-word city.
inline std::optional<Span> parse_city(std::string_view s, std::size_t pos, int words) {
  auto first = parse_city_word(s, pos);
  if (!first) return std::nullopt;
  if (words == 1) return first;
  std::size_t next = skip_space(s, first->end);
  if (next == first->end) return std::nullopt;
  auto second = parse_city_word(s, next, false);
  if (!second) return std::nullopt;
  return Span{second->end, first->value + " " + second->value};
}

// Full state name (any case, inner whitespace flexible) or USPS code.
// Lowercase codes need `lenient` (comma before, or zip after).
inline std::optional<Span> parse_state(std::string_view s, std::size_t pos, bool lenient_code) {
  const std::string f = text::fold(s.substr(pos, 32));
  std::optional<Span> best;
  for (auto name : kStateNames) {
    std::size_t i = 0, k = 0;
    while (k < name.size() && i < f.size()) {
      if (name[k] == ' ') {
        std::size_t j = skip_space(f, i);
        if (j == i) break;
        i = j;
        ++k;
      } else if (f[i] == name[k]) {
        ++i;
        ++k;
      } else {
        break;
      }
    }
    if (k == name.size() && text::word_boundary_after(s, pos + i) && (!best || pos + i > best->end))
      best = Span{pos + i, text::collapse_ws(s.substr(pos, i))};
  }
  if (best) return best;
  if (s.size() >= pos + 2 && text::word_boundary_after(s, pos + 2) &&
      text::is_ascii_alpha(s[pos]) && text::is_ascii_alpha(s[pos + 1]) &&
      is_state_abbreviation(s.substr(pos, 2))) {
    bool upper = text::is_upper(s[pos]) && text::is_upper(s[pos + 1]);
    if (upper || lenient_code) return Span{pos + 2, std::string(s.substr(pos, 2))};
  }
  return std::nullopt;
}

inline std::optional<Span> parse_zip(std::string_view s, std::size_t pos) {
  std::size_t i = pos;
  while (i < s.size() && text::is_digit(s[i])) ++i;
  if (i - pos != 5) return std::nullopt;
  if (i + 5 <= s.size() && s[i] == '-') {
    std::size_t j = i + 1;
    while (j < s.size() && text::is_digit(s[j])) ++j;
    if (j - i - 1 == 4 && text::word_boundary_after(s, j)) i = j;
  }
  if (!text::word_boundary_after(s, i)) return std::nullopt;
  return Span{i, std::string(s.substr(pos, i - pos))};
}

struct Tail {
  std::size_t end = 0;
  int components = 0;
  std::optional<AddressPart> city, state, zip;
};

inline bool better(const Tail& a, const Tail& b) {
  if (a.end != b.end) return a.end > b.end;
  if (a.components != b.components) return a.components > b.components;
  // Prefer a recognised state over a longer city.
  return a.state.has_value() && !b.state.has_value();
}

// zip only
inline Tail parse_zip_tail(std::string_view s, std::size_t pos) {
  Tail best{pos, 0, {}, {}, {}};
  if (auto c = parse_connector(s, pos)) {
    if (auto z = parse_zip(s, c->end)) {
      best.end = z->end;
      best.components = 1;
      best.zip = AddressPart{z->value, c->comma};
    }
  }
  return best;
}

// [state] [zip]
inline Tail parse_state_tail(std::string_view s, std::size_t pos) {
  Tail best = parse_zip_tail(s, pos);
  auto c = parse_connector(s, pos);
  if (!c) return best;
  for (bool lenient : {false, true}) {
    auto st = parse_state(s, c->end, lenient || c->comma);
    if (!st) continue;
    Tail after = parse_zip_tail(s, st->end);
    if (lenient && !after.zip) continue;  // lowercase code needs a comma or a zip
    Tail t = after;
    t.state = AddressPart{st->value, c->comma};
    t.components += 1;
    if (t.end < st->end) t.end = st->end;
    if (better(t, best)) best = t;
  }
  return best;
}

// [[#]city] [state] [zip]
inline Tail parse_locality_tail(std::string_view s, std::size_t pos) {
  Tail best = parse_state_tail(s, pos);
  auto c = parse_connector(s, pos);
  if (!c) return best;
  for (int words : {1, 2}) {
    auto city = parse_city(s, c->end, words);
    if (!city) continue;
    Tail after = parse_state_tail(s, city->end);
    if (!c->comma && !after.state && !after.zip) continue;
    Tail t = after;
    t.city = AddressPart{city->value, c->comma};
    t.components += 1;
    if (t.end < city->end) t.end = city->end;
    if (better(t, best)) best = t;
  }
  return best;
}

inline std::string clean_street(std::string_view street) {
  std::string out;
  for (auto w : text::split_ws(street)) {
    if (!out.empty()) out.push_back(' ');
    if (!w.empty() && w.front() == '#') w.remove_prefix(1);
    out.append(w);
  }
  // "Dr." vs "Dr. Water rising": the stop is ambiguous, so never keep it.
  if (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

}  // namespace detail

/// Parses the component chain that starts at the first address mention:
/// number and street, then optionally unit, [#]city, state and zip, with a
/// connector (run of whitespace, ',' or '.') between components.
/// The result is not yet completed; see complete_address().
inline std::optional<FullAddress> extract_full_address(std::string_view text, const Lexicon& lex) {
  auto matches = detect_address(text, lex);
  if (matches.empty()) return std::nullopt;
  const AddressMatch& m = matches.front();

  FullAddress a;
  a.form = m.form;
  a.start = m.start;
  std::string_view mt = m.matched_text;
  std::size_t digits = 0;
  while (digits < mt.size() && text::is_digit(mt[digits])) ++digits;
  a.house_number = std::string(mt.substr(0, digits));
  a.street = detail::clean_street(mt.substr(digits));

  std::size_t pos = m.end;
  if (auto c = detail::parse_connector(text, pos)) {
    if (auto u = detail::parse_unit(text, c->end)) {
      a.unit = AddressPart{u->value, c->comma};
      pos = u->end;
    }
  }
  detail::Tail tail = detail::parse_locality_tail(text, pos);
  if (tail.components > 0) {
    a.city = tail.city;
    a.state = tail.state;
    a.zip = tail.zip;
    pos = tail.end;
  }
  if (a.city && !a.city->value.empty() && a.city->value.front() == '#')
    a.city->value.erase(0, 1);
  a.end = pos;
  a.additional.assign(matches.begin() + 1, matches.end());
  return a;
}

inline std::optional<FullAddress> extract_full_address(std::string_view text) {
  return extract_full_address(text, Lexicon::default_instance());
}

/// Fills `completed` and `completion_rule`:
///  - no city, state or zip: append ", Houston, TX" if any hashtag contains
///    "houston", otherwise ", Texas";
///  - some locality extracted: leave as is if it already mentions Texas/TX,
///    otherwise append ", Texas".
/// Recomputed from the components, so applying it twice is a no-op.
inline FullAddress complete_address(FullAddress addr, const std::vector<std::string>& hashtags) {
  std::string base = addr.assembled();
  if (!addr.has_locality()) {
    bool houston = false;
    for (const auto& tag : hashtags)
      houston = houston || text::fold(tag).find("houston") != std::string::npos;
    addr.completion_rule = houston ? CompletionRule::houston_hashtag : CompletionRule::texas_default;
    addr.completed = base + (houston ? ", Houston, TX" : ", Texas");
  } else if (mentions_texas(base)) {
    addr.completion_rule = CompletionRule::none;
    addr.completed = base;
  } else {
    addr.completion_rule = CompletionRule::texas_appended;
    addr.completed = base + ", Texas";
  }
  return addr;
}

}  // namespace rescue
