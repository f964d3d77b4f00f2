#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rescue/lexicon.hpp"
#include "rescue/text.hpp"

namespace rescue {

enum class AddressForm {
  name_suffix,        // <number> <1-3 name words> <suffix>   "4055 South Braeswood Blvd"
  suffix_designator,  // <number> <designator> <digits|letter> "1108 Highway 7", "123 Ave. G"
};

inline constexpr std::string_view to_string(AddressForm f) {
  return f == AddressForm::name_suffix ? "name_suffix" : "suffix_designator";
}

struct AddressMatch {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  std::string matched_text;
  AddressForm form = AddressForm::name_suffix;

  friend bool operator==(const AddressMatch&, const AddressMatch&) = default;
};

inline constexpr std::size_t kMaxHouseNumberDigits = 6;
inline constexpr std::size_t kMaxStreetNameWords = 3;

/// Designators of the "<number> <designator> <number|letter>" form.
inline constexpr std::array<std::string_view, 22> kStreetDesignators{
    "avenue", "av",    "ave",  "aven",   "avenu", "avn", "avnue", "highway",
    "hwy",    "hiway", "hiwy", "hway",   "road",  "rd",  "roads", "rds",
    "route",  "rte",   "street", "st",   "strt",  "str"};
inline constexpr std::array<std::string_view, 2> kStreetDesignatorsPlural{"streets", "sts"};

inline bool is_street_designator(std::string_view folded_word) {
  for (auto d : kStreetDesignators)
    if (folded_word == d) return true;
  for (auto d : kStreetDesignatorsPlural)
    if (folded_word == d) return true;
  return false;
}

namespace detail {

// One street-name word: optional '#', letter groups joined by '-' or '.',
// optional trailing '.'. `w` is a whitespace-free token of folded text.
inline bool is_street_name_word(std::string_view w) {
  std::size_t i = 0;
  if (i < w.size() && w[i] == '#') ++i;
  bool need_letter = true;
  for (; i < w.size(); ++i) {
    char c = w[i];
    if (text::is_ascii_alpha(c)) {
      need_letter = false;
    } else if ((c == '-' || c == '.') && !need_letter) {
      if (c == '.' && i + 1 == w.size()) return true;
      need_letter = true;
    } else {
      return false;
    }
  }
  return !need_letter;
}

inline std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && text::is_space(s[i])) ++i;
  return i;
}

inline std::size_t token_end(std::string_view s, std::size_t i) {
  while (i < s.size() && !text::is_space(s[i])) ++i;
  return i;
}

inline std::size_t letters_end(std::string_view s, std::size_t i) {
  while (i < s.size() && text::is_ascii_alpha(s[i])) ++i;
  return i;
}

// Suffix at `pos`: a lexicon suffix on a word boundary, optional '.'.
// Returns the end offset or npos.
inline std::size_t match_suffix(std::string_view f, std::size_t pos, const SuffixSet& suffixes) {
  std::size_t e = letters_end(f, pos);
  if (e == pos || !text::word_boundary_after(f, e)) return std::string_view::npos;
  if (!suffixes.contains(f.substr(pos, e - pos))) return std::string_view::npos;
  if (e < f.size() && f[e] == '.') ++e;
  return e;
}

// Name-suffix form starting at `after_number` (first whitespace after the digits).
inline std::size_t match_name_suffix(std::string_view f, std::size_t after_number,
                                     const SuffixSet& suffixes) {
  std::size_t best = std::string_view::npos;
  std::size_t pos = skip_space(f, after_number);
  if (pos == after_number) return best;
  for (std::size_t words = 1; words <= kMaxStreetNameWords; ++words) {
    std::size_t te = token_end(f, pos);
    if (te == pos || !is_street_name_word(f.substr(pos, te - pos))) break;
    std::size_t next = skip_space(f, te);
    if (next == te || next >= f.size()) break;
    if (auto e = match_suffix(f, next, suffixes); e != std::string_view::npos) best = e;
    pos = next;
  }
  return best;
}

// Designator form starting at `after_number`.
inline std::size_t match_designator(std::string_view f, std::size_t after_number) {
  std::size_t pos = skip_space(f, after_number);
  if (pos == after_number) return std::string_view::npos;
  std::size_t e = letters_end(f, pos);
  if (e == pos || !is_street_designator(f.substr(pos, e - pos))) return std::string_view::npos;
  if (e < f.size() && f[e] == '.') ++e;
  e = skip_space(f, e);
  if (e >= f.size()) return std::string_view::npos;
  std::size_t d = e;
  while (d < f.size() && text::is_digit(f[d])) ++d;
  if (d == e) {
    if (!text::is_ascii_alpha(f[e])) return std::string_view::npos;
    d = e + 1;
  }
  return text::word_boundary_after(f, d) ? d : std::string_view::npos;
}

}  // namespace detail

/// All non-overlapping address mentions, left to right. At each start the
/// name-suffix form is tried before the designator form, and the longest
/// name-suffix candidate wins.
inline std::vector<AddressMatch> detect_address(std::string_view text, const SuffixSet& suffixes) {
  std::vector<AddressMatch> out;
  const std::string folded = text::fold(text);
  const std::string_view f = folded;
  std::size_t i = 0;
  while (i < f.size()) {
    if (!text::is_digit(f[i]) || !text::word_boundary_before(f, i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < f.size() && text::is_digit(f[j])) ++j;
    if (j - i > kMaxHouseNumberDigits || j >= f.size() || !text::is_space(f[j])) {
      i = j;
      continue;
    }
    AddressForm form = AddressForm::name_suffix;
    std::size_t end = detail::match_name_suffix(f, j, suffixes);
    if (end == std::string_view::npos) {
      form = AddressForm::suffix_designator;
      end = detail::match_designator(f, j);
    }
    if (end == std::string_view::npos) {
      i = j;
      continue;
    }
    out.push_back(AddressMatch{i, end, std::string(text.substr(i, end - i)), form});
    i = end;
  }
  return out;
}

inline std::vector<AddressMatch> detect_address(std::string_view text, const Lexicon& lex) {
  return detect_address(text, lex.suffixes());
}

inline std::vector<AddressMatch> detect_address(std::string_view text) {
  return detect_address(text, Lexicon::default_instance());
}

}  // namespace rescue
