#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rescue::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

inline bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

// Word characters follow the regex \w convention, widened so that any
// non-ASCII byte counts as part of a word (UTF-8 letters never split words).
inline bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return is_ascii_alpha(c) || is_digit(c) || c == '_' || u >= 0x80;
}

inline char ascii_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

inline char ascii_upper(char c) {
  return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
}

/// Case-folds ASCII and the Latin-1 supplement (U+00C0..U+00DE) in UTF-8.
/// The result always has the same byte length as the input, so offsets
/// computed on the folded string index the original.
inline std::string fold(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto u = static_cast<unsigned char>(out[i]);
    if (u < 0x80) {
      out[i] = ascii_lower(out[i]);
    } else if (u == 0xC3 && i + 1 < out.size()) {
      auto v = static_cast<unsigned char>(out[i + 1]);
      if (v >= 0x80 && v <= 0x9E && v != 0x97) out[i + 1] = static_cast<char>(v + 0x20);
      ++i;
    }
  }
  return out;
}

/// Inverse of fold() over the same ranges; used by tests and uppercase checks.
inline std::string upper(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto u = static_cast<unsigned char>(out[i]);
    if (u < 0x80) {
      out[i] = ascii_upper(out[i]);
    } else if (u == 0xC3 && i + 1 < out.size()) {
      auto v = static_cast<unsigned char>(out[i + 1]);
      if (v >= 0xA0 && v <= 0xBE && v != 0xB7) out[i + 1] = static_cast<char>(v - 0x20);
      ++i;
    }
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) words.push_back(s.substr(start, i - start));
  }
  return words;
}

/// Collapses every whitespace run to one space and trims the ends.
inline std::string collapse_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (auto w : split_ws(s)) {
    if (!out.empty()) out.push_back(' ');
    out.append(w);
  }
  return out;
}

inline bool contains_folded(std::string_view folded_haystack, std::string_view needle) {
  return folded_haystack.find(fold(needle)) != std::string_view::npos;
}

inline bool word_boundary_before(std::string_view s, std::size_t pos) {
  return pos == 0 || !is_word_char(s[pos - 1]);
}

inline bool word_boundary_after(std::string_view s, std::size_t end) {
  return end >= s.size() || !is_word_char(s[end]);
}

/// A lexicon phrase compiled for matching against case-folded text.
///
/// Words of a multiword phrase may be separated by any run of whitespace,
/// including none, so "please help" matches "Please  help" and "#PleaseHelp".
/// With `whole_word` set, the match must also sit on word boundaries.
class Phrase {
 public:
  Phrase() = default;
  explicit Phrase(std::string_view phrase, bool whole_word = false) : whole_word_(whole_word) {
    const std::string folded = fold(phrase);
    for (auto w : split_ws(folded)) words_.emplace_back(w);
  }

  bool empty() const { return words_.empty(); }
  bool whole_word() const { return whole_word_; }
  const std::vector<std::string>& words() const { return words_; }

  /// `folded` must already be the output of fold().
  bool found_in(std::string_view folded) const {
    if (words_.empty()) return false;
    const std::string& first = words_.front();
    for (std::size_t pos = folded.find(first); pos != std::string_view::npos;
         pos = folded.find(first, pos + 1)) {
      if (whole_word_ && !word_boundary_before(folded, pos)) continue;
      std::size_t end = match_rest(folded, pos + first.size());
      if (end == std::string_view::npos) continue;
      if (whole_word_ && !word_boundary_after(folded, end)) continue;
      return true;
    }
    return false;
  }

 private:
  std::size_t match_rest(std::string_view s, std::size_t pos) const {
    for (std::size_t k = 1; k < words_.size(); ++k) {
      while (pos < s.size() && is_space(s[pos])) ++pos;
      if (s.compare(pos, words_[k].size(), words_[k]) != 0) return std::string_view::npos;
      pos += words_[k].size();
    }
    return pos;
  }

  std::vector<std::string> words_;
  bool whole_word_ = false;
};

inline bool any_found(const std::vector<Phrase>& phrases, std::string_view folded) {
  return std::any_of(phrases.begin(), phrases.end(),
                     [&](const Phrase& p) { return p.found_in(folded); });
}

}  // namespace rescue::text
