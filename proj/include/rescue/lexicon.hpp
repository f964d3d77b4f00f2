#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rescue/default_lexicons.hpp"
#include "rescue/error.hpp"
#include "rescue/text.hpp"

namespace rescue {

enum class NegativeFeature { status_update, offer_help, news_report, political, ads };

inline constexpr std::array<NegativeFeature, 5> kNegativeFeatures{
    NegativeFeature::status_update, NegativeFeature::offer_help, NegativeFeature::news_report,
    NegativeFeature::political, NegativeFeature::ads};

inline constexpr std::string_view to_string(NegativeFeature f) {
  switch (f) {
    case NegativeFeature::status_update: return "status_update";
    case NegativeFeature::offer_help: return "offer_help";
    case NegativeFeature::news_report: return "news_report";
    case NegativeFeature::political: return "political";
    case NegativeFeature::ads: return "ads";
  }
  return "";
}

/// Lexicon file syntax: one entry per line. A line that is just "#", or
/// starts with "#" followed by whitespace, is a comment; "#Harvey" is an
/// entry. Blank lines are skipped.
inline std::vector<std::string> parse_lexicon(std::string_view content) {
  std::vector<std::string> entries;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    auto e = text::trim(line);
    if (e.empty()) continue;
    if (e.front() == '#' && (e.size() == 1 || text::is_space(e[1]))) continue;
    entries.emplace_back(e);
  }
  return entries;
}

/// Tab-separated (region, disaster word) rows, same comment rules.
inline std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view content,
                                                                    std::string_view source) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t row = 0;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    auto e = text::trim(line);
    if (e.empty() || (e.front() == '#' && (e.size() == 1 || text::is_space(e[1])))) continue;
    auto tab = e.find('\t');
    if (tab == std::string_view::npos)
      throw LoadError(std::string(source) + ":" + std::to_string(row) + ": expected region<TAB>word");
    auto region = text::trim(e.substr(0, tab));
    auto word = text::trim(e.substr(tab + 1));
    if (region.empty() || word.empty())
      throw LoadError(std::string(source) + ":" + std::to_string(row) + ": empty pair member");
    pairs.emplace_back(std::string(region), std::string(word));
  }
  return pairs;
}

struct LexiconConfig {
  std::vector<std::string> street_suffixes;
  std::vector<std::string> help_keywords;
  std::vector<std::string> disaster_names;
  std::vector<std::pair<std::string, std::string>> region_disaster_pairs;
  std::vector<std::string> situation_words;
  std::array<std::vector<std::string>, kNegativeFeatures.size()> negative_lexicons;
  std::vector<std::string> spanish_help;
  std::vector<std::string> spanish_situation;
  bool spanish_enabled = false;

  std::vector<std::string>& negative(NegativeFeature f) {
    return negative_lexicons[static_cast<std::size_t>(f)];
  }
  const std::vector<std::string>& negative(NegativeFeature f) const {
    return negative_lexicons[static_cast<std::size_t>(f)];
  }

  /// The lexicons shipped in data/lexicons, compiled in at build time.
  static LexiconConfig defaults() {
    using namespace default_lexicons;
    LexiconConfig c;
    c.street_suffixes = parse_lexicon(kStreetSuffixes);
    c.help_keywords = parse_lexicon(kHelp);
    c.disaster_names = parse_lexicon(kDisasterNames);
    c.region_disaster_pairs = parse_pairs(kRegionDisasterPairs, "region_disaster_pairs.tsv");
    c.situation_words = parse_lexicon(kSituation);
    c.negative(NegativeFeature::status_update) = parse_lexicon(kStatusUpdate);
    c.negative(NegativeFeature::offer_help) = parse_lexicon(kOfferHelp);
    c.negative(NegativeFeature::news_report) = parse_lexicon(kNewsReport);
    c.negative(NegativeFeature::political) = parse_lexicon(kPolitical);
    c.negative(NegativeFeature::ads) = parse_lexicon(kAds);
    c.spanish_help = parse_lexicon(kSpanishHelp);
    c.spanish_situation = parse_lexicon(kSpanishSituation);
    return c;
  }

  /// Starts from defaults() and replaces every list whose file exists in
  /// `dir` (same file names as data/lexicons).
  static LexiconConfig load(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw LoadError("lexicon directory not found: " + dir.string());
    LexiconConfig c = defaults();
    auto read = [&](std::string_view name, std::vector<std::string>& into) {
      auto p = dir / name;
      if (fs::exists(p)) into = parse_lexicon(slurp(p));
    };
    read("street_suffixes.txt", c.street_suffixes);
    read("help.txt", c.help_keywords);
    read("disaster_names.txt", c.disaster_names);
    read("situation.txt", c.situation_words);
    read("status_update.txt", c.negative(NegativeFeature::status_update));
    read("offer_help.txt", c.negative(NegativeFeature::offer_help));
    read("news_report.txt", c.negative(NegativeFeature::news_report));
    read("political.txt", c.negative(NegativeFeature::political));
    read("ads.txt", c.negative(NegativeFeature::ads));
    read("spanish_help.txt", c.spanish_help);
    read("spanish_situation.txt", c.spanish_situation);
    if (auto p = dir / "region_disaster_pairs.tsv"; fs::exists(p))
      c.region_disaster_pairs = parse_pairs(slurp(p), p.string());
    return c;
  }

 private:
  static std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw LoadError("cannot read lexicon file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

/// Case-folded street suffixes for O(1) membership tests.
class SuffixSet {
 public:
  SuffixSet() = default;
  explicit SuffixSet(const std::vector<std::string>& suffixes) {
    for (const auto& s : suffixes) {
      auto f = text::fold(text::trim(s));
      if (!f.empty() && f.back() == '.') f.pop_back();
      if (!f.empty()) set_.insert(std::move(f));
    }
  }
  /// `folded_word` must be case-folded and without trailing '.'.
  bool contains(std::string_view folded_word) const {
    return set_.find(std::string(folded_word)) != set_.end();
  }
  std::size_t size() const { return set_.size(); }

 private:
  std::unordered_set<std::string> set_;
};

/// A LexiconConfig compiled once for matching; immutable and shareable
/// across threads.
class Lexicon {
 public:
  Lexicon() : Lexicon(LexiconConfig::defaults()) {}

  explicit Lexicon(const LexiconConfig& cfg) : config_(cfg), suffixes_(cfg.street_suffixes) {
    auto phrases = [](const std::vector<std::string>& src, bool whole_word = false) {
      std::vector<text::Phrase> out;
      for (const auto& s : src) {
        text::Phrase p(s, whole_word);
        if (!p.empty()) out.push_back(std::move(p));
      }
      return out;
    };
    help_ = phrases(cfg.help_keywords);
    disaster_names_ = phrases(cfg.disaster_names);
    situation_ = phrases(cfg.situation_words, true);
    if (cfg.spanish_enabled) {
      auto es_help = phrases(cfg.spanish_help);
      help_.insert(help_.end(), es_help.begin(), es_help.end());
      auto es_sit = phrases(cfg.spanish_situation, true);
      situation_.insert(situation_.end(), es_sit.begin(), es_sit.end());
    }
    for (const auto& [region, word] : cfg.region_disaster_pairs)
      pairs_.emplace_back(text::Phrase(region), text::Phrase(word));
    for (auto f : kNegativeFeatures)
      negatives_[static_cast<std::size_t>(f)] = phrases(cfg.negative(f));
  }

  static const Lexicon& default_instance() {
    static const Lexicon instance;
    return instance;
  }

  const LexiconConfig& config() const { return config_; }
  const SuffixSet& suffixes() const { return suffixes_; }
  const std::vector<text::Phrase>& help() const { return help_; }
  const std::vector<text::Phrase>& disaster_names() const { return disaster_names_; }
  const std::vector<std::pair<text::Phrase, text::Phrase>>& pairs() const { return pairs_; }
  const std::vector<text::Phrase>& situation() const { return situation_; }
  const std::vector<text::Phrase>& negative(NegativeFeature f) const {
    return negatives_[static_cast<std::size_t>(f)];
  }

 private:
  LexiconConfig config_;
  SuffixSet suffixes_;
  std::vector<text::Phrase> help_;
  std::vector<text::Phrase> disaster_names_;
  std::vector<std::pair<text::Phrase, text::Phrase>> pairs_;
  std::vector<text::Phrase> situation_;
  std::array<std::vector<text::Phrase>, kNegativeFeatures.size()> negatives_;
};

}  // namespace rescue
