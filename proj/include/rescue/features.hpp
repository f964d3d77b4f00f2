#pragma once

#include <string>
#include <string_view>

#include "rescue/address.hpp"
#include "rescue/lexicon.hpp"
#include "rescue/text.hpp"

namespace rescue {

struct FeatureVector {
  bool has_address = false;
  bool has_ask_help = false;
  bool has_disaster_context = false;
  bool has_status_update = false;
  bool has_offer_help = false;
  bool has_news_report = false;
  bool has_political = false;
  bool has_ads = false;

  /// Bit i holds field i in declaration order (has_address = bit 0).
  static FeatureVector from_bits(unsigned bits) {
    FeatureVector v;
    v.has_address = bits & 1u;
    v.has_ask_help = bits & 2u;
    v.has_disaster_context = bits & 4u;
    v.has_status_update = bits & 8u;
    v.has_offer_help = bits & 16u;
    v.has_news_report = bits & 32u;
    v.has_political = bits & 64u;
    v.has_ads = bits & 128u;
    return v;
  }

  unsigned to_bits() const {
    return unsigned(has_address) | unsigned(has_ask_help) << 1 |
           unsigned(has_disaster_context) << 2 | unsigned(has_status_update) << 3 |
           unsigned(has_offer_help) << 4 | unsigned(has_news_report) << 5 |
           unsigned(has_political) << 6 | unsigned(has_ads) << 7;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct NegativeFeatures {
  bool has_status_update = false;
  bool has_offer_help = false;
  bool has_news_report = false;
  bool has_political = false;
  bool has_ads = false;

  friend bool operator==(const NegativeFeatures&, const NegativeFeatures&) = default;
};

enum class Verdict { NotRescueRequest, RescueRequest };

inline constexpr std::string_view to_string(Verdict v) {
  return v == Verdict::RescueRequest ? "RescueRequest" : "NotRescueRequest";
}

// The detectors below come in two flavours: taking raw text, or taking text
// already passed through text::fold() (suffix `_folded`) so extract_features
// folds once per tweet.

inline bool detect_ask_help_folded(std::string_view folded, const Lexicon& lex) {
  return text::any_found(lex.help(), folded);
}

inline bool detect_ask_help(std::string_view text, const Lexicon& lex) {
  return detect_ask_help_folded(text::fold(text), lex);
}

/// Disaster name, OR both members of a region/disaster pair, OR a
/// whole-word situation word.
inline bool detect_disaster_context_folded(std::string_view folded, const Lexicon& lex) {
  if (text::any_found(lex.disaster_names(), folded)) return true;
  for (const auto& [region, word] : lex.pairs())
    if (region.found_in(folded) && word.found_in(folded)) return true;
  return text::any_found(lex.situation(), folded);
}

inline bool detect_disaster_context(std::string_view text, const Lexicon& lex) {
  return detect_disaster_context_folded(text::fold(text), lex);
}

inline NegativeFeatures detect_negative_features_folded(std::string_view folded,
                                                        const Lexicon& lex) {
  auto hit = [&](NegativeFeature f) { return text::any_found(lex.negative(f), folded); };
  return NegativeFeatures{hit(NegativeFeature::status_update), hit(NegativeFeature::offer_help),
                          hit(NegativeFeature::news_report), hit(NegativeFeature::political),
                          hit(NegativeFeature::ads)};
}

inline NegativeFeatures detect_negative_features(std::string_view text, const Lexicon& lex) {
  return detect_negative_features_folded(text::fold(text), lex);
}

inline FeatureVector extract_features(std::string_view text, const Lexicon& lex) {
  const std::string folded = text::fold(text);
  FeatureVector v;
  v.has_address = !detect_address(text, lex).empty();
  v.has_ask_help = detect_ask_help_folded(folded, lex);
  v.has_disaster_context = detect_disaster_context_folded(folded, lex);
  auto neg = detect_negative_features_folded(folded, lex);
  v.has_status_update = neg.has_status_update;
  v.has_offer_help = neg.has_offer_help;
  v.has_news_report = neg.has_news_report;
  v.has_political = neg.has_political;
  v.has_ads = neg.has_ads;
  return v;
}

inline FeatureVector extract_features(std::string_view text) {
  return extract_features(text, Lexicon::default_instance());
}

/// address AND (ask-help OR disaster-context) AND NOT any negative feature.
inline Verdict classify(const FeatureVector& fv) {
  const bool negative = fv.has_status_update || fv.has_offer_help || fv.has_news_report ||
                        fv.has_political || fv.has_ads;
  return fv.has_address && (fv.has_ask_help || fv.has_disaster_context) && !negative
             ? Verdict::RescueRequest
             : Verdict::NotRescueRequest;
}

}  // namespace rescue
