#include <gtest/gtest.h>

#include "rescue/features.hpp"
#include "rescue/text.hpp"

using namespace rescue;

namespace {

const Lexicon& lex() { return Lexicon::default_instance(); }

// Independent encoding of the formula over raw bits:
// bit0 address, bit1 help, bit2 context, bits 3..7 negatives.
bool oracle(unsigned b) { return (b & 1u) && (b & 6u) && !(b & 0xF8u); }

FeatureVector fv(bool a, bool h, bool c, bool s, bool o, bool n, bool p, bool ad) {
  return {a, h, c, s, o, n, p, ad};
}

}  // namespace

TEST(AskHelp, Examples) {
  EXPECT_TRUE(detect_ask_help("Please help, water rising", lex()));
  EXPECT_FALSE(detect_ask_help("", lex()));
  EXPECT_TRUE(detect_ask_help("#FloodRescue 2 adults", lex()));
  EXPECT_TRUE(detect_ask_help("PLEASE   HELP", lex()));
  EXPECT_FALSE(detect_ask_help("helpful neighbours", lex()));
}

TEST(DisasterContext, Examples) {
  EXPECT_TRUE(detect_disaster_context("#HoustonFlood at my street", lex()));
  // "Houston" is only the region half of several pairs
  EXPECT_FALSE(detect_disaster_context("Houston is fine today", lex()));
  EXPECT_TRUE(detect_disaster_context("we are trapped in the attic", lex()));
}

TEST(DisasterContext, PairsNeedBothMembers) {
  for (const auto& [region, word] : lex().config().region_disaster_pairs) {
    EXPECT_FALSE(detect_disaster_context(region + " is calm", lex())) << region;
    EXPECT_TRUE(detect_disaster_context(region + " " + word + " update", lex())) << region;
  }
  EXPECT_FALSE(detect_disaster_context("Flood warnings everywhere", lex()));
}

TEST(DisasterContext, SituationWordsAreWholeWords) {
  EXPECT_TRUE(detect_disaster_context("on the roof", lex()));
  EXPECT_FALSE(detect_disaster_context("proofreading", lex()));
  EXPECT_FALSE(detect_disaster_context("finally unstuck", lex()));
}

TEST(NegativeFeatures, Examples) {
  auto offer = detect_negative_features("We are offering shelter and food at 2100 Main St", lex());
  EXPECT_TRUE(offer.has_offer_help);
  EXPECT_EQ(detect_negative_features("", lex()), NegativeFeatures{});
  EXPECT_TRUE(detect_negative_features("Rescued! Everyone safe now at 12 Oak St", lex()).has_status_update);
  EXPECT_TRUE(detect_negative_features("According to officials, shelter opened", lex()).has_news_report);
  EXPECT_TRUE(detect_negative_features("Limited time offer on pumps", lex()).has_ads);
  EXPECT_TRUE(detect_negative_features("Congress must act", lex()).has_political);
}

TEST(NegativeFeatures, RescueRequestPhraseIsNotStatus) {
  EXPECT_FALSE(detect_negative_features("we need to be rescued", lex()).has_status_update);
}

TEST(ExtractFeatures, Examples) {
  auto a = extract_features("Please help! 4055 South #Braeswood Boulevard #HoustonFlood", lex());
  EXPECT_EQ(a, fv(true, true, true, false, false, false, false, false));
  EXPECT_EQ(extract_features("", lex()), FeatureVector{});
  auto n = extract_features("Breaking news: flooding in Houston", lex());
  EXPECT_TRUE(n.has_news_report);
  EXPECT_FALSE(n.has_address);
}

TEST(ExtractFeatures, UppercaseInvariant) {
  for (std::string t : {"Please help! 4055 South #Braeswood Boulevard #HoustonFlood",
                        "We are offering shelter and food at 2100 Main St",
                        "necesitamos ayuda en el ático 12 Oak St", "need rescue 123 Ave. G"})
    EXPECT_EQ(extract_features(t, lex()), extract_features(text::upper(t), lex())) << t;
}

TEST(ExtractFeatures, Deterministic) {
  std::string t = "Trapped in attic at 1108 Highway 7 #Harvey please help";
  auto first = extract_features(t, lex());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(extract_features(t, lex()), first);
}

TEST(ExtractFeatures, SpanishOverlayOptIn) {
  auto cfg = LexiconConfig::defaults();
  EXPECT_FALSE(extract_features("necesitamos ayuda 12 Oak St", lex()).has_ask_help);
  cfg.spanish_enabled = true;
  Lexicon es(cfg);
  auto v = extract_features("Necesitamos ayuda, estamos atrapados en 12 Oak St", es);
  EXPECT_TRUE(v.has_ask_help);
  EXPECT_TRUE(v.has_disaster_context);
  EXPECT_EQ(classify(v), Verdict::RescueRequest);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(fv(true, true, false, false, false, false, false, false)), Verdict::RescueRequest);
  EXPECT_EQ(classify(fv(false, true, true, false, false, false, false, false)), Verdict::NotRescueRequest);
  EXPECT_EQ(classify(fv(true, false, true, false, false, true, false, false)), Verdict::NotRescueRequest);
}

TEST(Classify, TruthTable) {
  for (unsigned b = 0; b < 256; ++b) {
    FeatureVector v = FeatureVector::from_bits(b);
    EXPECT_EQ(v.to_bits(), b);
    EXPECT_EQ(classify(v) == Verdict::RescueRequest, oracle(b)) << "bits " << b;
  }
}

TEST(Classify, NegativesAreMonotone) {
  // Turning on any negative feature never turns a non-request into a request.
  for (unsigned b = 0; b < 256; ++b)
    for (unsigned k = 3; k < 8; ++k) {
      bool before = classify(FeatureVector::from_bits(b)) == Verdict::RescueRequest;
      bool after = classify(FeatureVector::from_bits(b | (1u << k))) == Verdict::RescueRequest;
      EXPECT_LE(after, before);
    }
}

TEST(Classify, NoAddressNeverRequest) {
  for (unsigned b = 0; b < 256; b += 2) EXPECT_EQ(classify(FeatureVector::from_bits(b)), Verdict::NotRescueRequest);
}

TEST(Classify, SchoolWithoutHouseNumber) {
  auto v = extract_features(
      "@KPRC2 there are stranded families at Creech Elementary on Mason Rd. You have boats nearby. "
      "Please send them!",
      lex());
  EXPECT_FALSE(v.has_address);
  EXPECT_TRUE(v.has_disaster_context);
  EXPECT_EQ(classify(v), Verdict::NotRescueRequest);
}
