#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "rescue/error.hpp"
#include "rescue/features.hpp"
#include "rescue/tweet.hpp"

namespace rescue {

struct LabelledTweet {
  Tweet tweet;
  bool label = false;  // true: rescue request
};

// ---------------------------------------------------------------------------
// CSV (RFC 4180: quoted fields may hold commas, quotes as "", and newlines)

class CsvReader {
 public:
  explicit CsvReader(std::istream& in, char delimiter = ',') : in_(in), delim_(delimiter) {}

  /// Reads the next record; false at end of input. `line()` is the line
  /// number on which the record started.
  bool next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    if (c == EOF) return false;
    record_line_ = ++line_;
    std::string field;
    bool quoted = false, was_quoted = false;
    for (;; c = in_.get()) {
      if (quoted) {
        if (c == EOF) throw LoadError("line " + std::to_string(record_line_) + ": unterminated quoted field");
        if (c == '"') {
          if (in_.peek() == '"') {
            field.push_back('"');
            in_.get();
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(static_cast<char>(c));
        }
        continue;
      }
      if (c == EOF || c == '\n') {
        if (!field.empty() && field.back() == '\r' && !was_quoted) field.pop_back();
        fields.push_back(std::move(field));
        return true;
      }
      if (c == '\r' && in_.peek() == '\n') continue;
      if (c == delim_) {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (c == '"' && field.empty() && !was_quoted) {
        quoted = was_quoted = true;
      } else {
        field.push_back(static_cast<char>(c));
      }
    }
  }

  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  char delim_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

/// Delimited file with header: id, text, label (0/1), optional hashtags
/// (separated by spaces, ';' or ','; '#' optional). Tab-delimited when the
/// file name ends in .tsv, comma otherwise.
inline std::vector<LabelledTweet> load_labelled(std::istream& in, std::string_view source = "<input>",
                                                char delimiter = ',') {
  CsvReader csv(in, delimiter);
  std::vector<std::string> row;
  if (!csv.next(row)) throw LoadError(std::string(source) + ": empty file, expected header");
  int id_col = -1, text_col = -1, label_col = -1, tags_col = -1;
  for (int i = 0; i < static_cast<int>(row.size()); ++i) {
    auto name = text::fold(text::trim(row[i]));
    if (name == "id") id_col = i;
    else if (name == "text") text_col = i;
    else if (name == "label") label_col = i;
    else if (name == "hashtags") tags_col = i;
  }
  if (id_col < 0 || text_col < 0 || label_col < 0)
    throw LoadError(std::string(source) + ": header must name id, text and label columns");

  std::vector<LabelledTweet> out;
  std::unordered_set<std::string> ids;
  const auto width = static_cast<std::size_t>(std::max({id_col, text_col, label_col, tags_col}) + 1);
  while (csv.next(row)) {
    auto where = [&] { return std::string(source) + ": row at line " + std::to_string(csv.line()); };
    if (row.size() == 1 && text::trim(row[0]).empty()) continue;
    if (row.size() < width) throw LoadError(where() + ": expected " + std::to_string(width) + " columns");
    LabelledTweet lt;
    lt.tweet.id = std::string(text::trim(row[id_col]));
    if (lt.tweet.id.empty()) throw LoadError(where() + ": empty id");
    if (!ids.insert(lt.tweet.id).second) throw LoadError(where() + ": duplicate id " + lt.tweet.id);
    lt.tweet.text = row[text_col];
    auto label = text::trim(row[label_col]);
    if (label == "1")
      lt.label = true;
    else if (label == "0")
      lt.label = false;
    else
      throw LoadError(where() + ": label must be 0 or 1, got '" + std::string(label) + "'");
    lt.tweet.hashtags = extract_hashtags(lt.tweet.text);
    if (tags_col >= 0) {
      std::string tags = row[tags_col];
      std::replace_if(tags.begin(), tags.end(), [](char c) { return c == ';' || c == ','; }, ' ');
      for (auto t : text::split_ws(tags)) {
        if (!t.empty() && t.front() == '#') t.remove_prefix(1);
        auto tag = text::fold(t);
        if (!tag.empty() && std::find(lt.tweet.hashtags.begin(), lt.tweet.hashtags.end(), tag) ==
                                lt.tweet.hashtags.end())
          lt.tweet.hashtags.push_back(tag);
      }
    }
    out.push_back(std::move(lt));
  }
  return out;
}

inline std::vector<LabelledTweet> load_labelled(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open labelled corpus: " + path.string());
  return load_labelled(in, path.string(), path.extension() == ".tsv" ? '\t' : ',');
}

// ---------------------------------------------------------------------------

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }

  void add(bool predicted, bool actual) {
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// A ratio whose denominator may be zero; then value is 0 and degenerate set.
struct Ratio {
  double value = 0.0;
  bool degenerate = false;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct Metrics {
  Ratio sensitivity;
  Ratio specificity;
  Ratio precision;
  Ratio mcc;
  Ratio f1;
};

namespace detail {
inline Ratio ratio(double num, double den) {
  if (den == 0.0) return {0.0, true};
  return {num / den, false};
}
}  // namespace detail

inline Metrics metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw std::invalid_argument("metrics of an empty confusion matrix");
  const double tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp),
               fn = static_cast<double>(cm.fn), tn = static_cast<double>(cm.tn);
  Metrics m;
  m.sensitivity = detail::ratio(tp, tp + fn);
  m.specificity = detail::ratio(tn, tn + fp);
  m.precision = detail::ratio(tp, tp + fp);
  m.f1 = detail::ratio(2 * tp, 2 * tp + fp + fn);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  m.mcc = den == 0.0 ? Ratio{0.0, true} : Ratio{(tp * tn - fp * fn) / std::sqrt(den), false};
  return m;
}

/// Classifies every record and tallies against its label. With workers > 1
/// the corpus is split into contiguous chunks and the partial matrices summed.
inline ConfusionMatrix evaluate(const std::vector<LabelledTweet>& corpus, const Lexicon& lex,
                                unsigned workers = 1) {
  auto tally = [&](std::size_t from, std::size_t to) {
    ConfusionMatrix cm;
    for (std::size_t i = from; i < to; ++i) {
      bool predicted = classify(extract_features(corpus[i].tweet.text, lex)) == Verdict::RescueRequest;
      cm.add(predicted, corpus[i].label);
    }
    return cm;
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(corpus.size() / 64 + 1)));
  if (workers == 1) return tally(0, corpus.size());
  std::vector<ConfusionMatrix> parts(workers);
  std::vector<std::thread> threads;
  const std::size_t chunk = (corpus.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t from = std::min(corpus.size(), w * chunk);
    std::size_t to = std::min(corpus.size(), from + chunk);
    threads.emplace_back([&, w, from, to] { parts[w] = tally(from, to); });
  }
  for (auto& t : threads) t.join();
  ConfusionMatrix total;
  for (const auto& p : parts) total += p;
  return total;
}

inline nlohmann::ordered_json metrics_report_json(const ConfusionMatrix& cm, const Metrics& m) {
  nlohmann::ordered_json j;
  j["confusion_matrix"] = {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}, {"total", cm.total()}};
  auto r = [](const Ratio& x) { return nlohmann::ordered_json{{"value", x.value}, {"degenerate", x.degenerate}}; };
  j["metrics"] = {{"sensitivity", r(m.sensitivity)},
                  {"specificity", r(m.specificity)},
                  {"precision", r(m.precision)},
                  {"mcc", r(m.mcc)},
                  {"f1", r(m.f1)}};
  return j;
}

inline std::string metrics_report_table(const ConfusionMatrix& cm, const Metrics& m) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "                    actual +    actual -\n"
                "predicted +   %12llu %11llu\n"
                "predicted -   %12llu %11llu\n"
                "total         %12llu\n\n",
                static_cast<unsigned long long>(cm.tp), static_cast<unsigned long long>(cm.fp),
                static_cast<unsigned long long>(cm.fn), static_cast<unsigned long long>(cm.tn),
                static_cast<unsigned long long>(cm.total()));
  os << buf;
  auto row = [&](const char* name, const Ratio& x) {
    std::snprintf(buf, sizeof buf, "%-12s %8.4f%s\n", name, x.value, x.degenerate ? "  (undefined)" : "");
    os << buf;
  };
  row("sensitivity", m.sensitivity);
  row("specificity", m.specificity);
  row("precision", m.precision);
  row("mcc", m.mcc);
  row("f1", m.f1);
  return os.str();
}

}  // namespace rescue
