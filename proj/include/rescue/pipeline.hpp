#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rescue/bounded_queue.hpp"
#include "rescue/features.hpp"
#include "rescue/full_address.hpp"
#include "rescue/geocode.hpp"
#include "rescue/output.hpp"
#include "rescue/tweet.hpp"

namespace rescue {

/// Per-stage counts of one run. Invariants:
///   read == stream_passed + stream_rejected
///   classified_positive == geocoded_ok + geocode_failed
struct RunSummary {
  std::size_t read = 0;  // tweets accepted by ingest
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
  std::size_t stream_passed = 0;
  std::size_t stream_rejected = 0;
  std::size_t classified_positive = 0;
  std::size_t geocoded_ok = 0;
  std::size_t geocode_failed = 0;

  nlohmann::ordered_json to_json() const {
    return {{"read", read},
            {"malformed", malformed},
            {"duplicates", duplicates},
            {"stream_passed", stream_passed},
            {"stream_rejected", stream_rejected},
            {"classified_positive", classified_positive},
            {"geocoded_ok", geocoded_ok},
            {"geocode_failed", geocode_failed}};
  }
};

struct PipelineOptions {
  std::optional<StreamConfig> stream;  // absent: no pre-filter
  bool sequential = false;
  std::size_t queue_capacity = 256;
};

struct PipelineResult {
  std::vector<RescueRequest> requests;  // positives in input order
  RunSummary summary;
  std::vector<std::string> diagnostics;
};

/// Classification and address completion for one tweet. Returns a request
/// with an empty geocode when the tweet is a rescue request.
inline std::optional<RescueRequest> analyse_tweet(Tweet tweet, const Lexicon& lex) {
  FeatureVector fv = extract_features(tweet.text, lex);
  if (classify(fv) != Verdict::RescueRequest) return std::nullopt;
  auto addr = extract_full_address(tweet.text, lex);
  if (!addr) return std::nullopt;  // unreachable: has_address implies a match
  RescueRequest r;
  r.address = complete_address(std::move(*addr), tweet.hashtags);
  r.features = fv;
  r.local_time = to_local_time(tweet.created_at_utc);
  r.geocode.query = r.address.completed;
  r.tweet = std::move(tweet);
  return r;
}

/// Feeds every input tweet to the sink through the given reader.
using TweetSource = std::function<void(TweetReader&, const std::function<void(Tweet&&)>&)>;

inline TweetSource stream_source(std::istream& in) {
  return [&in](TweetReader& reader, const std::function<void(Tweet&&)>& sink) {
    reader.read(in, sink);
  };
}

inline TweetSource file_source(std::vector<std::filesystem::path> files) {
  return [files = std::move(files)](TweetReader& reader, const std::function<void(Tweet&&)>& sink) {
    for (const auto& f : files) reader.read_file(f, sink);
  };
}

/// ingest -> stream filter -> features -> classify -> address -> geocode.
///
/// Concurrent mode runs ingest and analysis on their own threads joined by
/// bounded queues; geocoding happens on the calling thread. Each stage is a
/// single thread, so output order equals input order in both modes.
inline PipelineResult run_pipeline(const TweetSource& source, const Lexicon& lex, Geocoder& geocoder,
                                   const PipelineOptions& opts = {}) {
  PipelineResult result;
  RunSummary& s = result.summary;
  TweetReader reader;

  auto filter_and_analyse = [&](Tweet&& t) -> std::optional<RescueRequest> {
    if (opts.stream && !passes_stream_filter(t, *opts.stream)) {
      ++s.stream_rejected;
      return std::nullopt;
    }
    ++s.stream_passed;
    auto r = analyse_tweet(std::move(t), lex);
    if (r) ++s.classified_positive;
    return r;
  };
  auto finish = [&](RescueRequest&& r) {
    r.geocode = geocoder.geocode(r.address.completed);
    if (r.geocode.ok())
      ++s.geocoded_ok;
    else
      ++s.geocode_failed;
    result.requests.push_back(std::move(r));
  };

  if (opts.sequential) {
    source(reader, [&](Tweet&& t) {
      if (auto r = filter_and_analyse(std::move(t))) finish(std::move(*r));
    });
  } else {
    BoundedQueue<Tweet> tweets(opts.queue_capacity);
    BoundedQueue<RescueRequest> positives(opts.queue_capacity);
    std::exception_ptr ingest_error, analyse_error;

    std::thread ingest([&] {
      try {
        source(reader, [&](Tweet&& t) { tweets.push(std::move(t)); });
      } catch (...) {
        ingest_error = std::current_exception();
      }
      tweets.close();
    });
    std::thread analyse([&] {
      try {
        while (auto t = tweets.pop())
          if (auto r = filter_and_analyse(std::move(*t))) positives.push(std::move(*r));
      } catch (...) {
        analyse_error = std::current_exception();
        tweets.close();
      }
      positives.close();
    });
    while (auto r = positives.pop()) finish(std::move(*r));
    ingest.join();
    analyse.join();
    if (ingest_error) std::rethrow_exception(ingest_error);
    if (analyse_error) std::rethrow_exception(analyse_error);
  }

  const IngestStats& st = reader.stats();
  s.read = st.accepted;
  s.malformed = st.malformed;
  s.duplicates = st.duplicates;
  result.diagnostics = st.diagnostics;
  return result;
}

}  // namespace rescue
