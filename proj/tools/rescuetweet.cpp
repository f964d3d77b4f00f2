// rescuetweet: rescue-request identification pipeline over archived tweets.
//
//   rescuetweet pipeline --input tweets.ndjson --gazetteer gaz.tsv
//                        --out-geojson requests.geojson --out-map map.html
//   rescuetweet classify --input tweets.ndjson
//   rescuetweet eval --input labelled.csv
//   rescuetweet eval --counts 228,66,23,5475
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rescue/http_geocoder.hpp"
#include "rescue/rescue.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2 };

/// Failure tagged with the pipeline stage and the exit code it maps to.
struct StageError {
  std::string stage;
  std::string message;
  int code;
};

[[noreturn]] void fail(std::string stage, std::string message, int code) {
  throw StageError{std::move(stage), std::move(message), code};
}

struct Settings {
  std::vector<std::string> inputs;
  std::string config_path;
  std::string lexicons;
  std::string gazetteer;
  std::string geocoder;  // "gazetteer" | "http"
  std::string geocoder_url;
  std::string out_geojson;
  std::string out_map;
  std::string out_summary;
  bool spanish = false;
  bool sequential = false;
  bool no_stream_filter = false;
  int min_interval_ms = 100;
  int timeout_ms = 5000;
  std::vector<std::string> keywords;
  std::optional<rescue::BoundingBox> bbox = rescue::kHarveyBoundingBox;
  bool keywords_set = false;
  std::string text;
  bool text_set = false;
  std::string counts;
  bool json_report = false;
};

// Values from the config file fill only what the command line left unset.
void apply_config(Settings& s, const CLI::App& cmd) {
  if (s.config_path.empty()) return;
  std::ifstream in(s.config_path);
  if (!in) fail("config", "cannot open config file: " + s.config_path, kUsage);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail("config", "config is not a JSON object: " + s.config_path, kUsage);
  const fs::path base = fs::path(s.config_path).parent_path();
  auto path_of = [&](const json& v) {
    fs::path p = v.get<std::string>();
    return (p.is_absolute() ? p : base / p).string();
  };
  auto unset = [&](const char* flag) { return cmd.count(flag) == 0; };
  try {
    if (j.contains("input") && unset("--input")) {
      const json& v = j["input"];
      if (v.is_array())
        for (const auto& e : v) s.inputs.push_back(path_of(e));
      else
        s.inputs.push_back(path_of(v));
    }
    if (j.contains("lexicons") && unset("--lexicons")) s.lexicons = path_of(j["lexicons"]);
    if (j.contains("gazetteer") && unset("--gazetteer")) s.gazetteer = path_of(j["gazetteer"]);
    if (j.contains("geocoder") && unset("--geocoder")) s.geocoder = j["geocoder"].get<std::string>();
    if (j.contains("geocoder_url") && unset("--geocoder-url")) s.geocoder_url = j["geocoder_url"].get<std::string>();
    if (j.contains("out_geojson") && unset("--out-geojson")) s.out_geojson = path_of(j["out_geojson"]);
    if (j.contains("out_map") && unset("--out-map")) s.out_map = path_of(j["out_map"]);
    if (j.contains("spanish") && unset("--spanish")) s.spanish = j["spanish"].get<bool>();
    if (j.contains("sequential") && unset("--sequential")) s.sequential = j["sequential"].get<bool>();
    if (j.contains("min_interval_ms") && unset("--min-interval-ms")) s.min_interval_ms = j["min_interval_ms"].get<int>();
    if (j.contains("timeout_ms")) s.timeout_ms = j["timeout_ms"].get<int>();
    if (j.contains("stream_filter")) {
      const json& sf = j["stream_filter"];
      if (sf.contains("enabled") && unset("--no-stream-filter")) s.no_stream_filter = !sf["enabled"].get<bool>();
      if (sf.contains("keywords") && unset("--keyword")) {
        s.keywords = sf["keywords"].get<std::vector<std::string>>();
        s.keywords_set = true;
      }
      if (sf.contains("bbox")) {
        if (sf["bbox"].is_null()) {
          s.bbox.reset();
        } else {
          auto b = sf["bbox"].get<std::vector<double>>();
          if (b.size() != 4) fail("config", "stream_filter.bbox must be [west, south, east, north]", kUsage);
          s.bbox = rescue::BoundingBox{b[0], b[1], b[2], b[3]};
        }
      }
    }
  } catch (const json::exception& e) {
    fail("config", std::string("bad value in ") + s.config_path + ": " + e.what(), kUsage);
  }
}

rescue::Lexicon make_lexicon(const Settings& s) {
  try {
    rescue::LexiconConfig cfg =
        s.lexicons.empty() ? rescue::LexiconConfig::defaults() : rescue::LexiconConfig::load(s.lexicons);
    cfg.spanish_enabled = s.spanish;
    return rescue::Lexicon(cfg);
  } catch (const rescue::Error& e) {
    fail("lexicon", e.what(), kUsage);
  }
}

std::optional<rescue::StreamConfig> make_stream(const Settings& s) {
  if (s.no_stream_filter) return std::nullopt;
  try {
    return rescue::StreamConfig(s.keywords_set ? s.keywords : rescue::harvey_track_keywords(), s.bbox);
  } catch (const rescue::ConfigError& e) {
    fail("config", e.what(), kUsage);
  }
}

std::unique_ptr<rescue::Geocoder> make_geocoder(const Settings& s) {
  std::string kind = s.geocoder;
  if (kind.empty()) kind = !s.gazetteer.empty() ? "gazetteer" : (!s.geocoder_url.empty() ? "http" : "");
  if (kind == "gazetteer") {
    if (s.gazetteer.empty()) fail("config", "--geocoder gazetteer needs --gazetteer PATH", kUsage);
    if (!fs::exists(s.gazetteer)) fail("config", "gazetteer not found: " + s.gazetteer, kUsage);
    try {
      return std::make_unique<rescue::Geocoder>(
          std::make_shared<rescue::GazetteerBackend>(rescue::Gazetteer::load(s.gazetteer)));
    } catch (const rescue::Error& e) {
      fail("geocode", e.what(), kUsage);
    }
  }
  if (kind == "http") {
    if (s.geocoder_url.empty()) fail("config", "--geocoder http needs --geocoder-url TEMPLATE", kUsage);
    auto cfg = rescue::HttpGeocoderConfig::from_environment(s.geocoder_url);
    cfg.min_interval = std::chrono::milliseconds(s.min_interval_ms);
    cfg.timeout = std::chrono::milliseconds(s.timeout_ms);
    try {
      return std::make_unique<rescue::Geocoder>(std::make_shared<rescue::HttpGeocoderBackend>(cfg));
    } catch (const rescue::ConfigError& e) {
      fail("config", e.what(), kUsage);
    }
  }
  if (kind.empty()) fail("config", "no geocoder configured; pass --gazetteer PATH or --geocoder-url", kUsage);
  fail("config", "unknown geocoder '" + kind + "' (expected gazetteer or http)", kUsage);
}

// Expands manifests (*.manifest) and checks that inputs exist. "-" is stdin.
std::vector<fs::path> resolve_inputs(const Settings& s) {
  std::vector<fs::path> files;
  for (const auto& in : s.inputs) {
    if (in == "-") {
      files.emplace_back("-");
      continue;
    }
    if (!fs::exists(in)) fail("ingest", "input not found: " + in, kIo);
    if (fs::path(in).extension() == ".manifest") {
      for (auto& f : rescue::read_manifest(in)) {
        if (!fs::exists(f)) fail("ingest", "input listed in " + in + " not found: " + f.string(), kIo);
        files.push_back(f);
      }
    } else {
      files.emplace_back(in);
    }
  }
  return files;
}

rescue::TweetSource make_source(std::vector<fs::path> files) {
  return [files = std::move(files)](rescue::TweetReader& reader,
                                    const std::function<void(rescue::Tweet&&)>& sink) {
    for (const auto& f : files) {
      if (f == "-")
        reader.read(std::cin, sink);
      else
        reader.read_file(f, sink);
    }
  };
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("output", "cannot write " + path, kIo);
  out << content;
  if (!out) fail("output", "write failed: " + path, kIo);
}

int cmd_pipeline(Settings& s, const CLI::App& cmd) {
  apply_config(s, cmd);
  if (s.inputs.empty()) fail("config", "no input given (--input PATH)", kUsage);
  auto lex = make_lexicon(s);
  auto stream = make_stream(s);
  auto geocoder = make_geocoder(s);
  auto files = resolve_inputs(s);

  rescue::PipelineOptions opts;
  opts.stream = stream;
  opts.sequential = s.sequential;
  rescue::PipelineResult result;
  try {
    result = rescue::run_pipeline(make_source(files), lex, *geocoder, opts);
  } catch (const rescue::IoError& e) {
    fail("ingest", e.what(), kIo);
  }
  for (const auto& d : result.diagnostics) std::cerr << "warning [ingest]: " << d << "\n";

  if (!s.out_geojson.empty()) write_file(s.out_geojson, rescue::to_geojson(result.requests));
  if (!s.out_map.empty()) write_file(s.out_map, rescue::to_map_document(result.requests));
  std::string summary = result.summary.to_json().dump(2) + "\n";
  if (!s.out_summary.empty()) write_file(s.out_summary, summary);
  std::cout << summary;
  return kOk;
}

nlohmann::ordered_json feature_json(const rescue::FeatureVector& fv) {
  return nlohmann::ordered_json{{"has_address", fv.has_address},
              {"has_ask_help", fv.has_ask_help},
              {"has_disaster_context", fv.has_disaster_context},
              {"has_status_update", fv.has_status_update},
              {"has_offer_help", fv.has_offer_help},
              {"has_news_report", fv.has_news_report},
              {"has_political", fv.has_political},
              {"has_ads", fv.has_ads}};
}

nlohmann::ordered_json classify_record(const std::string& id, const std::string& text,
                                       const std::vector<std::string>& hashtags,
                                       const rescue::Lexicon& lex) {
  auto fv = rescue::extract_features(text, lex);
  auto verdict = rescue::classify(fv);
  nlohmann::ordered_json out;
  out["id"] = id;
  out["verdict"] = std::string(rescue::to_string(verdict));
  out["features"] = feature_json(fv);
  out["address"] = nullptr;
  if (verdict == rescue::Verdict::RescueRequest) {
    if (auto a = rescue::extract_full_address(text, lex)) {
      auto c = rescue::complete_address(*a, hashtags);
      out["address"] = {{"completed", c.completed},
                        {"completion_rule", std::string(rescue::to_string(c.completion_rule))}};
    }
  }
  return out;
}

int cmd_classify(Settings& s, const CLI::App& cmd) {
  apply_config(s, cmd);
  auto lex = make_lexicon(s);
  auto emit = [](const nlohmann::ordered_json& j) {
    std::cout << j.dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
  };
  if (s.text_set) {
    emit(classify_record("text", s.text, rescue::extract_hashtags(s.text), lex));
    return kOk;
  }
  if (s.inputs.empty()) fail("config", "no input given (--input PATH or --text TEXT)", kUsage);
  auto files = resolve_inputs(s);
  rescue::TweetReader reader;
  try {
    make_source(files)(reader, [&](rescue::Tweet&& t) { emit(classify_record(t.id, t.text, t.hashtags, lex)); });
  } catch (const rescue::IoError& e) {
    fail("ingest", e.what(), kIo);
  }
  for (const auto& d : reader.stats().diagnostics) std::cerr << "warning [ingest]: " << d << "\n";
  return kOk;
}

int cmd_eval(Settings& s, const CLI::App& cmd) {
  apply_config(s, cmd);
  rescue::ConfusionMatrix cm;
  if (!s.counts.empty()) {
    std::vector<unsigned long long> v;
    std::stringstream ss(s.counts);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        fail("config", "--counts expects tp,fp,fn,tn as non-negative integers", kUsage);
      }
    }
    if (v.size() != 4) fail("config", "--counts expects exactly four values tp,fp,fn,tn", kUsage);
    cm = {v[0], v[1], v[2], v[3]};
  } else {
    if (s.inputs.size() != 1) fail("config", "eval needs exactly one --input PATH or --counts", kUsage);
    if (!fs::exists(s.inputs.front())) fail("eval", "labelled corpus not found: " + s.inputs.front(), kIo);
    auto lex = make_lexicon(s);
    std::vector<rescue::LabelledTweet> corpus;
    try {
      corpus = rescue::load_labelled(fs::path(s.inputs.front()));
    } catch (const rescue::LoadError& e) {
      fail("eval", e.what(), kUsage);
    } catch (const rescue::IoError& e) {
      fail("eval", e.what(), kIo);
    }
    if (corpus.empty()) fail("eval", "labelled corpus has no rows: " + s.inputs.front(), kUsage);
    cm = rescue::evaluate(corpus, lex, s.sequential ? 1 : std::max(1u, std::thread::hardware_concurrency()));
  }
  if (cm.total() == 0) fail("eval", "confusion matrix is all zero", kUsage);
  auto m = rescue::metrics(cm);
  if (s.json_report)
    std::cout << rescue::metrics_report_json(cm, m).dump(2) << "\n";
  else
    std::cout << rescue::metrics_report_table(cm, m);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify rescue requests in disaster-time tweets, geocode them, and map them."};
  app.require_subcommand(1);
  Settings s;

  auto common = [&](CLI::App* c) {
    c->add_option("--input", s.inputs, "Input file(s); '-' for stdin, *.manifest lists files");
    c->add_option("--config", s.config_path, "JSON config file; flags take precedence")->check(CLI::ExistingFile);
    c->add_option("--lexicons", s.lexicons, "Directory of lexicon files overriding the defaults");
    c->add_flag("--spanish", s.spanish, "Enable the Spanish help/situation lexicon overlay");
    c->add_flag("--sequential", s.sequential, "Single-threaded execution");
  };

  auto* pipeline = app.add_subcommand("pipeline", "Run ingest through map output");
  common(pipeline);
  pipeline->add_option("--gazetteer", s.gazetteer, "Offline gazetteer TSV");
  pipeline->add_option("--geocoder", s.geocoder, "Geocoder backend")->check(CLI::IsMember({"gazetteer", "http"}));
  pipeline->add_option("--geocoder-url", s.geocoder_url,
                       "URL template with {query} and {key}; key read from $RESCUE_GEOCODER_KEY");
  pipeline->add_option("--min-interval-ms", s.min_interval_ms, "Minimum gap between HTTP geocoder requests");
  pipeline->add_option("--out-geojson", s.out_geojson, "GeoJSON output path");
  pipeline->add_option("--out-map", s.out_map, "HTML map output path");
  pipeline->add_option("--out-summary", s.out_summary, "Run summary JSON path (also printed)");
  pipeline->add_option("--keyword", s.keywords, "Stream-filter track keyword (repeatable)");
  pipeline->add_flag("--no-stream-filter", s.no_stream_filter, "Skip the keyword/bounding-box pre-filter");

  auto* classify = app.add_subcommand("classify", "Print feature vectors and verdicts, one JSON record per tweet");
  common(classify);
  classify->add_option("--text", s.text, "Classify a single text instead of an input file");

  auto* eval = app.add_subcommand("eval", "Confusion matrix and metrics over a labelled corpus");
  common(eval);
  eval->add_option("--counts", s.counts, "Skip classification; use tp,fp,fn,tn directly");
  eval->add_flag("--json", s.json_report, "Emit the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  s.keywords_set = pipeline->count("--keyword") > 0;
  s.text_set = classify->count("--text") > 0;

  try {
    if (*pipeline) return cmd_pipeline(s, *pipeline);
    if (*classify) return cmd_classify(s, *classify);
    if (*eval) return cmd_eval(s, *eval);
  } catch (const StageError& e) {
    std::cerr << "error [" << e.stage << "]: " << e.message << "\n";
    return e.code;
  } catch (const rescue::IoError& e) {
    std::cerr << "error [io]: " << e.what() << "\n";
    return kIo;
  } catch (const rescue::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
