#include "qna/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qna/error.hpp"

namespace qna {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& at) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw Error(at + "expected a boolean, got \"" + v + "\"");
}

std::vector<std::string> split_pipe(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find('|', start);
    if (pos == std::string::npos) {
      const auto part = trim(s.substr(start));
      if (!part.empty()) out.push_back(part);
      break;
    }
    const auto part = trim(s.substr(start, pos - start));
    if (!part.empty()) out.push_back(part);
    start = pos + 1;
  }
  return out;
}

}  // namespace

PipelineConfig parse_config(const std::string& bytes, const std::string& src) {
  PipelineConfig cfg;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  std::string section;
  EventConfig* event = nullptr;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto at = [&] { return src + ":" + std::to_string(line_no) + ": "; };

    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      event = nullptr;
      if (section.rfind("event", 0) == 0) {
        const std::string name = trim(section.substr(5));
        if (name.empty()) throw Error(at() + "event section needs a name: [event <name>]");
        cfg.events.emplace_back();
        cfg.events.back().name = name;
        event = &cfg.events.back();
        section = "event";
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(at() + "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));

    try {
      if (section == "paths") {
        if (key == "posts") cfg.posts_path = value;
        else if (key == "parses") cfg.parses_path = value;
        else if (key == "frames") cfg.frames_path = value;
        else if (key == "lexicon") cfg.lexicon_path = value;
        else if (key == "stopwords") cfg.stopwords_path = value;
        else if (key == "out") cfg.out_dir = value;
        else throw Error("unknown key");
      } else if (section == "clean") {
        if (key == "strip_urls") cfg.clean.strip_urls = parse_bool(value, at());
        else if (key == "strip_mentions") cfg.clean.strip_mentions = parse_bool(value, at());
        else if (key == "unwrap_hashtags") cfg.clean.unwrap_hashtags = parse_bool(value, at());
        else if (key == "drop_digits") cfg.clean.drop_digits = parse_bool(value, at());
        else if (key == "drop_symbols") cfg.clean.drop_symbols = parse_bool(value, at());
        else throw Error("unknown key");
      } else if (section == "vectorizer") {
        if (key == "weighting") cfg.weighting = weighting_from_string(value);
        else if (key == "min_df") cfg.min_df = std::stoull(value);
        else if (key == "max_df_ratio") cfg.max_df_ratio = std::stod(value);
        else if (key == "token_lexicon") cfg.token_lexicon_path = value;
        else throw Error("unknown key");
      } else if (section == "sweep") {
        if (key == "k_min") cfg.k_min = std::stoull(value);
        else if (key == "k_max") cfg.k_max = std::stoull(value);
        else if (key == "max_iter") cfg.max_iter = std::stoull(value);
        else if (key == "tol") cfg.tol = std::stod(value);
        else if (key == "select_k") cfg.select_k = std::stoull(value);
        else throw Error("unknown key");
      } else if (section == "coherence") {
        if (key == "top_n") cfg.top_n = std::stoull(value);
        else if (key == "window") cfg.window = std::stoull(value);
        else throw Error("unknown key");
      } else if (section == "report") {
        if (key == "top_k") cfg.report_top_k = std::stoull(value);
        else if (key == "samples_per_row") cfg.samples_per_row = std::stoull(value);
        else if (key == "sample_fraction") cfg.sample_fraction = std::stod(value);
        else throw Error("unknown key");
      } else if (section == "global") {
        if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "threads") cfg.threads = std::stoi(value);
        else throw Error("unknown key");
      } else if (section == "event") {
        if (key == "topic") event->topic = std::stoull(value);
        else if (key == "min_share") event->min_share = std::stod(value);
        else if (key == "keywords") event->keywords = split_pipe(value);
        else if (key == "fraction") event->graph_fraction = std::stod(value);
        else if (key == "pooled") event->pooled_graph = parse_bool(value, at());
        else throw Error("unknown key");
      } else {
        throw Error("entry outside any known section");
      }
    } catch (const std::invalid_argument&) {
      throw Error(at() + "bad numeric value \"" + value + "\" for key \"" + key + "\"");
    } catch (const std::out_of_range&) {
      throw Error(at() + "numeric value out of range for key \"" + key + "\"");
    } catch (const Error& e) {
      const std::string what = e.what();
      if (what == "unknown key")
        throw Error(at() + "unknown key \"" + key + "\" in section [" + section + "]");
      if (what == "entry outside any known section")
        throw Error(at() + "entry outside any known section");
      throw Error(at() + what);
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void validate_config(const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  auto need_file = [](const std::string& path, const char* what) {
    if (path.empty()) throw Error(std::string("config: missing required path: ") + what);
    if (!fs::exists(path))
      throw Error(std::string("config: ") + what + " does not exist: " + path);
  };
  need_file(cfg.posts_path, "posts");
  need_file(cfg.parses_path, "parses");
  need_file(cfg.lexicon_path, "lexicon");
  if (!cfg.frames_path.empty()) need_file(cfg.frames_path, "frames");
  if (!cfg.stopwords_path.empty()) need_file(cfg.stopwords_path, "stopwords");
  if (!cfg.token_lexicon_path.empty()) need_file(cfg.token_lexicon_path, "token_lexicon");
  if (cfg.out_dir.empty()) throw Error("config: out directory must be set");

  if (cfg.min_df < 1) throw Error("config: min_df must be >= 1");
  if (!(cfg.max_df_ratio > 0.0) || cfg.max_df_ratio > 1.0)
    throw Error("config: max_df_ratio must be in (0, 1]");
  if (cfg.k_min < 1 || cfg.k_min > cfg.k_max) throw Error("config: need 1 <= k_min <= k_max");
  if (cfg.select_k && (*cfg.select_k < cfg.k_min || *cfg.select_k > cfg.k_max))
    throw Error("config: select_k outside the sweep range");
  if (cfg.top_n < 2) throw Error("config: coherence top_n must be >= 2");
  if (cfg.window < 2) throw Error("config: coherence window must be >= 2");
  if (cfg.report_top_k < 1) throw Error("config: report top_k must be >= 1");
  if (!(cfg.sample_fraction > 0.0) || cfg.sample_fraction > 1.0)
    throw Error("config: sample_fraction must be in (0, 1]");
  if (cfg.events.empty()) throw Error("config: at least one [event <name>] section is required");
  for (const auto& ev : cfg.events) {
    if (ev.topic.has_value() == !ev.keywords.empty())
      throw Error("config: event \"" + ev.name +
                  "\" must set exactly one of topic= or keywords=");
    if (!(ev.min_share > 0.0) || ev.min_share > 1.0)
      throw Error("config: event \"" + ev.name + "\": min_share must be in (0, 1]");
    if (!(ev.graph_fraction > 0.0) || ev.graph_fraction > 1.0)
      throw Error("config: event \"" + ev.name + "\": fraction must be in (0, 1]");
    for (const auto& other : cfg.events)
      if (&other != &ev && other.name == ev.name)
        throw Error("config: duplicate event name \"" + ev.name + "\"");
  }
}

std::string config_fingerprint(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["clean"] = {cfg.clean.strip_urls, cfg.clean.strip_mentions, cfg.clean.unwrap_hashtags,
                cfg.clean.drop_digits, cfg.clean.drop_symbols};
  j["weighting"] = to_string(cfg.weighting);
  j["min_df"] = cfg.min_df;
  j["max_df_ratio"] = cfg.max_df_ratio;
  j["k_min"] = cfg.k_min;
  j["k_max"] = cfg.k_max;
  j["max_iter"] = cfg.max_iter;
  j["tol"] = cfg.tol;
  j["select_k"] = cfg.select_k ? nlohmann::json(*cfg.select_k) : nlohmann::json(nullptr);
  j["top_n"] = cfg.top_n;
  j["window"] = cfg.window;
  j["report_top_k"] = cfg.report_top_k;
  j["samples_per_row"] = cfg.samples_per_row;
  j["sample_fraction"] = cfg.sample_fraction;
  j["seed"] = cfg.seed;
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& ev : cfg.events) {
    nlohmann::ordered_json e;
    e["name"] = ev.name;
    e["topic"] = ev.topic ? nlohmann::json(*ev.topic) : nlohmann::json(nullptr);
    e["min_share"] = ev.min_share;
    e["keywords"] = ev.keywords;
    e["fraction"] = ev.graph_fraction;
    e["pooled"] = ev.pooled_graph;
    events.push_back(std::move(e));
  }
  j["events"] = std::move(events);
  return j.dump();
}

}  // namespace qna
