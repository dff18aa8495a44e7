#include "qna/conllu.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qna/error.hpp"

namespace qna {

const SrlArgument* SrlFrame::find(const std::string& role) const {
  for (const auto& a : arguments)
    if (a.role == role) return &a;
  return nullptr;
}

void validate_sentence(const ParsedSentence& s) {
  const auto where = [&] {
    return " (post_id=" + s.post_id + ", sent_index=" + std::to_string(s.sent_index) + ")";
  };
  const std::size_t n = s.tokens.size();
  if (n == 0) throw Error("sentence has no tokens" + where());
  bool has_root = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = s.tokens[i];
    if (t.index != i + 1) throw Error("token indices not contiguous" + where());
    if (t.head > n) throw Error("head index out of range" + where());
    if (t.head == t.index) throw Error("token is its own head" + where());
    if (t.head == 0) has_root = true;
  }
  if (!has_root) throw Error("sentence has no root" + where());
  for (const auto& f : s.frames) {
    if (f.predicate < 1 || f.predicate > n)
      throw Error("frame predicate out of range" + where());
    std::size_t arg0 = 0, arg1 = 0;
    for (const auto& a : f.arguments) {
      if (a.start < 1 || a.end > n || a.start > a.end)
        throw Error("frame span out of range" + where());
      if (a.role == "ARG0") ++arg0;
      if (a.role == "ARG1") ++arg1;
    }
    if (arg0 > 1 || arg1 > 1)
      throw Error("frame has more than one ARG0/ARG1 span" + where());
  }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::size_t parse_index(const std::string& s, const std::string& what, std::size_t line_no,
                        const std::string& src) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (...) {
    throw Error(src + ":" + std::to_string(line_no) + ": bad " + what + " \"" + s + "\"");
  }
}

// Frame=3:ARG0=1-2,ARG1=4-6
SrlFrame parse_frame_entry(const std::string& spec, std::size_t line_no, const std::string& src) {
  auto fail = [&]() -> Error {
    return Error(src + ":" + std::to_string(line_no) + ": bad Frame entry \"" + spec + "\"");
  };
  SrlFrame frame;
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw fail();
  frame.predicate = parse_index(spec.substr(0, colon), "predicate index", line_no, src);
  for (const auto& part : split(spec.substr(colon + 1), ',')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    const auto dash = part.find('-', eq == std::string::npos ? 0 : eq + 1);
    if (eq == std::string::npos || dash == std::string::npos) throw fail();
    SrlArgument arg;
    arg.role = part.substr(0, eq);
    arg.start = parse_index(part.substr(eq + 1, dash - eq - 1), "span start", line_no, src);
    arg.end = parse_index(part.substr(dash + 1), "span end", line_no, src);
    frame.arguments.push_back(std::move(arg));
  }
  return frame;
}

}  // namespace

std::vector<ParsedSentence> parse_conllu(const std::string& bytes, const std::string& src) {
  std::vector<ParsedSentence> sentences;
  ParsedSentence current;
  bool has_post_id = false, has_sent_index = false, has_rows = false;
  std::size_t line_no = 0;
  std::size_t sentence_first_line = 0;

  auto flush = [&]() {
    if (!has_rows && !has_post_id && !has_sent_index) return;
    if (!has_post_id)
      throw Error(src + ":" + std::to_string(sentence_first_line) +
                  ": sentence is missing a \"# post_id = ...\" comment");
    if (!has_sent_index)
      throw Error(src + ":" + std::to_string(sentence_first_line) +
                  ": sentence is missing a \"# sent_index = ...\" comment");
    validate_sentence(current);
    sentences.push_back(std::move(current));
    current = ParsedSentence{};
    has_post_id = has_sent_index = has_rows = false;
  };

  std::istringstream in(bytes);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (!has_rows && !has_post_id && !has_sent_index) sentence_first_line = line_no;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
          const auto b = s.find_first_not_of(" \t");
          const auto e = s.find_last_not_of(" \t");
          s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        if (key == "post_id") {
          current.post_id = value;
          has_post_id = true;
        } else if (key == "sent_index") {
          current.sent_index = static_cast<std::int64_t>(
              parse_index(value, "sent_index", line_no, src));
          has_sent_index = true;
        }
      }
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 10)
      throw Error(src + ":" + std::to_string(line_no) + ": expected 10 columns, got " +
                  std::to_string(cols.size()));
    // multiword token ranges ("2-4") and empty nodes ("3.1") carry no tree
    if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos)
      continue;
    TokenRow row;
    row.index = parse_index(cols[0], "token id", line_no, src);
    row.surface = cols[1];
    if (cols[2] != "_" && !cols[2].empty()) row.lemma = cols[2];
    row.upos = cols[3];
    row.head = parse_index(cols[6], "head", line_no, src);
    row.deprel = cols[7];
    has_rows = true;
    // MISC may carry |-separated Frame entries
    if (cols[9] != "_") {
      for (const auto& entry : split(cols[9], '|')) {
        if (entry.rfind("Frame=", 0) == 0)
          current.frames.push_back(parse_frame_entry(entry.substr(6), line_no, src));
      }
    }
    current.tokens.push_back(std::move(row));
  }
  flush();
  return sentences;
}

std::vector<ParsedSentence> load_conllu(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open parse file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_conllu(buf.str(), path);
}

std::vector<ParsedSentence> load_parses(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".conllu")
        files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .conllu files under " + path);
    std::vector<ParsedSentence> all;
    for (const auto& f : files) {
      auto part = load_conllu(f);
      all.insert(all.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
    return all;
  }
  return load_conllu(path);
}

void apply_frames_sidecar(std::vector<ParsedSentence>& sentences, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open frames sidecar: " + path);
  std::map<std::pair<std::string, std::int64_t>, std::vector<SrlFrame>> by_key;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::vector<SrlFrame> frames;
    for (const auto& fj : j.at("frames")) {
      SrlFrame f;
      f.predicate = fj.at("predicate").get<std::size_t>();
      for (const auto& aj : fj.at("arguments")) {
        SrlArgument a;
        a.role = aj.at("role").get<std::string>();
        a.start = aj.at("start").get<std::size_t>();
        a.end = aj.at("end").get<std::size_t>();
        f.arguments.push_back(std::move(a));
      }
      frames.push_back(std::move(f));
    }
    by_key[{j.at("post_id").get<std::string>(), j.at("sent_index").get<std::int64_t>()}] =
        std::move(frames);
  }
  for (auto& s : sentences) {
    auto it = by_key.find({s.post_id, s.sent_index});
    if (it == by_key.end()) continue;
    s.frames = it->second;
    validate_sentence(s);
  }
}

std::string to_conllu(const std::vector<ParsedSentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    out += "# post_id = " + s.post_id + "\n";
    out += "# sent_index = " + std::to_string(s.sent_index) + "\n";
    // frames grouped on their predicate token's MISC column
    std::map<std::size_t, std::string> misc;
    for (const auto& f : s.frames) {
      std::string entry = "Frame=" + std::to_string(f.predicate) + ":";
      for (std::size_t i = 0; i < f.arguments.size(); ++i) {
        const auto& a = f.arguments[i];
        if (i) entry += ",";
        entry += a.role + "=" + std::to_string(a.start) + "-" + std::to_string(a.end);
      }
      auto& slot = misc[f.predicate];
      if (!slot.empty()) slot += "|";
      slot += entry;
    }
    for (const auto& t : s.tokens) {
      out += std::to_string(t.index);
      out += '\t';
      out += t.surface;
      out += '\t';
      out += t.lemma.value_or("_");
      out += '\t';
      out += t.upos.empty() ? "_" : t.upos;
      out += "\t_\t_\t";
      out += std::to_string(t.head);
      out += '\t';
      out += t.deprel.empty() ? "_" : t.deprel;
      out += "\t_\t";
      auto it = misc.find(t.index);
      out += it == misc.end() ? "_" : it->second;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace qna
