#include "qna/extract.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "qna/error.hpp"
#include "qna/utf8.hpp"

namespace qna {

const char* to_string(TripletSource s) {
  return s == TripletSource::srl ? "srl" : "dependency";
}

TripletSource triplet_source_from_string(const std::string& s) {
  if (s == "srl") return TripletSource::srl;
  if (s == "dependency") return TripletSource::dependency;
  throw Error("unknown triplet source: \"" + s + "\"");
}

namespace {

std::string collapse_ws(const std::string& s) {
  std::string out;
  bool pending = false;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t at = i;
    const char32_t cp = utf8::decode(s, i);
    if (utf8::is_space(cp)) {
      pending = !out.empty();
      continue;
    }
    if (pending) {
      out.push_back(' ');
      pending = false;
    }
    out.append(s, at, i - at);
  }
  return out;
}

std::string join_surfaces(const ParsedSentence& s, const std::vector<std::size_t>& indices) {
  bool cjk = !indices.empty();
  for (std::size_t i : indices) cjk = cjk && utf8::all_cjk(s.tokens[i - 1].surface);
  std::string out;
  for (std::size_t i : indices) {
    if (!out.empty() && !cjk) out.push_back(' ');
    out += s.tokens[i - 1].surface;
  }
  return collapse_ws(out);
}

bool is_verb_group_rel(const std::string& deprel) {
  return deprel == "prt" || deprel == "neg" || deprel.rfind("compound", 0) == 0;
}

// Predicate surface extended by immediately adjacent compound/particle/
// negation children; stays a contiguous token run.
std::string verb_phrase(const ParsedSentence& s, std::size_t pred) {
  std::size_t lo = pred, hi = pred;
  while (lo > 1) {
    const auto& t = s.tokens[lo - 2];
    if (t.head == pred && is_verb_group_rel(t.deprel))
      --lo;
    else
      break;
  }
  while (hi < s.tokens.size()) {
    const auto& t = s.tokens[hi];
    if (t.head == pred && is_verb_group_rel(t.deprel))
      ++hi;
    else
      break;
  }
  return span_text(s, lo, hi);
}

void push_if_complete(std::vector<Triplet>& out, const ParsedSentence& s, std::string subject,
                      std::string verb, std::string object, TripletSource source) {
  if (subject.empty() || verb.empty() || object.empty()) return;
  Triplet t;
  t.subject = std::move(subject);
  t.verb = std::move(verb);
  t.object = std::move(object);
  t.post_id = s.post_id;
  t.sent_index = s.sent_index;
  t.source = source;
  out.push_back(std::move(t));
}

}  // namespace

std::string span_text(const ParsedSentence& sentence, std::size_t start, std::size_t end) {
  if (start < 1 || end > sentence.tokens.size() || start > end)
    throw Error("span_text: span [" + std::to_string(start) + ", " + std::to_string(end) +
                "] out of bounds (post_id=" + sentence.post_id + ", sent_index=" +
                std::to_string(sentence.sent_index) + ")");
  std::vector<std::size_t> idx;
  idx.reserve(end - start + 1);
  for (std::size_t i = start; i <= end; ++i) idx.push_back(i);
  return join_surfaces(sentence, idx);
}

std::vector<Triplet> extract_srl(const ParsedSentence& sentence) {
  validate_sentence(sentence);
  std::vector<Triplet> out;
  for (const auto& frame : sentence.frames) {
    const SrlArgument* agent = frame.find("ARG0");
    const SrlArgument* patient = frame.find("ARG1");
    if (!agent || !patient) continue;  // both core arguments required
    push_if_complete(out, sentence, span_text(sentence, agent->start, agent->end),
                     verb_phrase(sentence, frame.predicate),
                     span_text(sentence, patient->start, patient->end), TripletSource::srl);
  }
  return out;
}

namespace {

struct DepIndex {
  std::vector<std::vector<std::size_t>> children;  // by head, 1-based

  explicit DepIndex(const ParsedSentence& s) : children(s.tokens.size() + 1) {
    for (const auto& t : s.tokens)
      if (t.head >= 1) children[t.head].push_back(t.index);
  }
};

// The coordinated heads reachable from h: h itself plus conj descendants.
void expand_conj(const ParsedSentence& s, const DepIndex& dep, std::size_t h,
                 std::vector<std::size_t>& out) {
  out.push_back(h);
  for (std::size_t c : dep.children[h])
    if (s.tokens[c - 1].deprel == "conj") expand_conj(s, dep, c, out);
}

// Token indices of the subtree under h, skipping conj/cc/punct branches so a
// conjunct's text does not swallow its siblings.
std::string argument_text(const ParsedSentence& s, const DepIndex& dep, std::size_t h) {
  std::vector<std::size_t> collected;
  std::vector<std::size_t> stack{h};
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    collected.push_back(cur);
    for (std::size_t c : dep.children[cur]) {
      const std::string& rel = s.tokens[c - 1].deprel;
      if (rel == "conj" || rel == "cc" || rel == "punct") continue;
      stack.push_back(c);
    }
  }
  std::sort(collected.begin(), collected.end());
  return join_surfaces(s, collected);
}

bool relation_is(const std::string& rel, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (rel == n) return true;
  return false;
}

}  // namespace

std::vector<Triplet> extract_dep(const ParsedSentence& sentence) {
  validate_sentence(sentence);
  const DepIndex dep(sentence);
  std::vector<Triplet> out;
  for (const auto& v : sentence.tokens) {
    if (v.upos != "VERB") continue;
    std::vector<std::size_t> subjects, objects, promoted, agents;
    for (std::size_t c : dep.children[v.index]) {
      const std::string& rel = sentence.tokens[c - 1].deprel;
      if (relation_is(rel, {"nsubj", "csubj"})) {
        expand_conj(sentence, dep, c, subjects);
      } else if (relation_is(rel, {"obj", "dobj"})) {
        expand_conj(sentence, dep, c, objects);
      } else if (relation_is(rel, {"nsubj:pass", "nsubjpass", "csubj:pass"})) {
        expand_conj(sentence, dep, c, promoted);
      } else if (relation_is(rel, {"obl:agent", "nmod:agent", "agent"})) {
        expand_conj(sentence, dep, c, agents);
      }
    }
    const std::string verb = verb_phrase(sentence, v.index);
    for (std::size_t s : subjects)
      for (std::size_t o : objects)
        push_if_complete(out, sentence, argument_text(sentence, dep, s), verb,
                         argument_text(sentence, dep, o), TripletSource::dependency);
    // passive: agent acts, the promoted subject is acted upon
    for (std::size_t a : agents)
      for (std::size_t p : promoted)
        push_if_complete(out, sentence, argument_text(sentence, dep, a), verb,
                         argument_text(sentence, dep, p), TripletSource::dependency);
  }
  return out;
}

std::vector<Triplet> extract_sentence(const ParsedSentence& sentence) {
  return sentence.frames.empty() ? extract_dep(sentence) : extract_srl(sentence);
}

std::vector<Triplet> extract_all(std::vector<ParsedSentence> sentences) {
  std::sort(sentences.begin(), sentences.end(),
            [](const ParsedSentence& a, const ParsedSentence& b) {
              if (a.post_id != b.post_id) return a.post_id < b.post_id;
              return a.sent_index < b.sent_index;
            });
  std::vector<Triplet> out;
  for (const auto& s : sentences) {
    auto part = extract_sentence(s);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

std::string triplets_to_jsonl(const std::vector<Triplet>& triplets) {
  std::string out;
  for (const auto& t : triplets) {
    nlohmann::ordered_json j;
    j["post_id"] = t.post_id;
    j["sent_index"] = t.sent_index;
    j["subject"] = t.subject;
    j["verb"] = t.verb;
    j["object"] = t.object;
    j["source"] = to_string(t.source);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Triplet> triplets_from_jsonl(const std::string& bytes) {
  std::vector<Triplet> out;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error("triplets line " + std::to_string(line_no) + ": " + e.what());
    }
    Triplet t;
    t.post_id = j.at("post_id").get<std::string>();
    t.sent_index = j.at("sent_index").get<std::int64_t>();
    t.subject = j.at("subject").get<std::string>();
    t.verb = j.at("verb").get<std::string>();
    t.object = j.at("object").get<std::string>();
    t.source = triplet_source_from_string(j.at("source").get<std::string>());
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace qna
