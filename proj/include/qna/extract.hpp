#pragma once

#include <string>
#include <vector>

#include "qna/conllu.hpp"

namespace qna {

enum class TripletSource { srl, dependency };

const char* to_string(TripletSource s);
TripletSource triplet_source_from_string(const std::string& s);

struct Triplet {
  std::string subject;
  std::string verb;
  std::string object;
  std::string post_id;
  std::int64_t sent_index = 0;
  TripletSource source = TripletSource::srl;

  bool operator==(const Triplet&) const = default;
};

// Surfaces of a 1-based inclusive token range, joined with a space unless
// every token is pure CJK (then joined directly). Internal modifiers are
// never trimmed.
std::string span_text(const ParsedSentence& sentence, std::size_t start, std::size_t end);

// One triplet per frame that has both an ARG0 and an ARG1 span. The verb is
// the predicate surface extended by adjacent compound/particle/negation
// children of the predicate.
std::vector<Triplet> extract_srl(const ParsedSentence& sentence);

// Rule-based fallback for sentences without frames: verb tokens with a
// nominal-subject child and a direct-object child; passives with an agent
// marker map agent -> subject and the promoted subject -> object.
// Coordinated subjects/objects fan out into one triplet per conjunct.
std::vector<Triplet> extract_dep(const ParsedSentence& sentence);

// SRL route when frames exist, dependency route otherwise.
std::vector<Triplet> extract_sentence(const ParsedSentence& sentence);

// Sentences are processed in (post_id, sent_index) order; output is the
// concatenation of per-sentence results.
std::vector<Triplet> extract_all(std::vector<ParsedSentence> sentences);

std::string triplets_to_jsonl(const std::vector<Triplet>& triplets);
std::vector<Triplet> triplets_from_jsonl(const std::string& bytes);

}  // namespace qna
