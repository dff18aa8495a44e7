#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qna {

struct TokenRow {
  std::size_t index = 0;  // 1-based
  std::string surface;
  std::optional<std::string> lemma;
  std::string upos;
  std::size_t head = 0;  // 0 = root
  std::string deprel;
};

struct SrlArgument {
  std::string role;       // "ARG0", "ARG1", "ARGM-TMP", ...
  std::size_t start = 0;  // 1-based, inclusive
  std::size_t end = 0;
};

struct SrlFrame {
  std::size_t predicate = 0;  // token index
  std::vector<SrlArgument> arguments;

  const SrlArgument* find(const std::string& role) const;
};

struct ParsedSentence {
  std::string post_id;
  std::int64_t sent_index = 0;
  std::vector<TokenRow> tokens;
  std::vector<SrlFrame> frames;
};

// Throws Error naming post_id/sent_index when heads are out of range, a token
// is its own head, no root exists, a frame span leaves the token range, or a
// frame carries more than one ARG0/ARG1.
void validate_sentence(const ParsedSentence& s);

// CoNLL-U (10 tab-separated columns, blank-line separated sentences).
// Sentence identity comes from "# post_id = ..." / "# sent_index = ..."
// comments; SRL frames ride in MISC as Frame=pred:ROLE=start-end,... entries.
std::vector<ParsedSentence> parse_conllu(const std::string& bytes,
                                         const std::string& source_name);
std::vector<ParsedSentence> load_conllu(const std::string& path);

// Reads a .conllu file or every *.conllu file in a directory (sorted by name).
std::vector<ParsedSentence> load_parses(const std::string& path);

// Sidecar JSON-lines frames keyed by (post_id, sent_index); frames found
// there replace whatever the CoNLL-U carried for that sentence.
void apply_frames_sidecar(std::vector<ParsedSentence>& sentences, const std::string& path);

std::string to_conllu(const std::vector<ParsedSentence>& sentences);

}  // namespace qna
