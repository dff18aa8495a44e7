#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qna/corpus.hpp"
#include "qna/matrix.hpp"

namespace qna {

// One analysis event: either a topic of the fitted model (with a minimum
// document share) or a keyword search over raw text.
struct EventConfig {
  std::string name;
  std::optional<std::size_t> topic;
  double min_share = 0.25;
  std::vector<std::string> keywords;
  double graph_fraction = 0.2;
  bool pooled_graph = false;  // also emit a graph over all groups combined
};

struct PipelineConfig {
  // [paths]
  std::string posts_path;
  std::string parses_path;
  std::string frames_path;  // optional sidecar
  std::string lexicon_path;
  std::string stopwords_path;  // optional
  std::string out_dir = "out";

  // [clean]
  CleanRules clean;

  // [vectorizer]
  Weighting weighting = Weighting::tfidf;
  std::size_t min_df = 1;
  double max_df_ratio = 1.0;
  std::string token_lexicon_path;  // optional user word list for tokenize

  // [sweep]
  std::size_t k_min = 5;
  std::size_t k_max = 50;
  std::size_t max_iter = 200;
  double tol = 1e-4;
  std::optional<std::size_t> select_k;  // manual override of the coherence argmax

  // [coherence]
  std::size_t top_n = 10;
  std::size_t window = 110;

  // [report]
  std::size_t report_top_k = 5;
  std::size_t samples_per_row = 3;
  double sample_fraction = 0.10;

  // [global]
  std::uint64_t seed = 7;
  int threads = 1;

  std::vector<EventConfig> events;
};

PipelineConfig parse_config(const std::string& bytes, const std::string& source_name);
PipelineConfig load_config(const std::string& path);

// Referenced files must exist, fractions must be in (0,1], events must be
// well-formed. Throws Error listing the first violation.
void validate_config(const PipelineConfig& config);

// Canonical parameter serialization used for manifest params hashes.
std::string config_fingerprint(const PipelineConfig& config);

}  // namespace qna
