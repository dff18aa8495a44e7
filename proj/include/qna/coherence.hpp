#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qna/nmf.hpp"

namespace qna {

struct CoherenceReport {
  std::vector<double> per_topic;
  double mean = 0.0;
  std::size_t top_n = 0;
  std::size_t window = 0;
  std::vector<std::size_t> flagged_topics;  // fewer than top_n positive terms
};

struct CoherenceParams {
  std::size_t top_n = 10;
  std::size_t window = 110;
  int threads = 1;
};

// C_V topic coherence. Word probabilities come from boolean sliding windows
// of the given width over each token stream (a stream shorter than the
// window contributes its single whole-stream window). Every word pair gets
// NPMI(w,w') = ln((P(w,w')+e)/(P(w)P(w')+e)) / -ln(P(w,w')+e) with e=1e-12;
// a word's context vector over the topic's top terms (self entry fixed at 1)
// is compared by cosine against the summed set vector, and the topic score
// is the mean cosine.
CoherenceReport coherence_cv(const NmfModel& model,
                             const std::vector<std::vector<std::string>>& streams,
                             const CoherenceParams& params = {});

struct SweepEntry {
  std::size_t k = 0;
  double mean_coherence = 0.0;
  NmfModel model;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // k_min..k_max inclusive, step 1
  std::size_t selected_k = 0;       // argmax mean coherence, ties to smaller k
};

SweepResult sweep_k(const TermDocMatrix& matrix,
                    const std::vector<std::vector<std::string>>& streams, std::size_t k_min,
                    std::size_t k_max, std::uint64_t seed, const NmfOptions& fit_options = {},
                    const CoherenceParams& coherence_params = {});

std::string sweep_csv(const SweepResult& sweep);
void save_coherence(const CoherenceReport& report, const std::string& path);

}  // namespace qna
