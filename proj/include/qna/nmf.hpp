#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qna/corpus.hpp"
#include "qna/matrix.hpp"

namespace qna {

struct NmfModel {
  std::size_t k = 0;
  std::size_t n_docs = 0;
  std::size_t n_terms = 0;
  std::vector<double> doc_topic;   // W, docs x k, row major
  std::vector<double> topic_term;  // H, k x terms, row major
  std::vector<double> loss_history;  // objective before updates, then per iteration
  std::uint64_t seed = 0;
  std::size_t iterations_run = 0;

  std::vector<std::string> vocab;    // copied from the fitted matrix
  std::vector<std::string> doc_ids;

  double w(std::size_t d, std::size_t t) const { return doc_topic[d * k + t]; }
  double h(std::size_t t, std::size_t j) const { return topic_term[t * n_terms + j]; }
};

struct NmfOptions {
  std::size_t max_iter = 200;
  double tol = 1e-4;  // relative loss change
  int threads = 1;
  // Test hook, called after every iteration with the current factors.
  std::function<void(std::size_t iter, const std::vector<double>& w,
                     const std::vector<double>& h)> on_iteration;
};

// Lee-Seung multiplicative updates for the Frobenius objective. All
// cross-row reductions run in a fixed order, so the result is bitwise
// identical for any thread count.
NmfModel fit_nmf(const TermDocMatrix& matrix, std::size_t k, std::uint64_t seed,
                 const NmfOptions& options = {});

// Terms of one topic sorted by weight descending, ties lexicographic.
// Only positive-weight terms are reported.
std::vector<std::pair<std::string, double>> top_terms(const NmfModel& model,
                                                      std::size_t topic, std::size_t n);

struct AssignReport {
  std::size_t kept = 0;
  std::size_t zero_rows_excluded = 0;
};

// Keeps posts whose argmax topic equals `topic` (ties to the smaller index)
// and whose topic share W[d,topic]/sum(W[d,:]) reaches min_share.
Corpus assign_and_subset(const NmfModel& model, const Corpus& corpus, std::size_t topic,
                         double min_share, AssignReport* report = nullptr);

// Argmax topic per document; -1 for all-zero rows.
std::vector<int> argmax_topics(const NmfModel& model);

void save_model(const NmfModel& model, const std::string& dir);
NmfModel load_model(const std::string& dir);

}  // namespace qna
