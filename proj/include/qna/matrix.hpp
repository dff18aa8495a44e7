#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qna/corpus.hpp"

namespace qna {

enum class Weighting { count, tfidf };

const char* to_string(Weighting w);
Weighting weighting_from_string(const std::string& s);

// Sparse docs x terms matrix in both row (CSR) and column (CSC) layout.
// Stored weights are strictly positive; zeros are implicit. Vocab is sorted
// lexicographically. Rows that lost every token to cleaning/df-filtering are
// kept as all-zero and flagged.
struct TermDocMatrix {
  std::vector<std::string> vocab;
  std::vector<std::string> doc_ids;
  Weighting weighting = Weighting::tfidf;

  // CSR
  std::vector<std::size_t> row_ptr;   // docs + 1
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;
  // CSC (same nonzeros, column order)
  std::vector<std::size_t> col_ptr;   // terms + 1
  std::vector<std::uint32_t> row_idx;
  std::vector<double> cvalues;

  std::vector<std::uint8_t> empty_doc;  // 1 when the row is all-zero

  std::size_t docs() const { return doc_ids.size(); }
  std::size_t terms() const { return vocab.size(); }
  std::size_t nnz() const { return values.size(); }
  double total_weight() const;

  void build_csc();  // derives CSC from CSR
};

// Cleaned, tokenized documents; the shared input of vectorization and
// coherence counting.
std::vector<std::vector<std::string>> token_streams(
    const Corpus& corpus, const CleanRules& rules,
    const std::vector<std::string>& lexicon = {});

// Terms with document frequency outside [min_df, max_df_ratio * docs] are
// dropped. tfidf weight = tf * (log((1+N)/(1+df)) + 1).
TermDocMatrix build_matrix(const Corpus& corpus, const CleanRules& rules,
                           Weighting weighting, std::size_t min_df, double max_df_ratio,
                           const std::vector<std::string>& lexicon = {});

TermDocMatrix build_matrix_from_streams(const std::vector<std::vector<std::string>>& streams,
                                        const std::vector<std::string>& doc_ids,
                                        Weighting weighting, std::size_t min_df,
                                        double max_df_ratio);

// Artifact form: meta.json + weights.bin (per row: u32 nnz, then pairs of
// u32 term index and f64 weight, little endian).
void save_matrix(const TermDocMatrix& m, const std::string& dir);
TermDocMatrix load_matrix(const std::string& dir);

}  // namespace qna
