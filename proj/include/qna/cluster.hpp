#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qna/corpus.hpp"
#include "qna/lexicon.hpp"

namespace qna {

struct NarrativeCluster {
  std::array<std::string, 3> canonical;  // subject, verb, object
  std::uint64_t count = 0;
  std::vector<Triplet> members;
  std::array<std::uint64_t, 3> by_group{};  // indexed by AuthorCategory

  std::uint64_t group_count(AuthorCategory c) const {
    return by_group[static_cast<int>(c)];
  }
};

// Canonicalizes every triplet, groups by exact canonical tuple, counts and
// splits counts by the posting account's category. Sorted by count
// descending, ties by canonical tuple. Sum of counts equals the input size.
std::vector<NarrativeCluster> cluster(const std::vector<Triplet>& triplets,
                                      const SynonymLexicon& lexicon, const Corpus& corpus);

// ceil(fraction * N) posts drawn without replacement by a seeded partial
// shuffle over the sorted post list; output keeps corpus order.
Corpus sample_fraction(const Corpus& corpus, double fraction, std::uint64_t seed);

struct ReportRow {
  AuthorCategory group = AuthorCategory::other;
  std::size_t rank = 0;  // 1-based within the group
  std::array<std::string, 3> canonical;
  std::uint64_t count = 0;  // this group's share of the cluster
  std::vector<std::string> samples;
};

struct Report {
  std::vector<ReportRow> rows;
  std::size_t top_k = 0;
  std::size_t samples_per_row = 0;
};

// Top-k clusters per author group by group count; representative posts are
// the group's highest-engagement posts among the cluster members (ties by
// earliest timestamp, then id).
Report top_table(const std::vector<NarrativeCluster>& clusters, std::size_t k,
                 const Corpus& corpus, std::size_t samples_per_row);

// Aligned text with the ARG0 / B-V / ARG1 / counts / sample sentence(s)
// columns. Byte-stable for equal inputs.
std::string render_report_text(const Report& report);
std::string render_report_json(const Report& report);

std::string clusters_to_json(const std::vector<NarrativeCluster>& clusters);
std::vector<NarrativeCluster> clusters_from_json(const std::string& bytes);

}  // namespace qna
