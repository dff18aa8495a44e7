#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qna/extract.hpp"

namespace qna {

enum class Role { subject = 0, verb = 1, object = 2 };

// A whole-triplet rewrite: pattern slots are literals or "*" (match any);
// replacement slots are literals or "*" (keep the matched value).
struct TripletRule {
  std::array<std::string, 3> pattern;
  std::array<std::string, 3> replacement;
  int specificity = 0;  // number of exact pattern slots
  std::size_t order = 0;

  bool matches(const Triplet& t) const;
};

// Human-authored surface-variant mapping. Validation rejects anything that
// would make canonicalize unstable under re-application: variants with two
// canonicals, canonical/variant chains, rule outputs that other rules would
// rewrite, and rule patterns written against canonical forms without
// covering their variants.
struct SynonymLexicon {
  std::array<std::map<std::string, std::string>, 3> role_maps;  // variant -> canonical
  std::vector<TripletRule> triplet_rules;

  bool empty() const;
  const std::string& map_role(Role role, const std::string& s) const;
};

SynonymLexicon parse_lexicon(const std::string& bytes, const std::string& source_name);
SynonymLexicon load_lexicon(const std::string& path);

// Most specific matching triplet rule first (exact slots beat wildcards,
// earlier declaration breaks ties), then per-slot role maps. Stable under
// re-application for any lexicon that passed validation.
Triplet canonicalize(const Triplet& triplet, const SynonymLexicon& lexicon);

}  // namespace qna
