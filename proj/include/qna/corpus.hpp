#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qna {

enum class AuthorCategory { government_media, celebrity, other };

const char* to_string(AuthorCategory c);
AuthorCategory author_category_from_string(const std::string& s);

// Seconds since the Unix epoch, UTC. Weibo-style data carries second
// precision; fractional seconds in inputs are accepted and dropped.
using EpochSeconds = std::int64_t;

EpochSeconds parse_rfc3339(const std::string& s);  // throws Error on bad input
std::string format_rfc3339(EpochSeconds t);        // canonical "...Z" form

struct Post {
  std::string id;
  std::string author_id;
  AuthorCategory author_category = AuthorCategory::other;
  EpochSeconds timestamp = 0;
  std::string text;
  std::int64_t attitude_count = 0;
  std::int64_t comments_count = 0;
  std::int64_t reposts_count = 0;

  std::int64_t engagement() const { return attitude_count + comments_count + reposts_count; }
};

struct Period {
  EpochSeconds start = 0;
  EpochSeconds end = 0;
};

// Posts are kept sorted by (timestamp, id); all operations preserve that
// order, so iteration is deterministic.
struct Corpus {
  std::vector<Post> posts;
  std::string provenance;
  std::optional<Period> period;

  std::size_t size() const { return posts.size(); }
  bool empty() const { return posts.empty(); }
};

struct CleanRules {
  bool strip_urls = true;
  bool strip_mentions = true;
  bool unwrap_hashtags = true;
  bool drop_digits = true;
  bool drop_symbols = true;
  std::set<std::string> stopwords;
};

struct LoadReport {
  std::size_t loaded = 0;
  std::size_t rejected_empty_text = 0;
  std::vector<std::size_t> rejected_lines;  // 1-based line numbers
  bool period_undefined = false;            // empty corpus after load
};

// JSON-lines reader. Malformed lines and duplicate ids are hard errors;
// empty-text records are rejected into the report, never silently dropped.
Corpus load_posts(const std::string& path, LoadReport* report = nullptr);
Corpus posts_from_jsonl(const std::string& bytes, const std::string& provenance,
                        LoadReport* report = nullptr);

// Canonical serialization: fixed key order, canonical UTC timestamps, one
// object per line. load(save(c)) round-trips bit-exactly.
std::string to_jsonl(const Corpus& corpus);
void save_posts(const Corpus& corpus, const std::string& path);

void sort_posts(std::vector<Post>& posts);

// Keeps one post per exact (author_id, text) pair; earliest timestamp wins,
// then smallest id. Idempotent.
Corpus deduplicate(const Corpus& corpus);

// Character-level cleaning followed by token-level stopword removal.
// Hashtag markers are dropped but their inner text is kept: narratives live
// inside hashtags. With an empty stopword list the text is only whitespace-
// normalized after the character passes.
std::string clean_text(const std::string& text, const CleanRules& rules);

// Deterministic segmentation: longest match against the user lexicon where
// provided, otherwise word-character runs with CJK code points emitted one
// token each.
std::vector<std::string> tokenize(const std::string& text,
                                  const std::vector<std::string>& lexicon = {});

Corpus filter_accounts(const Corpus& corpus, const std::set<AuthorCategory>& categories);

// Substring match of any phrase on the raw (uncleaned) text.
Corpus keyword_subset(const Corpus& corpus, const std::vector<std::string>& phrases);

// One token per line, '#' comments, blank lines ignored.
std::set<std::string> load_stopwords(const std::string& path);

}  // namespace qna
