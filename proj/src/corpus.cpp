#include "qna/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "qna/error.hpp"
#include "qna/utf8.hpp"

namespace qna {

const char* to_string(AuthorCategory c) {
  switch (c) {
    case AuthorCategory::government_media: return "government_media";
    case AuthorCategory::celebrity: return "celebrity";
    case AuthorCategory::other: return "other";
  }
  return "other";
}

AuthorCategory author_category_from_string(const std::string& s) {
  if (s == "government_media") return AuthorCategory::government_media;
  if (s == "celebrity") return AuthorCategory::celebrity;
  if (s == "other") return AuthorCategory::other;
  throw Error("unknown author_category: \"" + s + "\"");
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// days_from_civil).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

int two_digits(const std::string& s, std::size_t pos) {
  if (pos + 1 >= s.size() || !isdigit(static_cast<unsigned char>(s[pos])) ||
      !isdigit(static_cast<unsigned char>(s[pos + 1])))
    return -1;
  return (s[pos] - '0') * 10 + (s[pos + 1] - '0');
}

}  // namespace

EpochSeconds parse_rfc3339(const std::string& s) {
  // YYYY-MM-DD[Tt ]HH:MM:SS[.frac](Z|±hh:mm); fraction parsed and dropped
  auto bad = [&]() -> Error { return Error("invalid RFC 3339 timestamp: \"" + s + "\""); };
  if (s.size() < 20) throw bad();
  for (int i = 0; i < 4; ++i)
    if (!isdigit(static_cast<unsigned char>(s[i]))) throw bad();
  const std::int64_t year = std::stoll(s.substr(0, 4));
  if (s[4] != '-' || s[7] != '-') throw bad();
  const int month = two_digits(s, 5), day = two_digits(s, 8);
  if (month < 1 || month > 12 || day < 1 || day > 31) throw bad();
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') throw bad();
  const int hh = two_digits(s, 11), mi = two_digits(s, 14), ss = two_digits(s, 17);
  if (s[13] != ':' || s[16] != ':') throw bad();
  if (hh < 0 || hh > 23 || mi < 0 || mi > 59 || ss < 0 || ss > 60) throw bad();
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) throw bad();
  }
  if (pos >= s.size()) throw bad();
  std::int64_t offset = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '+' ? 1 : -1;
    const int oh = two_digits(s, pos + 1);
    if (pos + 5 >= s.size() + 1 || pos + 3 >= s.size() || s[pos + 3] != ':') throw bad();
    const int om = two_digits(s, pos + 4);
    if (oh < 0 || oh > 23 || om < 0 || om > 59) throw bad();
    offset = sign * (oh * 3600 + om * 60);
    pos += 6;
  } else {
    throw bad();
  }
  if (pos != s.size()) throw bad();
  const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                            static_cast<unsigned>(day));
  return days * 86400 + hh * 3600 + mi * 60 + std::min(ss, 59) - offset;
}

std::string format_rfc3339(EpochSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
  return buf;
}

void sort_posts(std::vector<Post>& posts) {
  std::sort(posts.begin(), posts.end(), [](const Post& a, const Post& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.id < b.id;
  });
}

namespace {

std::optional<Period> derive_period(const std::vector<Post>& posts) {
  if (posts.empty()) return std::nullopt;
  Period p{posts.front().timestamp, posts.front().timestamp};
  for (const auto& post : posts) {
    p.start = std::min(p.start, post.timestamp);
    p.end = std::max(p.end, post.timestamp);
  }
  return p;
}

std::int64_t get_count(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) throw Error("line " + std::to_string(line) + ": missing key \"" + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    throw Error("line " + std::to_string(line) + ": \"" + std::string(key) + "\" must be an integer");
  const std::int64_t n = v.get<std::int64_t>();
  if (n < 0)
    throw Error("line " + std::to_string(line) + ": \"" + std::string(key) + "\" must be >= 0");
  return n;
}

std::string get_string(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw Error("line " + std::to_string(line) + ": missing string key \"" + key + "\"");
  return j.at(key).get<std::string>();
}

}  // namespace

Corpus posts_from_jsonl(const std::string& bytes, const std::string& provenance,
                        LoadReport* report) {
  Corpus corpus;
  corpus.provenance = provenance;
  LoadReport local;
  std::unordered_set<std::string> seen_ids;
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
      throw Error("malformed JSON at line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object()) throw Error("line " + std::to_string(line_no) + ": not a JSON object");
    Post p;
    p.id = get_string(j, "id", line_no);
    if (!seen_ids.insert(p.id).second)
      throw Error("duplicate post id \"" + p.id + "\" at line " + std::to_string(line_no));
    p.author_id = get_string(j, "author_id", line_no);
    try {
      p.author_category = author_category_from_string(get_string(j, "author_category", line_no));
      p.timestamp = parse_rfc3339(get_string(j, "timestamp", line_no));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
    p.text = get_string(j, "text", line_no);
    p.attitude_count = get_count(j, "attitude_count", line_no);
    p.comments_count = get_count(j, "comments_count", line_no);
    p.reposts_count = get_count(j, "reposts_count", line_no);
    if (p.text.empty()) {
      ++local.rejected_empty_text;
      local.rejected_lines.push_back(line_no);
      continue;
    }
    corpus.posts.push_back(std::move(p));
  }
  sort_posts(corpus.posts);
  corpus.period = derive_period(corpus.posts);
  local.loaded = corpus.posts.size();
  local.period_undefined = !corpus.period.has_value();
  if (report) *report = local;
  return corpus;
}

Corpus load_posts(const std::string& path, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open posts file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return posts_from_jsonl(buf.str(), path, report);
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& p : corpus.posts) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["author_id"] = p.author_id;
    j["author_category"] = to_string(p.author_category);
    j["timestamp"] = format_rfc3339(p.timestamp);
    j["text"] = p.text;
    j["attitude_count"] = p.attitude_count;
    j["comments_count"] = p.comments_count;
    j["reposts_count"] = p.reposts_count;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_posts(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write posts file: " + path);
  out << to_jsonl(corpus);
}

Corpus deduplicate(const Corpus& corpus) {
  Corpus result;
  result.provenance = corpus.provenance;
  result.period = corpus.period;
  std::unordered_map<std::string, std::size_t> best;  // key -> index into result.posts
  for (const auto& p : corpus.posts) {
    std::string key = p.author_id;
    key.push_back('\0');
    key += p.text;
    auto [it, inserted] = best.emplace(key, result.posts.size());
    if (inserted) {
      result.posts.push_back(p);
      continue;
    }
    Post& kept = result.posts[it->second];
    if (p.timestamp < kept.timestamp ||
        (p.timestamp == kept.timestamp && p.id < kept.id)) {
      kept = p;
    }
  }
  sort_posts(result.posts);
  return result;
}

namespace {

bool is_url_char(char32_t cp) {
  if (cp > 0x7E) return false;
  if (utf8::is_word_char(cp)) return true;
  switch (static_cast<char>(cp)) {
    case '-': case '.': case '/': case ':': case '?': case '#': case '%':
    case '&': case '=': case '~': case '+': case ';': case '!': case '*':
    case '(': case ')': case '\'': case '$': case ',': case '[': case ']':
    case '@':
      return true;
    default:
      return false;
  }
}

bool match_scheme(std::string_view s, std::size_t i) {
  static const char* kSchemes[] = {"http://", "https://"};
  for (const char* scheme : kSchemes) {
    std::string_view sv(scheme);
    if (s.size() - i < sv.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < sv.size(); ++k) {
      char c = s[i + k];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (c != sv[k]) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

std::string normalize_ws(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  bool pending = false;
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

}  // namespace

std::string clean_text(const std::string& text, const CleanRules& rules) {
  std::string pass1;
  pass1.reserve(text.size());
  std::size_t i = 0;
  std::size_t pending_close = std::string::npos;  // byte pos of the closing '#'
  while (i < text.size()) {
    const std::size_t at = i;
    if (rules.strip_urls && match_scheme(text, i)) {
      // consume scheme and URL body, leave a separator
      std::size_t j = i;
      while (j < text.size()) {
        std::size_t k = j;
        if (!is_url_char(utf8::decode(text, k))) break;
        j = k;
      }
      i = j;
      pass1.push_back(' ');
      continue;
    }
    const char32_t cp = utf8::decode(text, i);
    if (rules.strip_mentions && cp == '@') {
      while (i < text.size()) {
        std::size_t k = i;
        if (!utf8::is_word_char(utf8::decode(text, k))) break;
        i = k;
      }
      pass1.push_back(' ');
      continue;
    }
    if (rules.unwrap_hashtags && cp == '#') {
      // markers dropped in pairs; inner text is retained
      if (at == pending_close) {
        pending_close = std::string::npos;
        continue;
      }
      const auto close = text.find('#', i);
      if (close != std::string::npos) {
        pending_close = close;
        continue;
      }
      // unmatched marker falls through to the symbol rule
    }
    if (rules.drop_digits && utf8::is_digit(cp)) continue;
    if (rules.drop_symbols && !utf8::is_word_char(cp) && !utf8::is_space(cp)) {
      pass1.push_back(' ');
      continue;
    }
    pass1.append(text, at, i - at);
  }
  if (rules.stopwords.empty()) return normalize_ws(pass1);
  std::string out;
  for (const auto& tok : tokenize(pass1)) {
    if (rules.stopwords.count(tok)) continue;
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::vector<std::string>& lexicon) {
  // lexicon entries grouped by first byte; longest entry wins at each position
  std::vector<std::vector<const std::string*>> by_first;
  if (!lexicon.empty()) {
    by_first.resize(256);
    for (const auto& w : lexicon) {
      if (w.empty()) continue;
      by_first[static_cast<unsigned char>(w[0])].push_back(&w);
    }
    for (auto& bucket : by_first) {
      std::sort(bucket.begin(), bucket.end(), [](const std::string* a, const std::string* b) {
        if (a->size() != b->size()) return a->size() > b->size();
        return *a < *b;
      });
    }
  }
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!lexicon.empty()) {
      const auto& bucket = by_first[static_cast<unsigned char>(text[i])];
      const std::string* hit = nullptr;
      for (const std::string* w : bucket) {
        if (text.compare(i, w->size(), *w) == 0) {
          hit = w;
          break;
        }
      }
      if (hit) {
        tokens.push_back(*hit);
        i += hit->size();
        continue;
      }
    }
    std::size_t k = i;
    const char32_t cp = utf8::decode(text, k);
    if (utf8::is_cjk(cp)) {
      tokens.push_back(text.substr(i, k - i));
      i = k;
      continue;
    }
    if (!utf8::is_word_char(cp)) {
      i = k;
      continue;
    }
    // maximal run of non-CJK word characters
    std::size_t end = k;
    while (end < text.size()) {
      std::size_t next = end;
      const char32_t c2 = utf8::decode(text, next);
      if (!utf8::is_word_char(c2) || utf8::is_cjk(c2)) break;
      end = next;
    }
    tokens.push_back(text.substr(i, end - i));
    i = end;
  }
  return tokens;
}

Corpus filter_accounts(const Corpus& corpus, const std::set<AuthorCategory>& categories) {
  if (categories.empty()) throw Error("filter_accounts: empty category set");
  Corpus result;
  result.provenance = corpus.provenance;
  result.period = corpus.period;
  for (const auto& p : corpus.posts)
    if (categories.count(p.author_category)) result.posts.push_back(p);
  return result;
}

Corpus keyword_subset(const Corpus& corpus, const std::vector<std::string>& phrases) {
  if (phrases.empty()) throw Error("keyword_subset: empty phrase list");
  for (const auto& ph : phrases)
    if (ph.empty()) throw Error("keyword_subset: empty phrase");
  Corpus result;
  result.provenance = corpus.provenance;
  result.period = corpus.period;
  for (const auto& p : corpus.posts) {
    for (const auto& ph : phrases) {
      if (p.text.find(ph) != std::string::npos) {
        result.posts.push_back(p);
        break;
      }
    }
  }
  return result;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open stopword file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    // trim
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t");
    words.insert(line.substr(b, e - b + 1));
  }
  return words;
}

}  // namespace qna
