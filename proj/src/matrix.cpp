#include "qna/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qna/error.hpp"

namespace qna {

const char* to_string(Weighting w) { return w == Weighting::count ? "count" : "tfidf"; }

Weighting weighting_from_string(const std::string& s) {
  if (s == "count") return Weighting::count;
  if (s == "tfidf") return Weighting::tfidf;
  throw Error("unknown weighting: \"" + s + "\"");
}

double TermDocMatrix::total_weight() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

void TermDocMatrix::build_csc() {
  const std::size_t t = terms();
  col_ptr.assign(t + 1, 0);
  row_idx.assign(nnz(), 0);
  cvalues.assign(nnz(), 0.0);
  for (std::uint32_t c : col_idx) ++col_ptr[c + 1];
  for (std::size_t j = 0; j < t; ++j) col_ptr[j + 1] += col_ptr[j];
  std::vector<std::size_t> next(col_ptr.begin(), col_ptr.end() - 1);
  for (std::size_t d = 0; d < docs(); ++d) {
    for (std::size_t p = row_ptr[d]; p < row_ptr[d + 1]; ++p) {
      const std::size_t slot = next[col_idx[p]]++;
      row_idx[slot] = static_cast<std::uint32_t>(d);
      cvalues[slot] = values[p];
    }
  }
}

std::vector<std::vector<std::string>> token_streams(const Corpus& corpus,
                                                    const CleanRules& rules,
                                                    const std::vector<std::string>& lexicon) {
  std::vector<std::vector<std::string>> streams;
  streams.reserve(corpus.posts.size());
  for (const auto& p : corpus.posts)
    streams.push_back(tokenize(clean_text(p.text, rules), lexicon));
  return streams;
}

TermDocMatrix build_matrix_from_streams(const std::vector<std::vector<std::string>>& streams,
                                        const std::vector<std::string>& doc_ids,
                                        Weighting weighting, std::size_t min_df,
                                        double max_df_ratio) {
  if (streams.size() != doc_ids.size())
    throw Error("build_matrix: stream/doc id count mismatch");
  if (min_df < 1) throw Error("build_matrix: min_df must be >= 1");
  if (!(max_df_ratio > 0.0) || max_df_ratio > 1.0)
    throw Error("build_matrix: max_df_ratio must be in (0, 1]");
  {
    std::map<std::string, std::size_t> seen;
    for (std::size_t d = 0; d < doc_ids.size(); ++d)
      if (!seen.emplace(doc_ids[d], d).second)
        throw Error("build_matrix: duplicate doc id \"" + doc_ids[d] + "\"");
  }

  const std::size_t n_docs = streams.size();
  // document frequency over distinct terms per doc; std::map keeps the vocab
  // sorted as required
  std::map<std::string, std::size_t> df;
  for (const auto& stream : streams) {
    std::map<std::string, bool> seen;
    for (const auto& tok : stream)
      if (seen.emplace(tok, true).second) ++df[tok];
  }

  TermDocMatrix m;
  m.weighting = weighting;
  m.doc_ids = doc_ids;
  const double df_cap = max_df_ratio * static_cast<double>(n_docs);
  std::map<std::string, std::uint32_t> term_index;
  std::vector<std::size_t> kept_df;
  for (const auto& [term, freq] : df) {
    if (freq < min_df) continue;
    if (static_cast<double>(freq) > df_cap) continue;
    term_index.emplace(term, static_cast<std::uint32_t>(m.vocab.size()));
    m.vocab.push_back(term);
    kept_df.push_back(freq);
  }

  m.row_ptr.assign(n_docs + 1, 0);
  m.empty_doc.assign(n_docs, 0);
  bool any_nonzero = false;
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::map<std::uint32_t, double> tf;
    for (const auto& tok : streams[d]) {
      auto it = term_index.find(tok);
      if (it != term_index.end()) tf[it->second] += 1.0;
    }
    for (const auto& [col, count] : tf) {
      double w = count;
      if (weighting == Weighting::tfidf) {
        const double idf =
            std::log((1.0 + static_cast<double>(n_docs)) /
                     (1.0 + static_cast<double>(kept_df[col]))) + 1.0;
        w = count * idf;
      }
      m.col_idx.push_back(col);
      m.values.push_back(w);
    }
    m.row_ptr[d + 1] = m.values.size();
    if (tf.empty())
      m.empty_doc[d] = 1;
    else
      any_nonzero = true;
  }
  if (!any_nonzero) throw Error("build_matrix: every document is empty after cleaning");
  m.build_csc();
  return m;
}

TermDocMatrix build_matrix(const Corpus& corpus, const CleanRules& rules, Weighting weighting,
                           std::size_t min_df, double max_df_ratio,
                           const std::vector<std::string>& lexicon) {
  if (corpus.empty()) throw Error("build_matrix: empty corpus");
  std::vector<std::string> ids;
  ids.reserve(corpus.posts.size());
  for (const auto& p : corpus.posts) ids.push_back(p.id);
  return build_matrix_from_streams(token_streams(corpus, rules, lexicon), ids, weighting,
                                   min_df, max_df_ratio);
}

namespace {

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& at) {
  if (at + sizeof(T) > in.size()) throw Error("matrix weights.bin: truncated");
  T v;
  std::memcpy(&v, in.data() + at, sizeof(T));
  at += sizeof(T);
  return v;
}

}  // namespace

void save_matrix(const TermDocMatrix& m, const std::string& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json meta;
  meta["weighting"] = to_string(m.weighting);
  meta["docs"] = m.docs();
  meta["terms"] = m.terms();
  meta["nnz"] = m.nnz();
  meta["doc_ids"] = m.doc_ids;
  meta["vocab"] = m.vocab;
  nlohmann::json flagged = nlohmann::json::array();
  for (std::size_t d = 0; d < m.docs(); ++d)
    if (m.empty_doc[d]) flagged.push_back(m.doc_ids[d]);
  meta["empty_docs"] = flagged;
  std::ofstream mf(dir + "/meta.json", std::ios::binary);
  if (!mf) throw Error("cannot write " + dir + "/meta.json");
  mf << meta.dump(2) << '\n';

  std::string blob;
  blob.reserve(m.nnz() * 12 + m.docs() * 4);
  for (std::size_t d = 0; d < m.docs(); ++d) {
    put<std::uint32_t>(blob, static_cast<std::uint32_t>(m.row_ptr[d + 1] - m.row_ptr[d]));
    for (std::size_t p = m.row_ptr[d]; p < m.row_ptr[d + 1]; ++p) {
      put<std::uint32_t>(blob, m.col_idx[p]);
      put<double>(blob, m.values[p]);
    }
  }
  std::ofstream wf(dir + "/weights.bin", std::ios::binary);
  if (!wf) throw Error("cannot write " + dir + "/weights.bin");
  wf.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

TermDocMatrix load_matrix(const std::string& dir) {
  std::ifstream mf(dir + "/meta.json", std::ios::binary);
  if (!mf) throw Error("cannot open " + dir + "/meta.json");
  nlohmann::json meta = nlohmann::json::parse(mf, nullptr, true);
  TermDocMatrix m;
  m.weighting = weighting_from_string(meta.at("weighting").get<std::string>());
  m.doc_ids = meta.at("doc_ids").get<std::vector<std::string>>();
  m.vocab = meta.at("vocab").get<std::vector<std::string>>();

  std::ifstream wf(dir + "/weights.bin", std::ios::binary);
  if (!wf) throw Error("cannot open " + dir + "/weights.bin");
  std::ostringstream buf;
  buf << wf.rdbuf();
  const std::string blob = buf.str();
  std::size_t at = 0;
  m.row_ptr.assign(m.docs() + 1, 0);
  m.empty_doc.assign(m.docs(), 0);
  for (std::size_t d = 0; d < m.docs(); ++d) {
    const auto cnt = take<std::uint32_t>(blob, at);
    for (std::uint32_t k = 0; k < cnt; ++k) {
      const auto col = take<std::uint32_t>(blob, at);
      const auto w = take<double>(blob, at);
      if (col >= m.terms()) throw Error("matrix weights.bin: term index out of range");
      m.col_idx.push_back(col);
      m.values.push_back(w);
    }
    m.row_ptr[d + 1] = m.values.size();
    if (cnt == 0) m.empty_doc[d] = 1;
  }
  if (at != blob.size()) throw Error("matrix weights.bin: trailing bytes");
  m.build_csc();
  return m;
}

}  // namespace qna
