#include "qna/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "qna/error.hpp"
#include "qna/rng.hpp"
#include "qna/utf8.hpp"

namespace qna {

std::vector<NarrativeCluster> cluster(const std::vector<Triplet>& triplets,
                                      const SynonymLexicon& lexicon, const Corpus& corpus) {
  std::unordered_map<std::string, AuthorCategory> category_of;
  for (const auto& p : corpus.posts) category_of.emplace(p.id, p.author_category);

  std::map<std::array<std::string, 3>, NarrativeCluster> groups;
  for (const auto& t : triplets) {
    const auto it = category_of.find(t.post_id);
    if (it == category_of.end())
      throw Error("cluster: triplet references unknown post \"" + t.post_id + "\"");
    const Triplet c = canonicalize(t, lexicon);
    const std::array<std::string, 3> key{c.subject, c.verb, c.object};
    auto& g = groups[key];
    g.canonical = key;
    ++g.count;
    ++g.by_group[static_cast<int>(it->second)];
    g.members.push_back(t);
  }
  std::vector<NarrativeCluster> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  std::sort(out.begin(), out.end(), [](const NarrativeCluster& a, const NarrativeCluster& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.canonical < b.canonical;
  });
  return out;
}

namespace {

std::size_t ceil_fraction(double fraction, std::size_t n) {
  // guard against 0.1 * 100 -> 10.000000000000002
  const double raw = fraction * static_cast<double>(n);
  auto m = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  if (m < 1) m = 1;
  return std::min(m, n);
}

}  // namespace

Corpus sample_fraction(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (corpus.empty()) throw Error("sample_fraction: empty corpus");
  if (!(fraction > 0.0) || fraction > 1.0)
    throw Error("sample_fraction: fraction must be in (0, 1]");
  const std::size_t n = corpus.size();
  const std::size_t m = ceil_fraction(fraction, n);

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());

  Corpus out;
  out.provenance = corpus.provenance;
  out.period = corpus.period;
  out.posts.reserve(m);
  for (std::size_t i : idx) out.posts.push_back(corpus.posts[i]);
  return out;
}

Report top_table(const std::vector<NarrativeCluster>& clusters, std::size_t k,
                 const Corpus& corpus, std::size_t samples_per_row) {
  if (k < 1) throw Error("top_table: k must be >= 1");
  std::unordered_map<std::string, const Post*> post_of;
  for (const auto& p : corpus.posts) post_of.emplace(p.id, &p);

  Report report;
  report.top_k = k;
  report.samples_per_row = samples_per_row;

  const AuthorCategory order[] = {AuthorCategory::government_media, AuthorCategory::celebrity,
                                  AuthorCategory::other};
  for (AuthorCategory group : order) {
    std::vector<const NarrativeCluster*> ranked;
    for (const auto& c : clusters)
      if (c.group_count(group) > 0) ranked.push_back(&c);
    if (ranked.empty()) continue;
    std::sort(ranked.begin(), ranked.end(),
              [&](const NarrativeCluster* a, const NarrativeCluster* b) {
                if (a->group_count(group) != b->group_count(group))
                  return a->group_count(group) > b->group_count(group);
                return a->canonical < b->canonical;
              });
    if (ranked.size() > k) ranked.resize(k);
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      const auto& c = *ranked[r];
      ReportRow row;
      row.group = group;
      row.rank = r + 1;
      row.canonical = c.canonical;
      row.count = c.group_count(group);
      // representative posts of this group, engagement first
      std::vector<const Post*> candidates;
      for (const auto& member : c.members) {
        const auto it = post_of.find(member.post_id);
        if (it == post_of.end() || it->second->author_category != group) continue;
        if (std::find(candidates.begin(), candidates.end(), it->second) == candidates.end())
          candidates.push_back(it->second);
      }
      std::sort(candidates.begin(), candidates.end(), [](const Post* a, const Post* b) {
        if (a->engagement() != b->engagement()) return a->engagement() > b->engagement();
        if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
        return a->id < b->id;
      });
      if (candidates.size() > samples_per_row) candidates.resize(samples_per_row);
      for (const Post* p : candidates) row.samples.push_back(p->text);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
  std::string out = s;
  const std::size_t len = utf8::length(s);
  if (len < width) out.append(width - len, ' ');
  return out;
}

}  // namespace

std::string render_report_text(const Report& report) {
  static const char* kHeaders[5] = {"ARG0", "B-V", "ARG1", "counts", "sample sentence(s)"};
  std::string out;
  const AuthorCategory order[] = {AuthorCategory::government_media, AuthorCategory::celebrity,
                                  AuthorCategory::other};
  for (AuthorCategory group : order) {
    std::vector<const ReportRow*> rows;
    for (const auto& r : report.rows)
      if (r.group == group) rows.push_back(&r);
    if (rows.empty()) continue;

    std::size_t width[4];
    for (int c = 0; c < 4; ++c) width[c] = utf8::length(kHeaders[c]);
    for (const auto* r : rows) {
      for (int c = 0; c < 3; ++c) width[c] = std::max(width[c], utf8::length(r->canonical[c]));
      width[3] = std::max(width[3], std::to_string(r->count).size());
    }

    if (!out.empty()) out += "\n";
    out += "== ";
    out += to_string(group);
    out += " ==\n";
    for (int c = 0; c < 4; ++c) {
      out += pad(kHeaders[c], width[c]);
      out += " | ";
    }
    out += kHeaders[4];
    out += '\n';
    for (int c = 0; c < 4; ++c) {
      out.append(width[c], '-');
      out += "-+-";
    }
    out.append(utf8::length(kHeaders[4]), '-');
    out += '\n';
    for (const auto* r : rows) {
      const std::string count = std::to_string(r->count);
      const std::size_t lines = std::max<std::size_t>(1, r->samples.size());
      for (std::size_t l = 0; l < lines; ++l) {
        out += pad(l == 0 ? r->canonical[0] : "", width[0]);
        out += " | ";
        out += pad(l == 0 ? r->canonical[1] : "", width[1]);
        out += " | ";
        out += pad(l == 0 ? r->canonical[2] : "", width[2]);
        out += " | ";
        out += pad(l == 0 ? count : "", width[3]);
        out += " | ";
        if (l < r->samples.size()) out += r->samples[l];
        out += '\n';
      }
    }
  }
  return out;
}

std::string render_report_json(const Report& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["group"] = to_string(r.group);
    j["rank"] = r.rank;
    j["subject"] = r.canonical[0];
    j["verb"] = r.canonical[1];
    j["object"] = r.canonical[2];
    j["count"] = r.count;
    j["samples"] = r.samples;
    rows.push_back(std::move(j));
  }
  return rows.dump(2) + "\n";
}

std::string clusters_to_json(const std::vector<NarrativeCluster>& clusters) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : clusters) {
    nlohmann::ordered_json j;
    j["subject"] = c.canonical[0];
    j["verb"] = c.canonical[1];
    j["object"] = c.canonical[2];
    j["count"] = c.count;
    nlohmann::ordered_json by;
    by["government_media"] = c.by_group[0];
    by["celebrity"] = c.by_group[1];
    by["other"] = c.by_group[2];
    j["by_group"] = std::move(by);
    nlohmann::ordered_json members = nlohmann::ordered_json::array();
    for (const auto& m : c.members) {
      nlohmann::ordered_json mj;
      mj["post_id"] = m.post_id;
      mj["sent_index"] = m.sent_index;
      mj["subject"] = m.subject;
      mj["verb"] = m.verb;
      mj["object"] = m.object;
      mj["source"] = to_string(m.source);
      members.push_back(std::move(mj));
    }
    j["members"] = std::move(members);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<NarrativeCluster> clusters_from_json(const std::string& bytes) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("clusters json: ") + e.what());
  }
  std::vector<NarrativeCluster> out;
  for (const auto& j : arr) {
    NarrativeCluster c;
    c.canonical = {j.at("subject").get<std::string>(), j.at("verb").get<std::string>(),
                   j.at("object").get<std::string>()};
    c.count = j.at("count").get<std::uint64_t>();
    const auto& by = j.at("by_group");
    c.by_group = {by.at("government_media").get<std::uint64_t>(),
                  by.at("celebrity").get<std::uint64_t>(),
                  by.at("other").get<std::uint64_t>()};
    for (const auto& mj : j.at("members")) {
      Triplet t;
      t.post_id = mj.at("post_id").get<std::string>();
      t.sent_index = mj.at("sent_index").get<std::int64_t>();
      t.subject = mj.at("subject").get<std::string>();
      t.verb = mj.at("verb").get<std::string>();
      t.object = mj.at("object").get<std::string>();
      t.source = triplet_source_from_string(mj.at("source").get<std::string>());
      c.members.push_back(std::move(t));
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace qna
