#include "qna/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "json.hpp"
#include "qna/error.hpp"
#include "qna/parallel.hpp"

namespace qna {

namespace {

constexpr double kEps = 1e-12;

struct WindowCounts {
  std::uint64_t total_windows = 0;
  std::vector<std::uint64_t> word;          // windows containing word i
  std::vector<std::uint64_t> pair;          // upper triangle, windows with both
  std::size_t n = 0;

  std::uint64_t& joint(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return pair[i * n + j];
  }
  std::uint64_t joint(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return pair[i * n + j];
  }
};

// Boolean sliding-window counts for up to 64 tracked words. Streams shorter
// than the window yield exactly one window. Integer counts merge across
// chunks without any ordering concern.
WindowCounts count_windows(const std::vector<std::vector<std::string>>& streams,
                           const std::vector<std::string>& words, std::size_t window,
                           int threads) {
  const std::size_t n = words.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(words[i], i);

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_chunks =
      std::min<std::size_t>(streams.size(), threads <= 0 ? hw : static_cast<std::size_t>(threads));
  std::vector<WindowCounts> partial(std::max<std::size_t>(n_chunks, 1));
  for (auto& p : partial) {
    p.n = n;
    p.word.assign(n, 0);
    p.pair.assign(n * n, 0);
  }
  const std::size_t chunk = n_chunks ? (streams.size() + n_chunks - 1) / n_chunks : 0;

  auto count_mask = [&](WindowCounts& acc, std::uint64_t mask) {
    ++acc.total_windows;
    for (std::uint64_t m = mask; m;) {
      const int i = __builtin_ctzll(m);
      m &= m - 1;
      ++acc.word[static_cast<std::size_t>(i)];
      for (std::uint64_t m2 = m; m2;) {
        const int j = __builtin_ctzll(m2);
        m2 &= m2 - 1;
        ++acc.joint(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
      ++acc.joint(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
    }
  };

  parallel_for(n_chunks, static_cast<int>(n_chunks), [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      WindowCounts& acc = partial[c];
      const std::size_t begin = c * chunk;
      const std::size_t end = std::min(streams.size(), begin + chunk);
      std::vector<int> ids;
      for (std::size_t s = begin; s < end; ++s) {
        const auto& stream = streams[s];
        const std::size_t m = stream.size();
        if (m == 0) continue;
        ids.clear();
        ids.reserve(m);
        for (const auto& tok : stream) {
          auto it = index.find(tok);
          ids.push_back(it == index.end() ? -1 : static_cast<int>(it->second));
        }
        if (m <= window) {
          std::uint64_t mask = 0;
          for (int id : ids)
            if (id >= 0) mask |= std::uint64_t{1} << id;
          count_mask(acc, mask);
          continue;
        }
        std::vector<std::uint32_t> in_window(n, 0);
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < window; ++i) {
          if (ids[i] >= 0 && in_window[ids[i]]++ == 0) mask |= std::uint64_t{1} << ids[i];
        }
        count_mask(acc, mask);
        for (std::size_t start = 1; start + window <= m; ++start) {
          const int out = ids[start - 1];
          if (out >= 0 && --in_window[out] == 0) mask &= ~(std::uint64_t{1} << out);
          const int in = ids[start + window - 1];
          if (in >= 0 && in_window[in]++ == 0) mask |= std::uint64_t{1} << in;
          count_mask(acc, mask);
        }
      }
    }
  });

  WindowCounts total;
  total.n = n;
  total.word.assign(n, 0);
  total.pair.assign(n * n, 0);
  for (const auto& p : partial) {
    total.total_windows += p.total_windows;
    for (std::size_t i = 0; i < n; ++i) total.word[i] += p.word[i];
    for (std::size_t i = 0; i < n * n; ++i) total.pair[i] += p.pair[i];
  }
  return total;
}

double npmi(double p_joint, double p_a, double p_b) {
  const double num = std::log((p_joint + kEps) / (p_a * p_b + kEps));
  const double den = -std::log(p_joint + kEps);
  if (den == 0.0) return 0.0;
  return num / den;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

CoherenceReport coherence_cv(const NmfModel& model,
                             const std::vector<std::vector<std::string>>& streams,
                             const CoherenceParams& params) {
  if (params.top_n < 2) throw Error("coherence_cv: top_n must be >= 2");
  if (params.top_n > 64) throw Error("coherence_cv: top_n larger than 64 is not supported");
  if (params.window < 2) throw Error("coherence_cv: window must be >= 2");
  if (streams.empty()) throw Error("coherence_cv: empty corpus");
  bool any = false;
  for (const auto& s : streams) any = any || !s.empty();
  if (!any) throw Error("coherence_cv: every token stream is empty");

  CoherenceReport report;
  report.top_n = params.top_n;
  report.window = params.window;

  for (std::size_t topic = 0; topic < model.k; ++topic) {
    const auto terms = top_terms(model, topic, params.top_n);
    if (terms.size() < params.top_n) report.flagged_topics.push_back(topic);
    const std::size_t n = terms.size();
    if (n == 0) {
      report.per_topic.push_back(0.0);
      continue;
    }
    std::vector<std::string> words;
    words.reserve(n);
    for (const auto& [w, _] : terms) words.push_back(w);

    const WindowCounts counts = count_windows(streams, words, params.window, params.threads);
    const double total = static_cast<double>(counts.total_windows);

    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<double>(counts.word[i]) / total;

    std::vector<std::vector<double>> vec(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          vec[i][j] = 1.0;
          continue;
        }
        const double pj = static_cast<double>(counts.joint(i, j)) / total;
        vec[i][j] = npmi(pj, p[i], p[j]);
      }
    }
    std::vector<double> set_vec(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) set_vec[j] += vec[i][j];

    double score = 0.0;
    for (std::size_t i = 0; i < n; ++i) score += cosine(vec[i], set_vec);
    score /= static_cast<double>(n);
    report.per_topic.push_back(score);
  }

  double mean = 0.0;
  for (double s : report.per_topic) mean += s;
  report.mean = report.per_topic.empty() ? 0.0 : mean / static_cast<double>(report.per_topic.size());
  return report;
}

SweepResult sweep_k(const TermDocMatrix& matrix,
                    const std::vector<std::vector<std::string>>& streams, std::size_t k_min,
                    std::size_t k_max, std::uint64_t seed, const NmfOptions& fit_options,
                    const CoherenceParams& coherence_params) {
  if (k_min < 1 || k_min > k_max) throw Error("sweep_k: need 1 <= k_min <= k_max");
  SweepResult result;
  result.entries.resize(k_max - k_min + 1);

  // fits for different K are independent; each entry owns its slot
  std::vector<std::string> errors(result.entries.size());
  parallel_for(result.entries.size(), fit_options.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t k = k_min + i;
      try {
        NmfOptions per_fit = fit_options;
        per_fit.threads = 1;  // outer loop already parallel
        CoherenceParams per_coh = coherence_params;
        per_coh.threads = 1;
        SweepEntry entry;
        entry.k = k;
        entry.model = fit_nmf(matrix, k, seed, per_fit);
        entry.mean_coherence = coherence_cv(entry.model, streams, per_coh).mean;
        result.entries[i] = std::move(entry);
      } catch (const std::exception& ex) {
        errors[i] = "k=" + std::to_string(k) + ": " + ex.what();
      }
    }
  });
  for (const auto& err : errors)
    if (!err.empty()) throw Error("sweep_k: " + err);

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.entries.size(); ++i)
    if (result.entries[i].mean_coherence > result.entries[best].mean_coherence) best = i;
  result.selected_k = result.entries[best].k;
  return result;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "k,mean_coherence\n";
  for (const auto& e : sweep.entries) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", e.k, e.mean_coherence);
    out += buf;
  }
  return out;
}

void save_coherence(const CoherenceReport& report, const std::string& path) {
  nlohmann::ordered_json j;
  j["top_n"] = report.top_n;
  j["window"] = report.window;
  j["mean"] = report.mean;
  j["per_topic"] = report.per_topic;
  j["flagged_topics"] = report.flagged_topics;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace qna
