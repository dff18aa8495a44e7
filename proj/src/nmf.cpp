#include "qna/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qna/error.hpp"
#include "qna/parallel.hpp"
#include "qna/rng.hpp"

namespace qna {

namespace {

constexpr double kEps = 1e-12;  // denominator guard of the updates

// k x k Gram matrix M^T M of a (rows x k) row-major matrix, accumulated in
// row order. Cheap enough to stay single-threaded, which pins the reduction
// order regardless of the thread count.
std::vector<double> gram(const std::vector<double>& m, std::size_t rows, std::size_t k) {
  std::vector<double> g(k * k, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = m.data() + r * k;
    for (std::size_t a = 0; a < k; ++a) {
      const double va = row[a];
      if (va == 0.0) continue;
      for (std::size_t b = 0; b < k; ++b) g[a * k + b] += va * row[b];
    }
  }
  return g;
}

// ||A - WH||_F^2 = ||A||^2 - 2<A,WH> + trace((W^T W)(H H^T)).
// The nnz part is stored per document and summed in document order.
double objective(const TermDocMatrix& A, const std::vector<double>& W,
                 const std::vector<double>& H, std::size_t k, double a_sq,
                 std::vector<double>& scratch_doc, int threads) {
  const std::size_t docs = A.docs();
  const std::size_t terms = A.terms();
  scratch_doc.assign(docs, 0.0);
  parallel_for(docs, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t d = b; d < e; ++d) {
      const double* wrow = W.data() + d * k;
      double acc = 0.0;
      for (std::size_t p = A.row_ptr[d]; p < A.row_ptr[d + 1]; ++p) {
        const std::size_t j = A.col_idx[p];
        double wh = 0.0;
        for (std::size_t t = 0; t < k; ++t) wh += wrow[t] * H[t * terms + j];
        acc += A.values[p] * wh;
      }
      scratch_doc[d] = acc;
    }
  });
  double cross = 0.0;
  for (std::size_t d = 0; d < docs; ++d) cross += scratch_doc[d];

  const std::vector<double> wtw = gram(W, docs, k);
  // H H^T with H stored k x terms
  std::vector<double> hht(k * k, 0.0);
  for (std::size_t j = 0; j < terms; ++j) {
    for (std::size_t a = 0; a < k; ++a) {
      const double va = H[a * terms + j];
      if (va == 0.0) continue;
      for (std::size_t b = 0; b < k; ++b) hht[a * k + b] += va * H[b * terms + j];
    }
  }
  double tr = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) tr += wtw[a * k + b] * hht[b * k + a];
  return a_sq - 2.0 * cross + tr;
}

}  // namespace

NmfModel fit_nmf(const TermDocMatrix& A, std::size_t k, std::uint64_t seed,
                 const NmfOptions& options) {
  const std::size_t docs = A.docs();
  const std::size_t terms = A.terms();
  if (k < 1 || k > std::min(docs, terms))
    throw Error("fit_nmf: k=" + std::to_string(k) + " out of range [1, min(docs, terms)=" +
                std::to_string(std::min(docs, terms)) + "]");
  if (options.max_iter < 1) throw Error("fit_nmf: max_iter must be >= 1");
  const double total = A.total_weight();
  if (!(total > 0.0)) throw Error("fit_nmf: matrix has zero total weight");
  if (A.col_ptr.empty() && A.nnz() > 0)
    throw Error("fit_nmf: matrix is missing its column layout");

  NmfModel model;
  model.k = k;
  model.n_docs = docs;
  model.n_terms = terms;
  model.seed = seed;
  model.vocab = A.vocab;
  model.doc_ids = A.doc_ids;

  // seeded uniform (0,1] scaled by sqrt(mean(A)/k); W filled first
  const double scale =
      std::sqrt(total / (static_cast<double>(docs) * static_cast<double>(terms)) /
                static_cast<double>(k));
  std::mt19937_64 rng(seed);
  auto& W = model.doc_topic;
  auto& H = model.topic_term;
  W.resize(docs * k);
  H.resize(k * terms);
  for (auto& v : W) v = uniform01_open(rng) * scale;
  for (auto& v : H) v = uniform01_open(rng) * scale;

  double a_sq = 0.0;
  for (double v : A.values) a_sq += v * v;

  std::vector<double> scratch_doc;
  double loss = objective(A, W, H, k, a_sq, scratch_doc, options.threads);
  model.loss_history.push_back(loss);

  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    // H <- H * (W^T A) / (W^T W H + eps), one column per task
    {
      const std::vector<double> wtw = gram(W, docs, k);
      parallel_for(terms, options.threads, [&](std::size_t b, std::size_t e) {
        std::vector<double> numer(k);
        for (std::size_t j = b; j < e; ++j) {
          std::fill(numer.begin(), numer.end(), 0.0);
          for (std::size_t p = A.col_ptr[j]; p < A.col_ptr[j + 1]; ++p) {
            const std::size_t d = A.row_idx[p];
            const double a = A.cvalues[p];
            const double* wrow = W.data() + d * k;
            for (std::size_t t = 0; t < k; ++t) numer[t] += a * wrow[t];
          }
          for (std::size_t t = 0; t < k; ++t) {
            double denom = 0.0;
            for (std::size_t s = 0; s < k; ++s) denom += wtw[t * k + s] * H[s * terms + j];
            H[t * terms + j] *= numer[t] / (denom + kEps);
          }
        }
      });
    }
    // W <- W * (A H^T) / (W H H^T + eps), one row per task
    {
      std::vector<double> hht(k * k, 0.0);
      for (std::size_t j = 0; j < terms; ++j) {
        for (std::size_t a = 0; a < k; ++a) {
          const double va = H[a * terms + j];
          if (va == 0.0) continue;
          for (std::size_t b = 0; b < k; ++b) hht[a * k + b] += va * H[b * terms + j];
        }
      }
      parallel_for(docs, options.threads, [&](std::size_t b, std::size_t e) {
        std::vector<double> numer(k);
        for (std::size_t d = b; d < e; ++d) {
          std::fill(numer.begin(), numer.end(), 0.0);
          for (std::size_t p = A.row_ptr[d]; p < A.row_ptr[d + 1]; ++p) {
            const std::size_t j = A.col_idx[p];
            const double a = A.values[p];
            for (std::size_t t = 0; t < k; ++t) numer[t] += a * H[t * terms + j];
          }
          double* wrow = W.data() + d * k;
          for (std::size_t t = 0; t < k; ++t) {
            double denom = 0.0;
            for (std::size_t s = 0; s < k; ++s) denom += wrow[s] * hht[s * k + t];
            wrow[t] *= numer[t] / (denom + kEps);
          }
        }
      });
    }

    const double next = objective(A, W, H, k, a_sq, scratch_doc, options.threads);
    model.loss_history.push_back(next);
    model.iterations_run = iter + 1;
    if (options.on_iteration) options.on_iteration(iter + 1, W, H);
    const double denom = std::max(loss, 1e-300);
    if (std::abs(loss - next) / denom < options.tol) {
      loss = next;
      break;
    }
    loss = next;
  }
  return model;
}

std::vector<std::pair<std::string, double>> top_terms(const NmfModel& model, std::size_t topic,
                                                      std::size_t n) {
  if (topic >= model.k)
    throw Error("top_terms: topic " + std::to_string(topic) + " out of range (k=" +
                std::to_string(model.k) + ")");
  if (n < 1) throw Error("top_terms: n must be >= 1");
  std::vector<std::size_t> idx;
  idx.reserve(model.n_terms);
  for (std::size_t j = 0; j < model.n_terms; ++j)
    if (model.h(topic, j) > 0.0) idx.push_back(j);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double wa = model.h(topic, a), wb = model.h(topic, b);
    if (wa != wb) return wa > wb;
    return model.vocab[a] < model.vocab[b];
  });
  if (idx.size() > n) idx.resize(n);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(idx.size());
  for (std::size_t j : idx) out.emplace_back(model.vocab[j], model.h(topic, j));
  return out;
}

std::vector<int> argmax_topics(const NmfModel& model) {
  std::vector<int> out(model.n_docs, -1);
  for (std::size_t d = 0; d < model.n_docs; ++d) {
    double best = 0.0;
    int arg = -1;
    for (std::size_t t = 0; t < model.k; ++t) {
      const double v = model.w(d, t);
      if (v > best) {  // strict: ties keep the smaller index
        best = v;
        arg = static_cast<int>(t);
      }
    }
    out[d] = arg;  // stays -1 only when the whole row is zero
  }
  return out;
}

Corpus assign_and_subset(const NmfModel& model, const Corpus& corpus, std::size_t topic,
                         double min_share, AssignReport* report) {
  if (topic >= model.k) throw Error("assign_and_subset: topic out of range");
  if (!(min_share > 0.0) || min_share > 1.0)
    throw Error("assign_and_subset: min_share must be in (0, 1]");
  std::map<std::string, std::size_t> row_of;
  for (std::size_t d = 0; d < model.doc_ids.size(); ++d) row_of[model.doc_ids[d]] = d;

  const std::vector<int> arg = argmax_topics(model);
  AssignReport local;
  Corpus result;
  result.provenance = corpus.provenance;
  result.period = corpus.period;
  for (const auto& p : corpus.posts) {
    auto it = row_of.find(p.id);
    if (it == row_of.end())
      throw Error("assign_and_subset: post \"" + p.id + "\" was not in the fitted matrix");
    const std::size_t d = it->second;
    double row_sum = 0.0;
    for (std::size_t t = 0; t < model.k; ++t) row_sum += model.w(d, t);
    if (row_sum <= 0.0) {
      ++local.zero_rows_excluded;
      continue;
    }
    if (arg[d] != static_cast<int>(topic)) continue;
    if (model.w(d, topic) / row_sum < min_share) continue;
    result.posts.push_back(p);
    ++local.kept;
  }
  if (report) *report = local;
  return result;
}

namespace {

constexpr char kDenseMagic[8] = {'N', 'M', 'F', 'D', 'N', 'S', 'E', '1'};

void write_dense(const std::string& path, const std::vector<double>& m, std::size_t rows,
                 std::size_t cols, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(kDenseMagic, 8);
  const std::uint32_t r = static_cast<std::uint32_t>(rows);
  const std::uint32_t c = static_cast<std::uint32_t>(cols);
  char dtype[8] = {'f', 'l', 'o', 'a', 't', '6', '4', '\0'};
  out.write(reinterpret_cast<const char*>(&r), 4);
  out.write(reinterpret_cast<const char*>(&c), 4);
  out.write(dtype, 8);
  out.write(reinterpret_cast<const char*>(&seed), 8);
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
}

std::vector<double> read_dense(const std::string& path, std::size_t& rows, std::size_t& cols,
                               std::uint64_t& seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || std::memcmp(magic, kDenseMagic, 8) != 0)
    throw Error(path + ": not a dense factor file");
  std::uint32_t r = 0, c = 0;
  char dtype[8];
  in.read(reinterpret_cast<char*>(&r), 4);
  in.read(reinterpret_cast<char*>(&c), 4);
  in.read(dtype, 8);
  in.read(reinterpret_cast<char*>(&seed), 8);
  if (std::strncmp(dtype, "float64", 7) != 0) throw Error(path + ": unsupported dtype");
  rows = r;
  cols = c;
  std::vector<double> m(rows * cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != m.size() * sizeof(double))
    throw Error(path + ": truncated");
  return m;
}

}  // namespace

void save_model(const NmfModel& model, const std::string& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json meta;
  meta["k"] = model.k;
  meta["docs"] = model.n_docs;
  meta["terms"] = model.n_terms;
  meta["seed"] = model.seed;
  meta["iterations_run"] = model.iterations_run;
  meta["doc_ids"] = model.doc_ids;
  meta["vocab"] = model.vocab;
  std::ofstream mf(dir + "/meta.json", std::ios::binary);
  if (!mf) throw Error("cannot write " + dir + "/meta.json");
  mf << meta.dump(2) << '\n';

  write_dense(dir + "/W.bin", model.doc_topic, model.n_docs, model.k, model.seed);
  write_dense(dir + "/H.bin", model.topic_term, model.k, model.n_terms, model.seed);

  std::ofstream lf(dir + "/loss.csv", std::ios::binary);
  if (!lf) throw Error("cannot write " + dir + "/loss.csv");
  lf << "iteration,loss\n";
  for (std::size_t i = 0; i < model.loss_history.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, model.loss_history[i]);
    lf << buf;
  }
}

NmfModel load_model(const std::string& dir) {
  std::ifstream mf(dir + "/meta.json", std::ios::binary);
  if (!mf) throw Error("cannot open " + dir + "/meta.json");
  nlohmann::json meta = nlohmann::json::parse(mf, nullptr, true);
  NmfModel model;
  model.k = meta.at("k").get<std::size_t>();
  model.n_docs = meta.at("docs").get<std::size_t>();
  model.n_terms = meta.at("terms").get<std::size_t>();
  model.seed = meta.at("seed").get<std::uint64_t>();
  model.iterations_run = meta.at("iterations_run").get<std::size_t>();
  model.doc_ids = meta.at("doc_ids").get<std::vector<std::string>>();
  model.vocab = meta.at("vocab").get<std::vector<std::string>>();

  std::size_t rows = 0, cols = 0;
  std::uint64_t seed = 0;
  model.doc_topic = read_dense(dir + "/W.bin", rows, cols, seed);
  if (rows != model.n_docs || cols != model.k) throw Error(dir + "/W.bin: shape mismatch");
  model.topic_term = read_dense(dir + "/H.bin", rows, cols, seed);
  if (rows != model.k || cols != model.n_terms) throw Error(dir + "/H.bin: shape mismatch");

  std::ifstream lf(dir + "/loss.csv", std::ios::binary);
  if (lf) {
    std::string line;
    std::getline(lf, line);  // header
    while (std::getline(lf, line)) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) continue;
      model.loss_history.push_back(std::stod(line.substr(comma + 1)));
    }
  }
  return model;
}

}  // namespace qna
