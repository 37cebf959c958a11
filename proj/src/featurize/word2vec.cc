#include "tlab/featurize/word2vec.h"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "tlab/common/error.h"
#include "tlab/common/parallel.h"
#include "tlab/common/rng.h"
#include "tlab/featurize/vocabulary.h"

namespace tlab::featurize {

const std::vector<double>* EmbeddingTable::find(std::string_view token) const {
  auto it = vectors.find(std::string(token));
  return it == vectors.end() ? nullptr : &it->second;
}

namespace {

// Relaxed atomic access keeps the concurrent mode free of data races; with one
// thread it compiles to plain loads and stores.
inline double load(double& x) { return std::atomic_ref<double>(x).load(std::memory_order_relaxed); }
inline void store(double& x, double v) { std::atomic_ref<double>(x).store(v, std::memory_order_relaxed); }

struct Trainer {
  const Word2VecConfig& cfg;
  const std::vector<std::vector<std::size_t>>& docs;
  std::vector<double> noise_cdf;
  std::vector<double> in;   // V x dim, becomes the embedding
  std::vector<double> out;  // V x dim
  std::size_t total_steps = 0;
  std::atomic<std::size_t> steps_done{0};

  std::size_t sample_noise(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), u);
    return std::min<std::size_t>(it - noise_cdf.begin(), noise_cdf.size() - 1);
  }

  double current_lr() const {
    const double progress =
        std::min(1.0, static_cast<double>(steps_done.load(std::memory_order_relaxed)) /
                          static_cast<double>(std::max<std::size_t>(total_steps, 1)));
    const double lr_min = cfg.lr0 / 100.0;
    return cfg.lr0 - (cfg.lr0 - lr_min) * progress;
  }

  void update_pair(std::size_t center, std::size_t context, double lr, Rng& rng,
                   std::vector<double>& grad_in) {
    const std::size_t d = cfg.dim;
    double* v = &in[center * d];
    std::fill(grad_in.begin(), grad_in.end(), 0.0);
    for (std::size_t k = 0; k <= cfg.negatives; ++k) {
      std::size_t target = context;
      double label = 1.0;
      if (k > 0) {
        target = sample_noise(rng);
        if (target == context) continue;
        label = 0.0;
      }
      double* u = &out[target * d];
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += load(v[j]) * load(u[j]);
      dot = std::clamp(dot, -30.0, 30.0);
      const double g = lr * (label - 1.0 / (1.0 + std::exp(-dot)));
      for (std::size_t j = 0; j < d; ++j) {
        const double uj = load(u[j]);
        grad_in[j] += g * uj;
        store(u[j], uj + g * load(v[j]));
      }
    }
    for (std::size_t j = 0; j < d; ++j) store(v[j], load(v[j]) + grad_in[j]);
  }

  void train_docs(std::size_t begin, std::size_t end, Rng& rng) {
    std::vector<double> grad_in(cfg.dim);
    for (std::size_t di = begin; di < end; ++di) {
      const auto& doc = docs[di];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const double lr = current_lr();
        // word2vec-style reduced window
        const std::size_t reach = cfg.window - static_cast<std::size_t>(rng.below(cfg.window));
        const std::size_t lo = i >= reach ? i - reach : 0;
        const std::size_t hi = std::min(doc.size() - 1, i + reach);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j != i) update_pair(doc[i], doc[j], lr, rng, grad_in);
        }
        steps_done.fetch_add(1, std::memory_order_relaxed);
      }
    }
  }
};

}  // namespace

EmbeddingTable train_word2vec(std::span<const textprep::CleanDocument> corpus,
                              const Word2VecConfig& config) {
  if (config.dim == 0) throw Error(ErrorCode::kInvalidConfig, "word2vec dim must be >= 1");
  if (config.window == 0) throw Error(ErrorCode::kInvalidConfig, "word2vec window must be >= 1");
  if (config.lr0 <= 0.0) throw Error(ErrorCode::kInvalidConfig, "word2vec lr0 must be > 0");
  const Vocabulary vocab = Vocabulary::build(corpus, std::max<std::size_t>(config.min_count, 1));

  std::vector<std::vector<std::size_t>> docs;
  std::size_t tokens = 0;
  for (const auto& doc : corpus) {
    std::vector<std::size_t> ids;
    for (const auto& t : doc.tokens) {
      if (auto i = vocab.index(t)) ids.push_back(*i);
    }
    tokens += ids.size();
    docs.push_back(std::move(ids));
  }

  Trainer trainer{config, docs, {}, {}, {}, 0, {}};
  const std::size_t v = vocab.size();
  double z = 0.0;
  trainer.noise_cdf.resize(v);
  for (std::size_t i = 0; i < v; ++i) {
    z += std::pow(static_cast<double>(vocab.count(i)), 0.75);
    trainer.noise_cdf[i] = z;
  }
  for (double& c : trainer.noise_cdf) c /= z;

  Rng init_rng(derive_seed(config.seed, 0));
  trainer.in.resize(v * config.dim);
  for (double& x : trainer.in) x = (init_rng.uniform() - 0.5) / static_cast<double>(config.dim);
  trainer.out.assign(v * config.dim, 0.0);
  trainer.total_steps = tokens * config.epochs;

  const std::size_t shards = std::max<std::size_t>(1, std::min(config.threads, docs.size()));
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (shards == 1) {
      Rng rng(derive_seed(config.seed, 1 + epoch));
      trainer.train_docs(0, docs.size(), rng);
    } else {
      parallel_for(shards, [&](std::size_t s) {
        Rng rng(derive_seed(config.seed, 1 + epoch * shards + s));
        trainer.train_docs(docs.size() * s / shards, docs.size() * (s + 1) / shards, rng);
      });
    }
  }

  EmbeddingTable table;
  table.dim = config.dim;
  table.window = config.window;
  table.negatives = config.negatives;
  table.epochs = config.epochs;
  table.deterministic = shards == 1;
  for (std::size_t i = 0; i < v; ++i) {
    table.vectors.emplace(vocab.token(i),
                          std::vector<double>(trainer.in.begin() + i * config.dim,
                                              trainer.in.begin() + (i + 1) * config.dim));
  }
  return table;
}

std::vector<double> doc_vector(std::span<const std::string> tokens, const EmbeddingTable& table,
                               PoolMode mode) {
  std::vector<double> acc(table.dim, 0.0);
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    const auto* vec = table.find(t);
    if (!vec) continue;
    ++hits;
    for (std::size_t j = 0; j < table.dim; ++j) acc[j] += (*vec)[j];
  }
  if (mode == PoolMode::kAverage && hits > 0) {
    for (double& x : acc) x /= static_cast<double>(hits);
  }
  return acc;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

}  // namespace tlab::featurize
