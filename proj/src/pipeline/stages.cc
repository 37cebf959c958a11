#include "tlab/pipeline/stages.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>

#include "tlab/common/csv.h"
#include "tlab/common/hash.h"
#include "tlab/common/io.h"
#include "tlab/common/parallel.h"
#include "tlab/common/rng.h"
#include "tlab/evalstats/crossval.h"
#include "tlab/evalstats/metrics.h"
#include "tlab/evalstats/ttest.h"
#include "tlab/explain/lime.h"
#include "tlab/explain/report.h"
#include "tlab/explain/shapley.h"
#include "tlab/featurize/external.h"
#include "tlab/featurize/vectorize.h"
#include "tlab/featurize/vocabulary.h"
#include "tlab/featurize/word2vec.h"
#include "tlab/lexlabel/lexicon.h"
#include "tlab/lexlabel/scoring.h"
#include "tlab/models/model.h"
#include "tlab/models/naive_bayes.h"
#include "tlab/models/train.h"
#include "tlab/models/tune.h"
#include "tlab/pipeline/corpus.h"
#include "tlab/pipeline/split.h"
#include "tlab/tensor/checkpoint.h"
#include "tlab/textprep/pipeline.h"
#include "tlab/textprep/tagger.h"

namespace tlab::pipeline {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<Stage, std::string_view>, 9> kStages{{
    {Stage::kPrep, "prep"},
    {Stage::kLabel, "label"},
    {Stage::kFeaturize, "featurize"},
    {Stage::kTrain, "train"},
    {Stage::kTune, "tune"},
    {Stage::kEval, "eval"},
    {Stage::kBenchmark, "benchmark"},
    {Stage::kExplain, "explain"},
    {Stage::kReport, "report"},
}};

constexpr const char* kAssetFiles[] = {"stopwords.txt", "negations.txt", "contractions.tsv", "emoji.tsv",
                                       "dictionary.txt"};
const std::vector<int> kLabels{-1, 0, 1};

std::string file_fp(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kIo, "missing input file " + path.string());
  return fingerprint(io::read_file(path));
}

std::string fmt(double v) { return io::format_double(v); }

void record_file(const fs::path& dir, Manifest& m, const std::string& name) {
  m.files[name] = fingerprint(io::read_file(dir / name));
}

Manifest begin(const RunConfig& cfg, Stage s, std::initializer_list<Stage> upstream, ojson config) {
  // stale files from an earlier run of this stage would sit outside the manifest
  const fs::path dir = stage_dir(cfg, s);
  if (fs::exists(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file()) fs::remove(e.path());
  Manifest m;
  m.stage = stage_name(s);
  m.hash = stage_hash(cfg, s);
  for (Stage u : upstream) m.upstream[std::string(stage_name(u))] = stage_hash(cfg, u);
  m.config = std::move(config);
  return m;
}

// Refuses artifacts written under a different config or edited afterwards.
Manifest require(const RunConfig& cfg, Stage s) {
  const fs::path dir = stage_dir(cfg, s);
  if (!fs::exists(dir / "manifest.json"))
    throw Error(ErrorCode::kIo, "no " + std::string(stage_name(s)) + " artifacts in " + dir.string() + "; run '" +
                                    std::string(stage_name(s)) + "' first");
  Manifest m = read_manifest(dir);
  const std::string expected = stage_hash(cfg, s);
  if (m.hash != expected)
    throw Error(ErrorCode::kHashMismatch, std::string(stage_name(s)) + " artifacts carry hash " + m.hash +
                                              " but the current config expects " + expected + "; re-run '" +
                                              std::string(stage_name(s)) + "'");
  verify_files(dir, m);
  return m;
}

// ---- data loaded from the prep, label and featurize artifacts

struct Dataset {
  std::vector<textprep::CleanDocument> docs;
  std::vector<int> labels;
  DatasetSplit split;
  featurize::Vocabulary vocab;
  featurize::EmbeddingTable w2v;
  std::optional<featurize::ExternalEmbeddingSet> external;
};

std::string clean_csv(std::span<const textprep::CleanDocument> docs) {
  std::string out = csv::format_row({"id", "tokens", "label"});
  for (const auto& d : docs) out += csv::format_row({d.id, d.joined, d.label ? std::to_string(*d.label) : ""});
  return out;
}

std::vector<textprep::CleanDocument> read_clean(const fs::path& path) {
  const auto rows = csv::parse(io::read_file(path));
  std::vector<textprep::CleanDocument> docs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3) throw Error(ErrorCode::kMalformedFile, path.string() + ": bad row " + std::to_string(r));
    textprep::CleanDocument d;
    d.id = rows[r][0];
    d.joined = rows[r][1];
    for (auto t : io::split(d.joined, ' '))
      if (!t.empty()) d.tokens.emplace_back(t);
    if (!rows[r][2].empty()) d.label = std::stoi(rows[r][2]);
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<int> read_labels(const fs::path& path, std::size_t expected) {
  const auto rows = csv::parse(io::read_file(path));
  std::vector<int> labels;
  for (std::size_t r = 1; r < rows.size(); ++r) labels.push_back(std::stoi(rows[r].at(2)));
  if (labels.size() != expected) throw Error(ErrorCode::kMalformedFile, path.string() + ": label count differs");
  return labels;
}

std::string w2v_text(const featurize::EmbeddingTable& t) {
  std::string out = "# dim=" + std::to_string(t.dim) + " window=" + std::to_string(t.window) +
                    " negatives=" + std::to_string(t.negatives) + " epochs=" + std::to_string(t.epochs) + "\n";
  std::vector<std::string> keys;
  for (const auto& [k, v] : t.vectors) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (const auto& k : keys) {
    out += k + "\t";
    const auto& v = t.vectors.at(k);
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + fmt(v[i]);
    out += "\n";
  }
  return out;
}

featurize::EmbeddingTable parse_w2v(const std::string& text) {
  featurize::EmbeddingTable t;
  for (auto line : io::split(text, '\n')) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::sscanf(std::string(line).c_str(), "# dim=%zu window=%zu negatives=%zu epochs=%zu", &t.dim, &t.window,
                  &t.negatives, &t.epochs);
      continue;
    }
    const auto tab = line.find('\t');
    std::vector<double> v;
    for (auto x : io::split(line.substr(tab + 1), ' ')) v.push_back(std::stod(std::string(x)));
    if (v.size() != t.dim) throw Error(ErrorCode::kMalformedFile, "word2vec row width differs from dim");
    t.vectors.emplace(std::string(line.substr(0, tab)), std::move(v));
  }
  return t;
}

std::string sparse_text(const std::vector<textprep::CleanDocument>& docs,
                        const std::vector<featurize::SparseVector>& vecs) {
  std::string out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out += docs[i].id;
    for (const auto& [k, v] : vecs[i].entries) out += "\t" + std::to_string(k) + ":" + fmt(v);
    out += "\n";
  }
  return out;
}

bool needs_external(const RunConfig& cfg) {
  if (cfg.model.embedding == Embedding::kExternal) return true;
  for (const auto& g : cfg.eval.grid)
    if (g.embedding == Embedding::kExternal) return true;
  return false;
}

Dataset load_dataset(const RunConfig& cfg) {
  require(cfg, Stage::kPrep);
  require(cfg, Stage::kLabel);
  require(cfg, Stage::kFeaturize);
  Dataset d;
  d.docs = read_clean(stage_dir(cfg, Stage::kPrep) / "clean.csv");
  d.labels = read_labels(stage_dir(cfg, Stage::kLabel) / "labels.csv", d.docs.size());
  const fs::path f = stage_dir(cfg, Stage::kFeaturize);
  d.split = split_from_json(nlohmann::json::parse(io::read_file(f / "split.json")));
  d.vocab = featurize::Vocabulary::parse(io::read_file(f / "vocab.txt"));
  d.w2v = parse_w2v(io::read_file(f / "word2vec.tsv"));
  if (needs_external(cfg)) {
    if (cfg.paths.external_embeddings.empty())
      throw Error(ErrorCode::kInvalidConfig, "embedding 'external' needs paths.external_embeddings");
    d.external = featurize::import_external_embeddings(cfg.paths.external_embeddings, cfg.model.config.max_len);
  }
  return d;
}

// ---- classifiers over a dataset

struct NeuralInput {
  models::Example x;
  std::vector<std::string> tokens;  // one per feature row, when token-level
};

bool row_per_token(Embedding e) { return e == Embedding::kTrainable || e == Embedding::kWord2Vec; }

NeuralInput neural_input(const Dataset& d, std::size_t i, std::span<const std::string> tokens, Embedding e,
                         const models::ModelConfig& m) {
  NeuralInput in;
  in.x.id = d.docs[i].id;
  in.x.target = models::label_to_class(d.labels[i]);
  switch (e) {
    case Embedding::kTrainable:
      for (const auto& t : tokens) {
        if (in.x.ids.size() >= m.max_len) break;
        if (auto k = d.vocab.index(t)) {
          in.x.ids.push_back(*k + 1);
          in.tokens.push_back(t);
        }
      }
      break;
    case Embedding::kWord2Vec:
      for (const auto& t : tokens) {
        if (in.tokens.size() >= m.max_len) break;
        if (const auto* v = d.w2v.find(t)) {
          for (double x : *v) in.x.values.push_back(static_cast<float>(x));
          in.tokens.push_back(t);
        }
      }
      in.x.rows = in.tokens.size();
      break;
    case Embedding::kWord2VecSum:
    case Embedding::kWord2VecAvg: {
      const auto v = featurize::doc_vector(tokens, d.w2v,
                                           e == Embedding::kWord2VecSum ? featurize::PoolMode::kSum
                                                                        : featurize::PoolMode::kAverage);
      for (double x : v) in.x.values.push_back(static_cast<float>(x));
      in.x.rows = 1;
      for (const auto& t : tokens)
        if (d.w2v.find(t)) in.tokens.push_back(t);
      break;
    }
    case Embedding::kExternal: {
      const auto* doc = d.external->find(d.docs[i].id);
      if (!doc) throw Error(ErrorCode::kMalformedFile, "no external embedding for document " + d.docs[i].id);
      in.x.values = doc->values;
      in.x.rows = doc->rows;
      in.x.mask = doc->mask;
      for (std::size_t r = 0; r < doc->source_tokens && r < doc->rows; ++r) in.tokens.push_back("row" + std::to_string(r));
      break;
    }
    default:
      throw Error(ErrorCode::kInvalidConfig, "embedding " + std::string(embedding_name(e)) + " is not a neural input");
  }
  return in;
}

featurize::SparseVector sparse_input(const Dataset& d, std::span<const std::string> tokens, Embedding e) {
  if (e == Embedding::kBow) return featurize::bow_vectorize(tokens, d.vocab);
  if (e == Embedding::kTfidf) return featurize::tfidf_transform(tokens, d.vocab);
  throw Error(ErrorCode::kInvalidConfig, "naive_bayes takes bow or tfidf features, not " +
                                             std::string(embedding_name(e)));
}

models::ModelConfig resolve_model(const RunConfig& cfg, const GridEntry& spec, const Dataset& d) {
  const auto& base = cfg.model.config;
  models::ModelConfig m = spec.arch == base.arch ? base : models::desk_config(spec.arch);
  m.seed = base.seed;
  m.max_len = base.max_len;
  if (spec.arch != base.arch) m.embedding_dim = base.embedding_dim;
  const bool nb = spec.arch == models::Arch::kNaiveBayes;
  const bool sparse = spec.embedding == Embedding::kBow || spec.embedding == Embedding::kTfidf;
  if (nb != sparse)
    throw Error(ErrorCode::kInvalidConfig, std::string(models::arch_name(spec.arch)) + " cannot use embedding " +
                                               std::string(embedding_name(spec.embedding)));
  switch (spec.embedding) {
    case Embedding::kTrainable:
      m.embedding_source = models::EmbeddingSource::kTrainable;
      m.vocab_size = d.vocab.size() + 1;
      break;
    case Embedding::kWord2Vec:
      m.embedding_source = models::EmbeddingSource::kExternalSequence;
      m.embedding_dim = d.w2v.dim;
      break;
    case Embedding::kWord2VecSum:
    case Embedding::kWord2VecAvg:
      m.embedding_source = models::EmbeddingSource::kExternalPooled;
      m.embedding_dim = d.w2v.dim;
      break;
    case Embedding::kExternal:
      m.embedding_source = d.external->mode == featurize::EmbeddingMode::kPooled
                               ? models::EmbeddingSource::kExternalPooled
                               : models::EmbeddingSource::kExternalSequence;
      m.embedding_dim = d.external->dim;
      break;
    default: break;
  }
  m = models::apply_ablation(m, spec.ablation);
  models::validate(m);
  return m;
}

struct Classifier {
  GridEntry spec;
  models::ModelConfig config;
  std::optional<models::Model> net;
  std::optional<models::NaiveBayesModel> nb;
  models::TrainResult result;

  std::vector<double> predict(const Dataset& d, std::size_t i) const {
    if (nb) return models::predict_proba_nb(*nb, sparse_input(d, d.docs[i].tokens, spec.embedding));
    return net->predict(neural_input(d, i, d.docs[i].tokens, spec.embedding, config).x);
  }
};

std::vector<std::size_t> classes_of(const Dataset& d, std::span<const std::size_t> idx) {
  std::vector<std::size_t> out;
  for (auto i : idx) out.push_back(models::label_to_class(d.labels[i]));
  return out;
}

Classifier fit(const RunConfig& cfg, const GridEntry& spec, const Dataset& d, std::span<const std::size_t> train_idx,
               std::span<const std::size_t> val_idx, models::TrainConfig tc) {
  Classifier c;
  c.spec = spec;
  c.config = resolve_model(cfg, spec, d);
  if (spec.arch == models::Arch::kNaiveBayes) {
    std::vector<featurize::SparseVector> x;
    for (auto i : train_idx) x.push_back(sparse_input(d, d.docs[i].tokens, spec.embedding));
    c.nb = models::train_naive_bayes(x, classes_of(d, train_idx), c.config.nb_alpha);
    return c;
  }
  std::vector<models::Example> tr, va;
  for (auto i : train_idx) tr.push_back(neural_input(d, i, d.docs[i].tokens, spec.embedding, c.config).x);
  for (auto i : val_idx) va.push_back(neural_input(d, i, d.docs[i].tokens, spec.embedding, c.config).x);
  c.net.emplace(c.config);
  c.result = models::train(*c.net, tr, va, tc);
  return c;
}

// ---- naive bayes persistence

std::string nb_json(const models::NaiveBayesModel& m) {
  ojson j;
  j["classes"] = m.classes;
  j["vocab"] = m.vocab;
  j["alpha"] = m.alpha;
  j["present"] = m.present;
  j["log_prior"] = m.log_prior;
  j["log_likelihood"] = m.log_likelihood;
  return j.dump() + "\n";
}

models::NaiveBayesModel parse_nb(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  models::NaiveBayesModel m;
  m.classes = j["classes"];
  m.vocab = j["vocab"];
  m.alpha = j["alpha"];
  m.present = j["present"].get<std::vector<bool>>();
  // -inf priors of unseen classes are stored as null
  for (const auto& v : j["log_prior"]) m.log_prior.push_back(v.is_null() ? -INFINITY : v.get<double>());
  m.log_likelihood = j["log_likelihood"].get<std::vector<std::vector<double>>>();
  return m;
}

Classifier load_classifier(const RunConfig& cfg, const Dataset& d) {
  require(cfg, Stage::kTrain);
  const fs::path dir = stage_dir(cfg, Stage::kTrain);
  const auto j = nlohmann::json::parse(io::read_file(dir / "model_config.json"));
  Classifier c;
  c.spec.arch = models::parse_arch(j["model"]["arch"].get<std::string>());
  c.spec.embedding = parse_embedding(j["embedding"].get<std::string>());
  c.spec.ablation = models::parse_ablation(j["ablation"].get<std::string>());
  c.config = models::model_config_from_json(j["model"], models::desk_config(c.spec.arch));
  if (c.spec.arch == models::Arch::kNaiveBayes) {
    c.nb = parse_nb(io::read_file(dir / "naive_bayes.json"));
    return c;
  }
  (void)d;
  c.net.emplace(c.config);
  tensor::load_checkpoint(dir / "model", c.net->parameters(), models::config_hash(c.config));
  return c;
}

// ---- stage bodies

std::string safe_name(const std::string& id) {
  std::string s;
  for (char ch : id) s.push_back(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ? ch : '_');
  return s.empty() ? "doc" : s;
}

Manifest run_prep(const RunConfig& cfg, std::ostream& log) {
  Manifest m = begin(cfg, Stage::kPrep, {}, cfg.section("prep"));
  const auto raw = load_corpus(cfg.paths.corpus);
  auto pc = textprep::load_prep_config(cfg.paths.assets);
  pc.min_token_len = cfg.prep.min_token_len;
  pc.steps = cfg.prep.steps;
  textprep::validate(pc);
  std::vector<textprep::CleanDocument> cleaned(raw.size());
  parallel_for(raw.size(), [&](std::size_t i) { cleaned[i] = textprep::run_pipeline(raw[i], pc); });
  const auto kept = textprep::dedupe_and_drop_empty(cleaned);
  const fs::path dir = stage_dir(cfg, Stage::kPrep);
  write_artifact(dir, m, "clean.csv", clean_csv(kept));
  std::size_t tokens = 0;
  for (const auto& d : kept) tokens += d.tokens.size();
  m.summary = {{"raw_documents", raw.size()}, {"kept_documents", kept.size()},
               {"dropped_documents", raw.size() - kept.size()}, {"tokens", tokens}};
  write_manifest(dir, m);
  log << "prep: " << kept.size() << " of " << raw.size() << " documents kept\n";
  return m;
}

// Labeling schemes compared by how well one BoW Naive Bayes learns each scheme's labels.
std::string scheme_comparison(const RunConfig& cfg, std::span<const textprep::CleanDocument> docs,
                              const lexlabel::PolarityLexicon& lex, const textprep::Tagger& tagger) {
  csv::Row header{"scheme", "negative", "neutral", "positive", "nb_accuracy", "nb_accuracy_std", "nb_macro_f1"};
  const bool has_gold = !docs.empty() && std::all_of(docs.begin(), docs.end(), [](const auto& d) { return d.label; });
  if (has_gold) header.push_back("gold_agreement");
  std::string out = csv::format_row(header);
  const auto vocab = featurize::Vocabulary::build(docs, 1, true);
  std::vector<featurize::SparseVector> x;
  for (const auto& d : docs) x.push_back(featurize::bow_vectorize(d.tokens, vocab));
  for (auto scheme : {lexlabel::Scheme::kPattern, lexlabel::Scheme::kValence, lexlabel::Scheme::kSynset}) {
    const auto lc = lexlabel::label_corpus(docs, scheme, lex, cfg.label.score, tagger);
    std::vector<int> y;
    for (const auto& e : lc.examples) y.push_back(e.label.value);
    csv::Row row{std::string(lexlabel::scheme_name(scheme)), std::to_string(lc.counts.negative),
                 std::to_string(lc.counts.neutral), std::to_string(lc.counts.positive)};
    const std::size_t k = 5;
    std::map<int, std::size_t> per;
    for (int v : y) ++per[v];
    const bool stratify = per.size() > 1 && std::all_of(per.begin(), per.end(), [&](auto& p) { return p.second >= k; });
    if (docs.size() >= k && per.size() > 1) {
      evalstats::FoldTrainer trainer = [&](std::span<const std::size_t> tr, std::uint64_t) {
        std::vector<featurize::SparseVector> xs;
        std::vector<std::size_t> cs;
        for (auto i : tr) {
          xs.push_back(x[i]);
          cs.push_back(models::label_to_class(y[i]));
        }
        auto nb = std::make_shared<models::NaiveBayesModel>(models::train_naive_bayes(xs, cs, 1.0));
        return evalstats::Predictor(
            [nb, &x](std::size_t i) { return models::class_to_label(models::predict_nb(*nb, x[i])); });
      };
      evalstats::CrossValOptions o;
      o.k = k;
      o.stratified = stratify;
      o.seed = derive_seed(cfg.seed, kBenchmarkStream);
      const auto r = evalstats::cross_validate(trainer, y, kLabels, o);
      row.push_back(fmt(r.accuracy.mean));
      row.push_back(fmt(r.accuracy.std));
      row.push_back(fmt(r.macro_f1.mean));
    } else {
      row.insert(row.end(), {"", "", ""});
    }
    if (has_gold) {
      std::size_t agree = 0;
      for (std::size_t i = 0; i < docs.size(); ++i) agree += *docs[i].label == y[i];
      row.push_back(fmt(static_cast<double>(agree) / static_cast<double>(docs.size())));
    }
    out += csv::format_row(row);
  }
  return out;
}

Manifest run_label(const RunConfig& cfg, std::ostream& log) {
  require(cfg, Stage::kPrep);
  Manifest m = begin(cfg, Stage::kLabel, {Stage::kPrep}, cfg.section("label"));
  const auto docs = read_clean(stage_dir(cfg, Stage::kPrep) / "clean.csv");
  const auto tagger = textprep::Tagger::from_file(fs::path(cfg.paths.assets) / "pos_lexicon.tsv");
  const auto lex = lexlabel::PolarityLexicon::from_file(cfg.paths.lexicon, tagger);
  const auto lc = lexlabel::label_corpus(docs, cfg.label.score.scheme, lex, cfg.label.score, tagger);
  std::string out = csv::format_row({"id", "score", "label"});
  lexlabel::ClassCounts counts;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    int label = lc.examples[i].label.value;
    if (cfg.label.source == "gold") {
      if (!docs[i].label)
        throw Error(ErrorCode::kInvalidConfig, "label.source is gold but document " + docs[i].id + " has no label");
      label = *docs[i].label;
    }
    (label < 0 ? counts.negative : label == 0 ? counts.neutral : counts.positive)++;
    out += csv::format_row({docs[i].id, fmt(lc.examples[i].score), std::to_string(label)});
  }
  const fs::path dir = stage_dir(cfg, Stage::kLabel);
  write_artifact(dir, m, "labels.csv", out);
  ojson summary{{"source", cfg.label.source},
                {"scheme", lexlabel::scheme_name(cfg.label.score.scheme)},
                {"negative", counts.negative},
                {"neutral", counts.neutral},
                {"positive", counts.positive},
                {"total", counts.total()}};
  write_artifact(dir, m, "summary.json", summary.dump(2) + "\n");
  write_artifact(dir, m, "scheme_comparison.csv", scheme_comparison(cfg, docs, lex, tagger));
  m.summary = summary;
  write_manifest(dir, m);
  log << "label: " << counts.negative << " negative, " << counts.neutral << " neutral, " << counts.positive
      << " positive\n";
  return m;
}

Manifest run_featurize(const RunConfig& cfg, std::ostream& log) {
  require(cfg, Stage::kPrep);
  require(cfg, Stage::kLabel);
  Manifest m = begin(cfg, Stage::kFeaturize, {Stage::kLabel}, cfg.section("feature"));
  const auto docs = read_clean(stage_dir(cfg, Stage::kPrep) / "clean.csv");
  const auto labels = read_labels(stage_dir(cfg, Stage::kLabel) / "labels.csv", docs.size());
  const auto sp = split(labels, cfg.feature.ratios, derive_seed(cfg.seed, kSplitStream), cfg.feature.stratified);
  std::vector<textprep::CleanDocument> train_docs;
  for (auto i : sp.train) train_docs.push_back(docs[i]);
  const auto vocab = featurize::Vocabulary::build(train_docs, cfg.feature.min_count);
  const auto w2v = featurize::train_word2vec(train_docs, cfg.feature.word2vec);
  std::vector<featurize::SparseVector> bow(docs.size()), tfidf(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) {
    bow[i] = featurize::bow_vectorize(docs[i].tokens, vocab);
    tfidf[i] = featurize::tfidf_transform(docs[i].tokens, vocab);
  });
  std::vector<std::string> test_tokens;
  for (auto i : sp.test) test_tokens.insert(test_tokens.end(), docs[i].tokens.begin(), docs[i].tokens.end());

  const fs::path dir = stage_dir(cfg, Stage::kFeaturize);
  write_artifact(dir, m, "split.json", to_json(sp).dump() + "\n");
  write_artifact(dir, m, "vocab.txt", vocab.serialize());
  write_artifact(dir, m, "word2vec.tsv", w2v_text(w2v));
  write_artifact(dir, m, "bow.tsv", sparse_text(docs, bow));
  write_artifact(dir, m, "tfidf.tsv", sparse_text(docs, tfidf));
  m.summary = {{"train", sp.train.size()},
               {"val", sp.val.size()},
               {"test", sp.test.size()},
               {"vocab_size", vocab.size()},
               {"word2vec_dim", w2v.dim},
               {"test_coverage", vocab.coverage(test_tokens)}};
  write_manifest(dir, m);
  log << "featurize: split " << sp.train.size() << "/" << sp.val.size() << "/" << sp.test.size() << ", vocabulary "
      << vocab.size() << "\n";
  return m;
}

ojson model_and_train(const RunConfig& cfg) { return {{"model", cfg.section("model")}, {"train", cfg.section("train")}}; }

GridEntry configured(const RunConfig& cfg) { return {cfg.model.config.arch, cfg.model.embedding, cfg.model.ablation}; }

Manifest run_train(const RunConfig& cfg, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  Manifest m = begin(cfg, Stage::kTrain, {Stage::kFeaturize}, model_and_train(cfg));
  const fs::path dir = stage_dir(cfg, Stage::kTrain);
  fs::create_directories(dir);
  models::TrainConfig tc = cfg.train;
  const GridEntry spec = configured(cfg);
  Classifier c = fit(cfg, spec, d, d.split.train, d.split.val, tc);

  ojson mc{{"model", models::to_json(c.config)},
           {"embedding", embedding_name(spec.embedding)},
           {"ablation", models::ablation_name(spec.ablation)},
           {"config_hash", models::config_hash(c.config)}};
  write_artifact(dir, m, "model_config.json", mc.dump(2) + "\n");
  if (c.nb) {
    write_artifact(dir, m, "naive_bayes.json", nb_json(*c.nb));
    m.summary = {{"arch", "naive_bayes"}};
  } else {
    tensor::save_checkpoint(dir / "model", c.net->parameters(), models::config_hash(c.config));
    record_file(dir, m, "model.json");
    record_file(dir, m, "model.bin");
    write_artifact(dir, m, "history.csv", models::history_csv(c.result.history));
    const auto& last = c.result.history.back();
    m.summary = {{"arch", models::arch_name(c.config.arch)},
                 {"parameters", c.net->parameters().scalar_count()},
                 {"epochs_run", last.epoch},
                 {"best_epoch", c.result.best_epoch},
                 {"best_val_loss", c.result.best_val_loss},
                 {"stopped_early", c.result.stopped_early}};
    double secs = 0.0;
    for (const auto& h : c.result.history) secs += h.seconds;
    log << "train: " << last.epoch << " epochs in " << std::lround(secs) << " s, best epoch " << c.result.best_epoch
        << " (val loss " << c.result.best_val_loss << ")\n";
  }
  write_manifest(dir, m);
  return m;
}

Manifest run_tune(const RunConfig& cfg, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  Manifest m = begin(cfg, Stage::kTune, {Stage::kFeaturize},
                     {{"model", cfg.section("model")}, {"train", cfg.section("train")}, {"tune", cfg.section("tune")}});
  const GridEntry spec = configured(cfg);
  if (spec.arch == models::Arch::kNaiveBayes) throw Error(ErrorCode::kInvalidConfig, "tune needs a neural model arch");
  const auto base = resolve_model(cfg, spec, d);
  std::vector<models::Example> tr, va;
  for (auto i : d.split.train) tr.push_back(neural_input(d, i, d.docs[i].tokens, spec.embedding, base).x);
  for (auto i : d.split.val) va.push_back(neural_input(d, i, d.docs[i].tokens, spec.embedding, base).x);
  models::TrainConfig tc = cfg.train;
  tc.max_epochs = cfg.tune.max_epochs;
  const auto r = models::tune_random_search(cfg.tune.space, base, tc, tr, va, derive_seed(cfg.seed, kTuneStream));
  const fs::path dir = stage_dir(cfg, Stage::kTune);
  write_artifact(dir, m, "trials.csv", models::trial_log_csv(r.trials));
  ojson best{{"trial", r.best_index}, {"lr", r.best_lr}, {"model", models::to_json(r.best_config)}};
  write_artifact(dir, m, "best_config.json", best.dump(2) + "\n");
  m.summary = {{"trials", r.trials.size()}, {"best_trial", r.best_index}, {"best_val_loss", r.trials[r.best_index].val_loss}};
  write_manifest(dir, m);
  log << "tune: " << r.trials.size() << " trials, best " << r.best_index << " (val loss "
      << r.trials[r.best_index].val_loss << ")\n";
  return m;
}

Manifest run_eval(const RunConfig& cfg, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  const Classifier c = load_classifier(cfg, d);
  Manifest m = begin(cfg, Stage::kEval, {Stage::kTrain}, ojson::object());
  std::vector<int> truth, pred;
  std::string preds = csv::format_row({"id", "label", "predicted", "p_negative", "p_neutral", "p_positive"});
  for (auto i : d.split.test) {
    const auto p = c.predict(d, i);
    const int y = models::class_to_label(explain::argmax(p));
    truth.push_back(d.labels[i]);
    pred.push_back(y);
    preds += csv::format_row({d.docs[i].id, std::to_string(d.labels[i]), std::to_string(y), fmt(p[0]), fmt(p[1]), fmt(p[2])});
  }
  const auto cm = evalstats::confusion(truth, pred, kLabels);
  const auto report = evalstats::metrics(cm);
  ojson j;
  j["config_hash"] = m.hash;
  j["model"] = configured(cfg).label();
  j["embedding"] = embedding_name(c.spec.embedding);
  j["split"] = "test";
  j["metrics"] = evalstats::to_json(report);
  j["confusion"] = evalstats::to_json(cm);
  const fs::path dir = stage_dir(cfg, Stage::kEval);
  write_artifact(dir, m, "metrics.json", j.dump(2) + "\n");
  write_artifact(dir, m, "predictions.csv", preds);
  m.summary = {{"accuracy", report.accuracy}, {"macro_f1", report.macro_f1}, {"test_documents", truth.size()}};
  write_manifest(dir, m);
  char line[160];
  std::snprintf(line, sizeof line, "eval: test accuracy %.4f, macro F1 %.4f on %zu documents\n", report.accuracy,
                report.macro_f1, truth.size());
  log << line;
  return m;
}

Manifest run_benchmark(const RunConfig& cfg, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  Manifest m = begin(cfg, Stage::kBenchmark, {Stage::kFeaturize},
                     {{"model", cfg.section("model")}, {"train", cfg.section("train")}, {"eval", cfg.section("eval")}});
  if (cfg.eval.grid.empty()) throw Error(ErrorCode::kInvalidConfig, "eval.grid is empty");
  models::TrainConfig tc = cfg.train;
  tc.max_epochs = cfg.eval.max_epochs;
  evalstats::CrossValOptions o;
  o.k = cfg.eval.k;
  o.stratified = cfg.eval.stratified;
  o.seed = derive_seed(cfg.seed, kBenchmarkStream);  // shared folds keep the comparison paired
  o.parallel = cfg.eval.parallel;

  std::vector<evalstats::BenchmarkRow> rows;
  std::string folds = csv::format_row({"model", "embedding", "fold", "accuracy", "macro_precision", "macro_recall",
                                       "macro_f1"});
  for (const auto& spec : cfg.eval.grid) {
    evalstats::FoldTrainer trainer = [&](std::span<const std::size_t> train_idx, std::uint64_t seed) {
      // a tenth of the fold's training part watches early stopping
      std::vector<std::size_t> pool(train_idx.begin(), train_idx.end());
      Rng rng(seed);
      rng.shuffle(std::span<std::size_t>(pool));
      const std::size_t n_val = std::max<std::size_t>(1, pool.size() / 10);
      std::vector<std::size_t> va(pool.begin(), pool.begin() + n_val), tr(pool.begin() + n_val, pool.end());
      std::sort(va.begin(), va.end());
      std::sort(tr.begin(), tr.end());
      models::TrainConfig fold_tc = tc;
      fold_tc.shuffle_seed = derive_seed(seed, kShuffleStream);
      auto c = std::make_shared<Classifier>(fit(cfg, spec, d, tr, va, fold_tc));
      return evalstats::Predictor(
          [c, &d](std::size_t i) { return models::class_to_label(explain::argmax(c->predict(d, i))); });
    };
    auto r = evalstats::cross_validate(trainer, d.labels, kLabels, o);
    for (std::size_t f = 0; f < r.outcomes.size(); ++f) {
      const auto& rep = r.outcomes[f].report;
      folds += csv::format_row({spec.label(), std::string(embedding_name(spec.embedding)), std::to_string(f),
                                fmt(rep.accuracy), fmt(rep.macro_precision), fmt(rep.macro_recall), fmt(rep.macro_f1)});
    }
    char line[200];
    std::snprintf(line, sizeof line, "benchmark: %-28s accuracy %.4f +- %.4f\n",
                  (spec.label() + "/" + std::string(embedding_name(spec.embedding))).c_str(), r.accuracy.mean,
                  r.accuracy.std);
    log << line;
    rows.push_back({spec.label(), std::string(embedding_name(spec.embedding)), std::move(r)});
  }

  // first grid entry against every other one on fold accuracy
  std::string tt = csv::format_row({"model_a", "model_b", "t_value", "df", "p_value", "adjusted_p", "significant"});
  const std::size_t comparisons = rows.size() - 1;
  const auto base_acc = rows[0].result.fold_values(&evalstats::MetricsReport::accuracy);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::string a = rows[0].model + "/" + rows[0].embedding, b = rows[i].model + "/" + rows[i].embedding;
    try {
      const auto t = evalstats::paired_ttest(base_acc, rows[i].result.fold_values(&evalstats::MetricsReport::accuracy),
                                             cfg.eval.alpha, comparisons);
      tt += csv::format_row({a, b, fmt(t.t_value), std::to_string(t.df), fmt(t.p_value), fmt(t.adjusted_p),
                             t.significant ? "true" : "false"});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroVariance) throw;
      tt += csv::format_row({a, b, "", std::to_string(base_acc.size() - 1), "", "", "zero_variance"});
    }
  }
  const fs::path dir = stage_dir(cfg, Stage::kBenchmark);
  write_artifact(dir, m, "benchmark.csv", evalstats::benchmark_csv(rows, true));
  write_artifact(dir, m, "folds.csv", folds);
  write_artifact(dir, m, "ttests.csv", tt);
  // timing columns vary run to run; the fingerprint above would too
  m.files.erase("benchmark.csv");
  m.summary = {{"models", rows.size()}, {"folds", cfg.eval.k}, {"timed_file", "benchmark.csv"}};
  write_manifest(dir, m);
  return m;
}

Manifest run_explain(const RunConfig& cfg, std::ostream& log) {
  const Dataset d = load_dataset(cfg);
  const Classifier c = load_classifier(cfg, d);
  Manifest m = begin(cfg, Stage::kExplain, {Stage::kTrain}, cfg.section("explain"));
  std::vector<std::size_t> chosen;
  if (!cfg.explain.doc_id.empty()) {
    for (std::size_t i = 0; i < d.docs.size(); ++i)
      if (d.docs[i].id == cfg.explain.doc_id) chosen.push_back(i);
    if (chosen.empty()) throw Error(ErrorCode::kInvalidConfig, "no document with id " + cfg.explain.doc_id);
  } else {
    for (auto i : d.split.test)
      if (chosen.size() < cfg.explain.docs && !d.docs[i].tokens.empty()) chosen.push_back(i);
  }
  const auto policy = explain::parse_mask_policy(cfg.explain.mask_policy);
  const fs::path dir = stage_dir(cfg, Stage::kExplain);
  fs::create_directories(dir);
  std::vector<explain::Attribution> all;
  std::set<std::string> used;
  ojson index = ojson::array();
  for (auto i : chosen) {
    std::vector<std::string> tokens;
    explain::ProbabilityFn fn;
    std::string policy_used;
    if (c.nb) {
      tokens = d.docs[i].tokens;
      fn = explain::naive_bayes_probability(*c.nb, d.vocab, tokens);
      policy_used = "removal";
    } else {
      auto in = neural_input(d, i, d.docs[i].tokens, c.spec.embedding, c.config);
      tokens = in.tokens;
      if (policy == explain::MaskPolicy::kZeroEmbedding && row_per_token(c.spec.embedding)) {
        fn = explain::neural_probability(*c.net, in.x, policy);
        policy_used = "zero_embedding";
      } else {
        if (c.spec.embedding == Embedding::kExternal)
          throw Error(ErrorCode::kInvalidConfig, "removal masking needs token-level features");
        // rebuild the features from the kept tokens
        fn = [&c, &d, i, tokens](std::span<const std::uint8_t> present) {
          std::vector<std::string> kept;
          for (std::size_t t = 0; t < tokens.size(); ++t)
            if (present[t]) kept.push_back(tokens[t]);
          return c.net->predict(neural_input(d, i, kept, c.spec.embedding, c.config).x);
        };
        policy_used = "removal";
      }
    }
    if (tokens.empty()) continue;
    explain::Attribution a;
    if (cfg.explain.method == "lime") {
      a = explain::lime_explain(fn, tokens, cfg.explain.lime, d.docs[i].id, policy_used);
    } else {
      explain::ShapleyOptions so;
      so.doc_id = d.docs[i].id;
      so.mask_policy = policy_used;
      a = tokens.size() <= cfg.explain.max_tokens
              ? explain::shapley_exact(fn, tokens, so)
              : explain::shapley_grouped(fn, tokens, explain::contiguous_partition(tokens.size(), cfg.explain.max_tokens), so);
    }
    std::string name = safe_name(a.doc_id);
    while (used.count(name)) name += "_";
    used.insert(name);
    ojson j = explain::to_json(a);
    j["config_hash"] = m.hash;
    write_artifact(dir, m, name + ".json", j.dump(2) + "\n");
    write_artifact(dir, m, name + ".html", explain::render_text_report(a, explain::ReportFormat::kHtml));
    index.push_back({{"doc_id", a.doc_id}, {"file", name}, {"method", explain::method_name(a.method)},
                     {"target_class", a.target_class}, {"efficiency_residual", a.efficiency_residual()}});
    all.push_back(std::move(a));
  }
  const auto summary = explain::global_bar_summary(all, cfg.explain.top_k);
  write_artifact(dir, m, "summary.csv", explain::summary_csv(summary));
  write_artifact(dir, m, "summary.html", explain::render_bar_report(summary, "Token importance"));
  write_artifact(dir, m, "index.json", ojson{{"config_hash", m.hash}, {"documents", index}}.dump(2) + "\n");
  m.summary = {{"documents", all.size()}, {"method", cfg.explain.method}};
  write_manifest(dir, m);
  log << "explain: " << all.size() << " documents attributed with " << cfg.explain.method << "\n";
  return m;
}

// ---- report

std::string svg_curves(const std::vector<std::vector<std::string>>& rows, std::size_t a, std::size_t b,
                       const std::string& title) {
  const double w = 360, h = 180, pad = 30;
  std::vector<double> va, vb;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    va.push_back(std::stod(rows[r][a]));
    vb.push_back(std::stod(rows[r][b]));
  }
  double lo = 1e300, hi = -1e300;
  for (double v : va) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : vb) lo = std::min(lo, v), hi = std::max(hi, v);
  if (hi - lo < 1e-12) hi = lo + 1.0;
  auto line = [&](const std::vector<double>& v, const char* color) {
    std::string pts;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = pad + (v.size() > 1 ? (w - 2 * pad) * static_cast<double>(i) / static_cast<double>(v.size() - 1) : 0.0);
      const double y = h - pad - (h - 2 * pad) * (v[i] - lo) / (hi - lo);
      char buf[48];
      std::snprintf(buf, sizeof buf, "%s%.1f,%.1f", i ? " " : "", x, y);
      pts += buf;
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + pts + "\"/>";
  };
  char range[96];
  std::snprintf(range, sizeof range, "%.3f to %.3f", lo, hi);
  return "<figure><svg xmlns=\"http://www.w3.org/2000/svg\" width=\"360\" height=\"180\">"
         "<rect width=\"360\" height=\"180\" fill=\"#fafafa\" stroke=\"#ccc\"/>" +
         line(va, "#1f77b4") + line(vb, "#ff7f0e") + "</svg><figcaption>" + explain::html_escape(title) +
         " (blue train, orange validation; " + range + ")</figcaption></figure>\n";
}

std::string csv_table(const std::string& text, const std::set<std::string>& skip = {}) {
  const auto rows = csv::parse(text);
  std::string out = "<table>\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() == 1 && rows[r][0].empty()) continue;
    out += "<tr>";
    for (std::size_t col = 0; col < rows[r].size(); ++col) {
      if (col < rows[0].size() && skip.count(rows[0][col])) continue;
      const auto& cell = rows[r][col];
      std::string v = cell;
      if (r > 0) {
        char* end = nullptr;
        const double x = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end && *end == '\0' && cell.find('.') != std::string::npos) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.4f", x);
          v = buf;
        }
      }
      out += (r == 0 ? "<th>" : "<td>") + explain::html_escape(v) + (r == 0 ? "</th>" : "</td>");
    }
    out += "</tr>\n";
  }
  return out + "</table>\n";
}

Manifest run_report(const RunConfig& cfg, std::ostream& log) {
  require(cfg, Stage::kTrain);
  require(cfg, Stage::kEval);
  require(cfg, Stage::kExplain);
  Manifest m = begin(cfg, Stage::kReport, {Stage::kTrain, Stage::kEval, Stage::kExplain}, ojson::object());
  const fs::path models_dir = stage_dir(cfg, Stage::kTrain), metrics_dir = stage_dir(cfg, Stage::kEval),
                 expl_dir = stage_dir(cfg, Stage::kExplain);
  std::string html =
      "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Run report</title><style>"
      "body{font-family:sans-serif;margin:2em;color:#222}table{border-collapse:collapse;margin:1em 0}"
      "td,th{border:1px solid #ccc;padding:3px 8px;text-align:right}th{background:#eee}"
      "figure{display:inline-block;margin:1em}</style></head><body>\n<h1>Run report</h1>\n";
  html += "<p>seed " + std::to_string(cfg.seed) + ", report hash " + m.hash + "</p>\n";

  const auto metrics = nlohmann::json::parse(io::read_file(metrics_dir / "metrics.json"));
  html += "<h2>Test metrics</h2>\n<table><tr><th>model</th><th>embedding</th><th>accuracy</th><th>macro P</th>"
          "<th>macro R</th><th>macro F1</th></tr>\n";
  char buf[256];
  const auto& mt = metrics["metrics"];
  std::snprintf(buf, sizeof buf, "<td>%.4f</td><td>%.4f</td><td>%.4f</td><td>%.4f</td>", mt["accuracy"].get<double>(),
                mt["macro_precision"].get<double>(), mt["macro_recall"].get<double>(), mt["macro_f1"].get<double>());
  html += "<tr><td>" + explain::html_escape(metrics["model"].get<std::string>()) + "</td><td>" +
          explain::html_escape(metrics["embedding"].get<std::string>()) + "</td>" + buf + "</tr></table>\n";
  html += "<h3>Confusion matrix (rows true, columns predicted: -1, 0, 1)</h3>\n<table>\n";
  for (const auto& row : metrics["confusion"]["counts"]) {
    html += "<tr>";
    for (const auto& v : row) html += "<td>" + std::to_string(v.get<std::size_t>()) + "</td>";
    html += "</tr>\n";
  }
  html += "</table>\n";

  if (fs::exists(models_dir / "history.csv")) {
    const std::string hist = io::read_file(models_dir / "history.csv");
    const auto rows = csv::parse(hist);
    html += "<h2>Training history</h2>\n";
    if (rows.size() > 1) {
      html += svg_curves(rows, 2, 4, "Loss") + svg_curves(rows, 3, 5, "Accuracy");
    }
    html += csv_table(hist);
  }
  const fs::path bench = stage_dir(cfg, Stage::kBenchmark);
  if (fs::exists(bench / "manifest.json") && read_manifest(bench).hash == stage_hash(cfg, Stage::kBenchmark)) {
    html += "<h2>Cross-validated benchmark</h2>\n" + csv_table(io::read_file(bench / "benchmark.csv"), {"train_seconds", "inference_seconds"});
    html += "<h3>Paired t-tests on fold accuracy (Bonferroni adjusted)</h3>\n" + csv_table(io::read_file(bench / "ttests.csv"));
  }
  html += "<h2>Token importance</h2>\n" + csv_table(io::read_file(expl_dir / "summary.csv"));
  const auto index = nlohmann::json::parse(io::read_file(expl_dir / "index.json"));
  html += "<h2>Explained documents</h2>\n<ul>\n";
  for (const auto& e : index["documents"])
    html += "<li><a href=\"../explanations/" + explain::html_escape(e["file"].get<std::string>()) + ".html\">" +
            explain::html_escape(e["doc_id"].get<std::string>()) + "</a></li>\n";
  html += "</ul>\n</body></html>\n";
  const fs::path dir = stage_dir(cfg, Stage::kReport);
  write_artifact(dir, m, "index.html", html);
  write_manifest(dir, m);
  log << "report: " << (dir / "index.html").string() << "\n";
  return m;
}

}  // namespace

std::string_view stage_name(Stage s) {
  for (const auto& [k, v] : kStages)
    if (k == s) return v;
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (const auto& [k, v] : kStages)
    if (v == name) return k;
  throw Error(ErrorCode::kInvalidConfig, "unknown stage '" + std::string(name) + "'");
}

fs::path stage_dir(const RunConfig& cfg, Stage s) {
  const fs::path out = cfg.paths.out;
  switch (s) {
    case Stage::kPrep: return out / "prep";
    case Stage::kLabel: return out / "labels";
    case Stage::kFeaturize: return out / "features";
    case Stage::kTrain: return out / "models";
    case Stage::kTune: return out / "models" / "tune";
    case Stage::kEval: return out / "metrics";
    case Stage::kBenchmark: return out / "metrics" / "benchmark";
    case Stage::kExplain: return out / "explanations";
    case Stage::kReport: return out / "report";
  }
  return out;
}

std::string stage_hash(const RunConfig& cfg, Stage s) {
  ojson j;
  j["stage"] = stage_name(s);
  switch (s) {
    case Stage::kPrep: {
      j["config"] = cfg.section("prep");
      j["corpus"] = file_fp(cfg.paths.corpus);
      ojson assets;
      for (const char* f : kAssetFiles) assets[f] = file_fp(fs::path(cfg.paths.assets) / f);
      j["assets"] = assets;
      break;
    }
    case Stage::kLabel:
      j["upstream"] = stage_hash(cfg, Stage::kPrep);
      j["config"] = cfg.section("label");
      j["lexicon"] = file_fp(cfg.paths.lexicon);
      j["tagger"] = file_fp(fs::path(cfg.paths.assets) / "pos_lexicon.tsv");
      break;
    case Stage::kFeaturize:
      j["upstream"] = stage_hash(cfg, Stage::kLabel);
      j["config"] = cfg.section("feature");
      j["seed"] = cfg.seed;
      break;
    case Stage::kTrain:
    case Stage::kTune:
    case Stage::kBenchmark:
      j["upstream"] = stage_hash(cfg, Stage::kFeaturize);
      j["model"] = cfg.section("model");
      j["train"] = cfg.section("train");
      j["seed"] = cfg.seed;
      if (s == Stage::kTune) j["tune"] = cfg.section("tune");
      if (s == Stage::kBenchmark) j["eval"] = cfg.section("eval");
      if (needs_external(cfg)) j["external"] = file_fp(cfg.paths.external_embeddings);
      break;
    case Stage::kEval:
      j["upstream"] = stage_hash(cfg, Stage::kTrain);
      break;
    case Stage::kExplain:
      j["upstream"] = stage_hash(cfg, Stage::kTrain);
      j["config"] = cfg.section("explain");
      j["seed"] = cfg.seed;
      break;
    case Stage::kReport:
      j["upstream"] = {stage_hash(cfg, Stage::kEval), stage_hash(cfg, Stage::kExplain)};
      break;
  }
  return fingerprint(j.dump());
}

Manifest run_stage(const RunConfig& cfg, Stage s, std::ostream& log) {
  try {
    switch (s) {
      case Stage::kPrep: return run_prep(cfg, log);
      case Stage::kLabel: return run_label(cfg, log);
      case Stage::kFeaturize: return run_featurize(cfg, log);
      case Stage::kTrain: return run_train(cfg, log);
      case Stage::kTune: return run_tune(cfg, log);
      case Stage::kEval: return run_eval(cfg, log);
      case Stage::kBenchmark: return run_benchmark(cfg, log);
      case Stage::kExplain: return run_explain(cfg, log);
      case Stage::kReport: return run_report(cfg, log);
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(std::string(stage_name(s)), e);
  } catch (const std::exception& e) {
    throw StageError(std::string(stage_name(s)), Error(ErrorCode::kIo, e.what()));
  }
  return {};
}

}  // namespace tlab::pipeline
