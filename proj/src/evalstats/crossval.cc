#include "tlab/evalstats/crossval.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "tlab/common/csv.h"
#include "tlab/common/error.h"
#include "tlab/common/io.h"
#include "tlab/common/parallel.h"
#include "tlab/common/rng.h"

namespace tlab::evalstats {

std::vector<Fold> kfold_split(std::span<const int> labels, std::size_t k, bool stratified, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidConfig, "kfold_split: k must be at least 2");
  if (labels.size() < k)
    throw Error(ErrorCode::kTooFewExamples,
                "kfold_split: " + std::to_string(labels.size()) + " examples for " + std::to_string(k) + " folds");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> groups;
  if (stratified) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    for (auto& [label, members] : by_class) {
      if (members.size() < k)
        throw Error(ErrorCode::kTooFewExamples, "kfold_split: class " + std::to_string(label) + " has " +
                                                    std::to_string(members.size()) + " members for " +
                                                    std::to_string(k) + " folds");
      groups.push_back(std::move(members));
    }
  } else {
    groups.emplace_back(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) groups[0][i] = i;
  }

  std::vector<std::vector<std::size_t>> tests(k);
  std::size_t slot = 0;
  for (auto& g : groups) {
    rng.shuffle(std::span<std::size_t>(g));
    for (auto idx : g) {
      tests[slot].push_back(idx);
      slot = (slot + 1) % k;
    }
  }
  std::vector<Fold> folds(k);
  std::vector<std::size_t> owner(labels.size());
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(tests[f].begin(), tests[f].end());
    for (auto idx : tests[f]) owner[idx] = f;
    folds[f].test = std::move(tests[f]);
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t f = 0; f < k; ++f)
      if (owner[i] != f) folds[f].train.push_back(i);
  return folds;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::vector<double> CrossValResult::fold_values(double MetricsReport::*field) const {
  std::vector<double> out;
  for (const auto& o : outcomes) out.push_back(o.report.*field);
  return out;
}

CrossValResult cross_validate(const FoldTrainer& trainer, std::span<const int> labels,
                              std::span<const int> classes, const CrossValOptions& opts) {
  CrossValResult res;
  res.folds = kfold_split(labels, opts.k, opts.stratified, opts.seed);
  res.outcomes.resize(res.folds.size());
  auto run = [&](std::size_t f) {
    using clock = std::chrono::steady_clock;
    const auto& fold = res.folds[f];
    const auto t0 = clock::now();
    Predictor predict = trainer(fold.train, derive_seed(opts.seed, f));
    const auto t1 = clock::now();
    std::vector<int> truth, pred;
    for (auto idx : fold.test) {
      truth.push_back(labels[idx]);
      pred.push_back(predict(idx));
    }
    const auto t2 = clock::now();
    auto& out = res.outcomes[f];
    out.report = metrics(confusion(truth, pred, classes));
    out.train_seconds = std::chrono::duration<double>(t1 - t0).count();
    out.inference_seconds = std::chrono::duration<double>(t2 - t1).count();
  };
  if (opts.parallel) parallel_for(res.folds.size(), run);
  else
    for (std::size_t f = 0; f < res.folds.size(); ++f) run(f);

  auto summarize = [&](double MetricsReport::*field) {
    const auto v = res.fold_values(field);
    return mean_std(v);
  };
  res.macro_precision = summarize(&MetricsReport::macro_precision);
  res.macro_recall = summarize(&MetricsReport::macro_recall);
  res.macro_f1 = summarize(&MetricsReport::macro_f1);
  res.accuracy = summarize(&MetricsReport::accuracy);
  std::vector<double> tr, inf;
  for (const auto& o : res.outcomes) {
    tr.push_back(o.train_seconds);
    inf.push_back(o.inference_seconds);
  }
  res.train_seconds = mean_std(tr);
  res.inference_seconds = mean_std(inf);
  return res;
}

std::string benchmark_csv(std::span<const BenchmarkRow> rows, bool with_timing) {
  csv::Row header{"model",        "embedding",   "macro_precision", "macro_precision_std", "macro_recall",
                  "macro_recall_std", "macro_f1", "macro_f1_std",   "accuracy",            "accuracy_std"};
  if (with_timing) {
    header.push_back("train_seconds");
    header.push_back("inference_seconds");
  }
  std::string out = csv::format_row(header);
  for (const auto& r : rows) {
    const auto& c = r.result;
    csv::Row row{r.model, r.embedding};
    for (const MeanStd& m : {c.macro_precision, c.macro_recall, c.macro_f1, c.accuracy}) {
      row.push_back(io::format_double(m.mean));
      row.push_back(io::format_double(m.std));
    }
    if (with_timing) {
      row.push_back(io::format_double(c.train_seconds.mean));
      row.push_back(io::format_double(c.inference_seconds.mean));
    }
    out += csv::format_row(row);
  }
  return out;
}

}  // namespace tlab::evalstats
