#include "tlab/pipeline/split.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "tlab/common/error.h"
#include "tlab/common/rng.h"

namespace tlab::pipeline {

void validate_ratios(const std::array<double, 3>& ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw Error(ErrorCode::kBadRatios, "split ratios must be non-negative");
    sum += r;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw Error(ErrorCode::kBadRatios, "split ratios sum to " + std::to_string(sum));
}

DatasetSplit split(std::span<const int> labels, std::array<double, 3> ratios, std::uint64_t seed, bool stratified) {
  validate_ratios(ratios);
  DatasetSplit out;
  out.ratios = ratios;
  out.seed = seed;
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> groups;
  if (stratified) {
    std::map<int, std::vector<std::size_t>> by;
    for (std::size_t i = 0; i < labels.size(); ++i) by[labels[i]].push_back(i);
    for (auto& [k, v] : by) groups.push_back(std::move(v));
  } else {
    groups.emplace_back(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) groups[0][i] = i;
  }
  for (auto& g : groups) {
    rng.shuffle(std::span<std::size_t>(g));
    const double n = static_cast<double>(g.size());
    const auto n_train = std::min(g.size(), static_cast<std::size_t>(std::llround(n * ratios[0])));
    const auto n_val = std::min(g.size() - n_train, static_cast<std::size_t>(std::llround(n * ratios[1])));
    out.train.insert(out.train.end(), g.begin(), g.begin() + n_train);
    out.val.insert(out.val.end(), g.begin() + n_train, g.begin() + n_train + n_val);
    out.test.insert(out.test.end(), g.begin() + n_train + n_val, g.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

nlohmann::ordered_json to_json(const DatasetSplit& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["ratios"] = s.ratios;
  j["train"] = s.train;
  j["val"] = s.val;
  j["test"] = s.test;
  return j;
}

DatasetSplit split_from_json(const nlohmann::json& j) {
  try {
    DatasetSplit s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.ratios = j.at("ratios").get<std::array<double, 3>>();
    s.train = j.at("train").get<std::vector<std::size_t>>();
    s.val = j.at("val").get<std::vector<std::size_t>>();
    s.test = j.at("test").get<std::vector<std::size_t>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("split file: ") + e.what());
  }
}

}  // namespace tlab::pipeline
