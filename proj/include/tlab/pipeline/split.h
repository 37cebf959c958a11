#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace tlab::pipeline {

struct DatasetSplit {
  std::vector<std::size_t> train, val, test;  // ascending
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
  std::uint64_t seed = 0;
};

// Seeded shuffle then partition. Train and val sizes are rounded to the
// nearest integer, test takes the rest. Stratified splits apply the same
// rule within each label. Throws BadRatios.
// Non-negative and summing to 1. Throws BadRatios.
void validate_ratios(const std::array<double, 3>& ratios);

DatasetSplit split(std::span<const int> labels, std::array<double, 3> ratios, std::uint64_t seed, bool stratified);

nlohmann::ordered_json to_json(const DatasetSplit& s);
DatasetSplit split_from_json(const nlohmann::json& j);

}  // namespace tlab::pipeline
