#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "tlab/textprep/types.h"

namespace tlab::pipeline {

// CSV with a header containing id and text; an optional label column holds
// -1, 0 or 1 (blank means unlabeled). Other columns land in meta. Throws
// MalformedCsv or DuplicateId.
std::vector<textprep::RawDocument> parse_corpus(std::string_view text);
std::vector<textprep::RawDocument> load_corpus(const std::filesystem::path& path);

}  // namespace tlab::pipeline
