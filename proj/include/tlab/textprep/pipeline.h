#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "tlab/textprep/types.h"

namespace tlab::textprep {

// Loads the shipped asset set from a directory holding stopwords.txt,
// negations.txt, contractions.tsv, emoji.tsv and dictionary.txt.
PrepConfig load_prep_config(const std::filesystem::path& assets_dir);

// Throws InvalidConfig on unknown or out-of-order step names, min_token_len
// of zero, or a contraction key without an apostrophe.
void validate(const PrepConfig& config);

// Runs the enabled steps in canonical order (kStepNames).
CleanDocument run_pipeline(const RawDocument& doc, const PrepConfig& config);

// Drops token-less documents and later duplicates of an already seen
// joined text. Input order is preserved.
std::vector<CleanDocument> dedupe_and_drop_empty(std::span<const CleanDocument> corpus);

}  // namespace tlab::textprep
