#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tlab/textprep/types.h"

namespace tlab::textprep {

// ASCII lowercase; bytes of multi-byte UTF-8 sequences pass through.
std::string normalize_case(std::string_view text);

// Replaces every emoji sequence found in the table (longest match first) by
// its alias surrounded by spaces, then collapses whitespace.
std::string demojize(std::string_view text, const EmojiTable& table);

// Drops whitespace-separated tokens starting with '#', '@', "www" or "http".
// Leading characters that strip_non_alpha would delete are skipped first.
std::string strip_noise(std::string_view text);

// Whole-word contraction expansion. Leading and trailing punctuation around a
// word is kept; typographic apostrophes (U+2018, U+2019) match ASCII keys.
std::string expand_contractions(
    std::string_view text, const std::unordered_map<std::string, std::string>& table);

// Collapses elongated words. A token containing no run of 3+ identical
// characters, or already in the dictionary, is returned as is. Otherwise
// runs of 3+ are shortened to 2, then to 1; the first form found in the
// dictionary wins, else the fully collapsed form is returned.
std::string normalize_repeats(std::string_view token,
                              const std::unordered_set<std::string>& dictionary);

// Keeps [a-z], '_' and spaces; whitespace collapsed to single spaces.
std::string strip_non_alpha(std::string_view text);

std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const PrepConfig& config);

std::string join_tokens(std::span<const std::string> tokens);

}  // namespace tlab::textprep
