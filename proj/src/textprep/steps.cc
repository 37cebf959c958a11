#include "tlab/textprep/steps.h"

#include <algorithm>

namespace tlab::textprep {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

// Runs of identical characters as (char, length) pairs.
std::vector<std::pair<char, std::size_t>> runs_of(std::string_view token) {
  std::vector<std::pair<char, std::size_t>> runs;
  for (char c : token) {
    if (!runs.empty() && runs.back().first == c) {
      ++runs.back().second;
    } else {
      runs.emplace_back(c, 1);
    }
  }
  return runs;
}

}  // namespace

std::string normalize_case(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string demojize(std::string_view text, const EmojiTable& table) {
  if (table.aliases.empty()) return std::string(text);
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  bool replaced = false;
  while (i < text.size()) {
    const std::size_t longest = std::min(table.max_key_bytes, text.size() - i);
    bool matched = false;
    for (std::size_t len = longest; len > 0; --len) {
      auto it = table.aliases.find(std::string(text.substr(i, len)));
      if (it != table.aliases.end()) {
        out.push_back(' ');
        out += it->second;
        out.push_back(' ');
        i += len;
        matched = replaced = true;
        break;
      }
    }
    if (!matched) out.push_back(text[i++]);
  }
  return replaced ? collapse_whitespace(out) : out;
}

std::string strip_noise(std::string_view text) {
  std::string out;
  for (const std::string& token : tokenize(text)) {
    // Judge the token by what later stripping would leave, so "!!!https://x"
    // or "(#tag)" are recognized as well.
    std::string kept;
    bool tagged = false;
    for (char c : token) {
      if ((c >= 'a' && c <= 'z') || c == '_') {
        kept.push_back(c);
      } else if ((c == '#' || c == '@') && kept.empty()) {
        tagged = true;
        break;
      }
    }
    if (tagged) continue;
    std::string_view k = kept;
    if (k.starts_with("www") || k.starts_with("http")) continue;
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::string expand_contractions(
    std::string_view text, const std::unordered_map<std::string, std::string>& table) {
  auto is_word_char = [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || c == '\'' || c >= 0x80;
  };
  std::vector<std::string> tokens = tokenize(text);
  for (std::string& token : tokens) {
    std::size_t begin = 0, end = token.size();
    while (begin < end && !is_word_char(token[begin])) ++begin;
    while (end > begin && !is_word_char(token[end - 1])) --end;
    std::string core = token.substr(begin, end - begin);
    // Fold typographic apostrophes (E2 80 98 / E2 80 99) to ASCII.
    for (std::size_t pos; (pos = core.find("\xE2\x80\x99")) != std::string::npos;) {
      core.replace(pos, 3, "'");
    }
    for (std::size_t pos; (pos = core.find("\xE2\x80\x98")) != std::string::npos;) {
      core.replace(pos, 3, "'");
    }
    if (core.find('\'') == std::string::npos) continue;
    auto it = table.find(core);
    if (it == table.end()) continue;
    token = token.substr(0, begin) + it->second + token.substr(end);
  }
  return join_tokens(tokens);
}

std::string normalize_repeats(std::string_view token,
                              const std::unordered_set<std::string>& dictionary) {
  std::string original(token);
  if (dictionary.contains(original)) return original;
  const auto runs = runs_of(token);
  const bool elongated = std::any_of(runs.begin(), runs.end(),
                                     [](const auto& r) { return r.second >= 3; });
  if (!elongated) return original;

  std::string doubled, single;
  for (const auto& [c, n] : runs) {
    const std::size_t keep2 = n >= 3 ? 2 : n;
    const std::size_t keep1 = n >= 3 ? 1 : n;
    doubled.append(keep2, c);
    single.append(keep1, c);
  }
  if (dictionary.contains(doubled)) return doubled;
  // single is the end of the ladder: the maximally collapsed form.
  return single;
}

std::string strip_non_alpha(std::string_view text) {
  std::string kept;
  kept.reserve(text.size());
  for (char c : text) {
    if ((c >= 'a' && c <= 'z') || c == '_') {
      kept.push_back(c);
    } else if (is_space(c)) {
      kept.push_back(' ');
    }
  }
  return collapse_whitespace(kept);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const PrepConfig& config) {
  std::vector<std::string> out;
  for (const std::string& token : tokens) {
    if (config.negation_whitelist.contains(token)) {
      out.push_back(token);
      continue;
    }
    if (config.stopwords.contains(token)) continue;
    if (token.size() < config.min_token_len) continue;
    out.push_back(token);
  }
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const std::string& token : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

}  // namespace tlab::textprep
