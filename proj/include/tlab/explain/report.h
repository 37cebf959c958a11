#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tlab/explain/attribution.h"

namespace tlab::explain {

enum class ReportFormat { kAnsi, kHtml };

// Red for positive contributions, blue for negative, saturation scaled by
// |phi| over the largest |phi|. Zero tokens stay unstyled.
std::string render_text_report(const Attribution& a, ReportFormat format);

struct TokenImportance {
  std::string token;
  double aggregate_phi = 0.0;
  std::size_t count = 0;
};

// Sum of phi per token across attributions, ordered by descending |sum|
// (ties by token); top_k = 0 keeps everything.
std::vector<TokenImportance> global_bar_summary(std::span<const Attribution> attributions, std::size_t top_k = 0);
std::string summary_csv(std::span<const TokenImportance> rows);
// Horizontal bar chart, self-contained HTML.
std::string render_bar_report(std::span<const TokenImportance> rows, const std::string& title);

std::string html_escape(std::string_view text);

}  // namespace tlab::explain
