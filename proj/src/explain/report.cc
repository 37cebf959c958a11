#include "tlab/explain/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "tlab/common/csv.h"
#include "tlab/common/io.h"

namespace tlab::explain {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  if (std::string(buf) == "-0.0000") return "0.0000";
  return buf;
}

struct Rgb {
  int r, g, b;
};

// white toward red (positive) or blue (negative)
Rgb shade(double phi, double scale) {
  const double s = scale > 0.0 ? std::min(1.0, std::fabs(phi) / scale) : 0.0;
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - 0.85 * s)));
  return phi > 0.0 ? Rgb{255, fade, fade} : Rgb{fade, fade, 255};
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

const char* kPage =
    "body{font-family:sans-serif;margin:2em;color:#222}"
    ".tok{padding:2px 4px;margin:1px;border-radius:3px;display:inline-block}";

}  // namespace

std::string html_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string render_text_report(const Attribution& a, ReportFormat format) {
  const double scale = max_abs(a.phi);
  std::string out;
  if (format == ReportFormat::kAnsi) {
    out += "doc " + a.doc_id + "  method " + std::string(method_name(a.method)) + "  class " +
           std::to_string(a.target_class) + "  base " + fixed(a.base_value) + "  f(x) " + fixed(a.prediction) + "\n";
    for (std::size_t i = 0; i < a.tokens.size(); ++i) {
      if (i > 0) out.push_back(' ');
      if (a.phi[i] == 0.0) {
        out += a.tokens[i];
        continue;
      }
      const Rgb c = shade(a.phi[i], scale);
      out += "\x1b[30;48;2;" + std::to_string(c.r) + ";" + std::to_string(c.g) + ";" + std::to_string(c.b) + "m" +
             a.tokens[i] + "\x1b[0m";
    }
    out += "\n";
    return out;
  }
  out += "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Attribution ";
  out += html_escape(a.doc_id) + "</title><style>" + kPage + "</style></head><body>\n";
  out += "<h1>Document " + html_escape(a.doc_id) + "</h1>\n";
  out += "<p>method " + std::string(method_name(a.method)) + ", mask policy " + html_escape(a.mask_policy) +
         ", class " + std::to_string(a.target_class) + "</p>\n";
  out += "<p>base value <b>" + fixed(a.base_value) + "</b> &rarr; prediction <b>" + fixed(a.prediction) +
         "</b></p>\n<p>";
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    const std::string text = html_escape(a.tokens[i]);
    const std::string tip = " title=\"" + fixed(a.phi[i], 6) + "\"";
    if (a.phi[i] == 0.0) {
      out += "<span class=\"tok\"" + tip + ">" + text + "</span>";
    } else {
      const Rgb c = shade(a.phi[i], scale);
      out += "<span class=\"tok\" style=\"background:rgb(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," +
             std::to_string(c.b) + ")\"" + tip + ">" + text + "</span>";
    }
    out += "\n";
  }
  out += "</p>\n<p><span style=\"color:#c00\">red raises</span>, <span style=\"color:#00c\">blue lowers</span> "
         "the class probability.</p>\n</body></html>\n";
  return out;
}

std::vector<TokenImportance> global_bar_summary(std::span<const Attribution> attributions, std::size_t top_k) {
  std::map<std::string, TokenImportance> acc;
  for (const auto& a : attributions)
    for (std::size_t i = 0; i < a.tokens.size(); ++i) {
      auto& t = acc[a.tokens[i]];
      t.token = a.tokens[i];
      t.aggregate_phi += a.phi[i];
      ++t.count;
    }
  std::vector<TokenImportance> out;
  for (auto& [k, v] : acc) out.push_back(v);
  std::stable_sort(out.begin(), out.end(), [](const TokenImportance& x, const TokenImportance& y) {
    return std::fabs(x.aggregate_phi) > std::fabs(y.aggregate_phi);
  });
  if (top_k > 0 && out.size() > top_k) out.resize(top_k);
  return out;
}

std::string summary_csv(std::span<const TokenImportance> rows) {
  std::string out = csv::format_row({"token", "aggregate_phi", "count"});
  for (const auto& r : rows) out += csv::format_row({r.token, io::format_double(r.aggregate_phi), std::to_string(r.count)});
  return out;
}

std::string render_bar_report(std::span<const TokenImportance> rows, const std::string& title) {
  double scale = 0.0;
  for (const auto& r : rows) scale = std::max(scale, std::fabs(r.aggregate_phi));
  std::string out = "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" + html_escape(title) +
                    "</title><style>" + kPage + "</style></head><body>\n<h1>" + html_escape(title) +
                    "</h1>\n<table>\n";
  for (const auto& r : rows) {
    const double pct = scale > 0.0 ? 100.0 * std::fabs(r.aggregate_phi) / scale : 0.0;
    const char* color = r.aggregate_phi >= 0.0 ? "#d62728" : "#1f77b4";
    out += "<tr><td>" + html_escape(r.token) + "</td><td style=\"width:400px\"><div style=\"background:" + color +
           ";height:12px;width:" + fixed(pct, 1) + "%\"></div></td><td>" + fixed(r.aggregate_phi) + "</td><td>" +
           std::to_string(r.count) + "</td></tr>\n";
  }
  out += "</table>\n</body></html>\n";
  return out;
}

}  // namespace tlab::explain
