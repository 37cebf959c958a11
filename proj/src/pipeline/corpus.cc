#include "tlab/pipeline/corpus.h"

#include <algorithm>
#include <unordered_set>

#include "tlab/common/csv.h"
#include "tlab/common/error.h"
#include "tlab/common/io.h"

namespace tlab::pipeline {

std::vector<textprep::RawDocument> parse_corpus(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw Error(ErrorCode::kMalformedCsv, "corpus has no header");
  const auto& header = rows[0];
  auto column = [&](std::string_view name) -> long {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<long>(it - header.begin());
  };
  const long id_col = column("id"), text_col = column("text"), label_col = column("label");
  if (id_col < 0 || text_col < 0) throw Error(ErrorCode::kMalformedCsv, "corpus header needs id and text columns");

  std::vector<textprep::RawDocument> docs;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != header.size())
      throw Error(ErrorCode::kMalformedCsv, "corpus row " + std::to_string(r + 1) + " has " +
                                                std::to_string(row.size()) + " fields, header has " +
                                                std::to_string(header.size()));
    textprep::RawDocument d;
    d.id = row[id_col];
    d.text = row[text_col];
    if (d.id.empty()) throw Error(ErrorCode::kMalformedCsv, "corpus row " + std::to_string(r + 1) + " has no id");
    if (!seen.insert(d.id).second) throw Error(ErrorCode::kDuplicateId, "duplicate document id '" + d.id + "'");
    if (label_col >= 0) {
      const auto v = io::trim(row[label_col]);
      if (v == "1" || v == "+1") d.label = 1;
      else if (v == "0") d.label = 0;
      else if (v == "-1") d.label = -1;
      else if (!v.empty())
        throw Error(ErrorCode::kMalformedCsv, "document '" + d.id + "' has label '" + std::string(v) + "'");
    }
    for (std::size_t c = 0; c < header.size(); ++c)
      if (static_cast<long>(c) != id_col && static_cast<long>(c) != text_col && static_cast<long>(c) != label_col)
        d.meta[header[c]] = row[c];
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<textprep::RawDocument> load_corpus(const std::filesystem::path& path) {
  return parse_corpus(io::read_file(path));
}

}  // namespace tlab::pipeline
