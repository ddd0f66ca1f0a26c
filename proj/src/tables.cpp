#include "qwalk/tables.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "qwalk/errors.hpp"
#include "qwalk/graph.hpp"
#include "text_util.hpp"

namespace qwalk {

PValueTable parse_pvalue_table(std::string_view text) {
  PValueTable rows;
  std::unordered_map<std::string, std::size_t> index;
  bool first = true;
  detail::for_each_data_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_tabs(line);
    const bool header_candidate = first;
    first = false;
    if (fields.size() != 2)
      throw ValidationError("p-value table line " + std::to_string(line_no) + ": expected 'label<TAB>p'");
    std::string label = detail::trim(fields[0]);
    auto p = detail::parse_double(detail::trim(fields[1]));
    if (!p) {
      if (header_candidate) return;
      throw ValidationError("p-value table line " + std::to_string(line_no) + ": p-value is not a number");
    }
    if (label.empty()) throw ValidationError("p-value table line " + std::to_string(line_no) + ": empty label");
    if (!std::isfinite(*p) || *p < 0.0 || *p > 1.0)
      throw ValidationError("p-value table line " + std::to_string(line_no) + ": p-value must lie in [0, 1]");
    auto [it, inserted] = index.emplace(label, rows.size());
    if (inserted) {
      rows.emplace_back(std::move(label), *p);
    } else if (*p < rows[it->second].second) {
      rows[it->second].second = *p;
    }
  });
  return rows;
}

PValueTable read_pvalue_table(const std::filesystem::path& path) { return parse_pvalue_table(read_text_file(path)); }

SeedTargetSets build_seed_target_sets(const PValueTable& scores, double seed_threshold, const PValueTable& target_table,
                                      double target_threshold) {
  if (scores.empty()) throw ValidationError("seed score table is empty");
  if (target_table.empty()) throw ValidationError("target table is empty");
  if (!(seed_threshold > 0.0 && seed_threshold <= 1.0) || !(target_threshold > 0.0 && target_threshold <= 1.0))
    throw ValidationError("p-value thresholds must lie in (0, 1]");

  SeedTargetSets out;
  out.seed_threshold = seed_threshold;
  out.target_threshold = target_threshold;
  std::unordered_set<std::string> seed_labels;
  for (const auto& [label, p] : scores) {
    if (p < seed_threshold) {
      out.seeds.emplace_back(label, p);
      seed_labels.insert(label);
    }
  }
  if (out.seeds.empty())
    throw ValidationError("no seed genes pass p < " + std::to_string(seed_threshold));
  for (const auto& [label, p] : target_table) {
    if (!(p < target_threshold)) continue;
    if (seed_labels.count(label)) {
      ++out.overlap_removed;
      continue;
    }
    out.targets.emplace_back(label, p);
  }
  return out;
}

}  // namespace qwalk
