#pragma once

// Gene-level p-value tables and seed/target selection.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qwalk {

/// label -> p-value rows, first occurrence order, duplicates resolved to the
/// smallest p-value.
using PValueTable = std::vector<std::pair<std::string, double>>;

/// "label<TAB>p" rows ('#' comments skipped). A first row whose p field is
/// not numeric is treated as a header. Throws ValidationError for p outside
/// [0, 1] or malformed rows.
PValueTable parse_pvalue_table(std::string_view text);
PValueTable read_pvalue_table(const std::filesystem::path& path);

struct SeedTargetSets {
  PValueTable seeds;    // p < seed_threshold
  PValueTable targets;  // p < target_threshold, minus any seed
  double seed_threshold = 0.01;
  double target_threshold = 5e-8;
  std::size_t overlap_removed = 0;
};

/// Strict thresholds. Genes that pass both filters are removed from the
/// targets. Throws ValidationError for empty tables or an empty seed set.
SeedTargetSets build_seed_target_sets(const PValueTable& scores, double seed_threshold, const PValueTable& target_table,
                                      double target_threshold);

}  // namespace qwalk
