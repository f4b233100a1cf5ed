#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cleanwords/similarity.hpp"

namespace cleanwords {

struct ConsistencyParams {
  int max_neighbors = 20;  // M
  double theta = 0.66;

  void validate() const;
};

enum class Domination { DominatedSame, DominatedOther, Undominated };

const char* to_string(Domination d);

struct DominationOutcome {
  Domination kind = Domination::Undominated;
  std::optional<std::string> dominating_label;
  int stop_index = 0;

  friend bool operator==(const DominationOutcome&, const DominationOutcome&) = default;
};

// Scans the ranked neighbors in order, counting labels. After the i-th
// neighbor, a label with count c where c / (i + 1) > theta dominates the
// glyph and the scan stops. Ties between labels crossing at the same step go
// to the higher count, then to the smaller label.
DominationOutcome dominate_check(const std::string& glyph_label, const std::vector<Neighbor>& ranked,
                                 const ConsistencyParams& params);

// Convenience overload over bare label sequences.
DominationOutcome dominate_check(const std::string& glyph_label, const std::vector<std::string>& neighbor_labels,
                                 const ConsistencyParams& params);

// A word is reliable only when no glyph was skipped, the segmentation is
// consistent, and every glyph outcome is DominatedSame.
bool word_reliability(bool segmentation_inconsistent, bool glyph_skipped,
                      const std::vector<DominationOutcome>& outcomes);

}  // namespace cleanwords
