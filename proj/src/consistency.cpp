#include "cleanwords/consistency.hpp"

#include <algorithm>
#include <map>

#include "cleanwords/error.hpp"

namespace cleanwords {

void ConsistencyParams::validate() const {
  if (max_neighbors < 1) throw UsageError("M must be at least 1");
  if (!(theta > 0.0 && theta < 1.0)) throw UsageError("theta must lie in (0, 1)");
}

const char* to_string(Domination d) {
  switch (d) {
    case Domination::DominatedSame: return "dominated_same";
    case Domination::DominatedOther: return "dominated_other";
    case Domination::Undominated: return "undominated";
  }
  return "?";
}

DominationOutcome dominate_check(const std::string& glyph_label, const std::vector<std::string>& neighbor_labels,
                                 const ConsistencyParams& params) {
  params.validate();
  const int steps = std::min<int>(params.max_neighbors, static_cast<int>(neighbor_labels.size()));
  std::map<std::string, int> counts;
  for (int i = 1; i <= steps; ++i) {
    ++counts[neighbor_labels[static_cast<std::size_t>(i - 1)]];
    const std::string* winner = nullptr;
    int winner_count = 0;
    // map order makes the label tie-break deterministic
    for (const auto& [label, c] : counts) {
      if (static_cast<double>(c) / (i + 1) > params.theta && c > winner_count) {
        winner = &label;
        winner_count = c;
      }
    }
    if (winner) {
      DominationOutcome out;
      out.kind = *winner == glyph_label ? Domination::DominatedSame : Domination::DominatedOther;
      out.dominating_label = *winner;
      out.stop_index = i;
      return out;
    }
  }
  return DominationOutcome{Domination::Undominated, std::nullopt, steps};
}

DominationOutcome dominate_check(const std::string& glyph_label, const std::vector<Neighbor>& ranked,
                                 const ConsistencyParams& params) {
  std::vector<std::string> labels;
  labels.reserve(ranked.size());
  for (const auto& n : ranked) labels.push_back(n.label);
  return dominate_check(glyph_label, labels, params);
}

bool word_reliability(bool segmentation_inconsistent, bool glyph_skipped,
                      const std::vector<DominationOutcome>& outcomes) {
  if (segmentation_inconsistent || glyph_skipped || outcomes.empty()) return false;
  return std::all_of(outcomes.begin(), outcomes.end(),
                     [](const DominationOutcome& o) { return o.kind == Domination::DominatedSame; });
}

}  // namespace cleanwords
