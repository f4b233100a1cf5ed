#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cleanwords/ocr.hpp"
#include "cleanwords/pipeline.hpp"

namespace cleanwords {

struct AlignedLabel {
  int word_id = 0;
  std::optional<std::string> truth_token;
  bool correct = false;
};

// Normalized engine token used for scoring (lowercase fallback when the text
// does not normalize).
std::string scoring_token(const std::string& text);

// Global word-level alignment. Pair cost is the Levenshtein distance divided by
// the longer token length, a gap costs 1. On ties the traceback prefers a
// match, then skipping an engine word, then skipping a truth token.
std::vector<std::pair<int, int>> align_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b);

std::vector<AlignedLabel> align_to_truth(const std::vector<OcrWord>& words, const std::vector<std::string>& truth);

struct ListMetrics {
  double precision = 1.0;  // 1.0 for an empty list, see `empty`
  double recall = 0.0;     // list size over total words
  long errors = 0;
  long count = 0;
  bool empty = true;
};

ListMetrics clean_list_metrics(const CleanList& clean, const std::vector<AlignedLabel>& labels);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;  // correct kept words over total words
  long kept = 0;
};

// One point per distinct confidence, thresholds descending.
std::vector<PrPoint> confidence_pr_curve(const std::vector<OcrWord>& words, const std::vector<AlignedLabel>& labels);

std::string format_pr_csv(const std::vector<PrPoint>& curve);
// Minimal standalone SVG line plot of the curve with optional operating points.
std::string format_pr_svg(const std::vector<PrPoint>& curve, const std::vector<std::pair<double, double>>& marks);

struct ListSummary {
  long count = 0;
  double pct = 0.0;  // count / word_count
  long errors = 0;
};

struct DocumentReport {
  std::string name;
  long word_count = 0;
  long correct_words = 0;
  double accuracy = 0.0;
  ListSummary conservative;
  ListSummary aggressive;
};

DocumentReport document_report(const std::string& name, const std::vector<OcrWord>& words,
                               const std::vector<AlignedLabel>& labels, const CleanList& conservative,
                               const CleanList& aggressive);

// Sums counts across documents and recomputes the ratios.
DocumentReport report_totals(const std::vector<DocumentReport>& reports, const std::string& name = "Totals");

std::string report_json(const DocumentReport& r);
std::string reports_json(const std::vector<DocumentReport>& reports);
// Fixed-width table with the columns of the per-document results table.
std::string format_report_table(const std::vector<DocumentReport>& reports);

}  // namespace cleanwords
