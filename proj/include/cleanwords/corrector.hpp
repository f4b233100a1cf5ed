#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "cleanwords/ocr.hpp"
#include "cleanwords/pipeline.hpp"
#include "cleanwords/similarity.hpp"

namespace cleanwords {

// Linear two-class model over normalized patch values; score > 0 means
// `positive`.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::string positive;
  std::string negative;
  double training_accuracy = 0.0;
  bool degenerate = false;  // training accuracy no better than chance

  double score(const NormalizedPatch& patch) const;
};

struct TrainParams {
  int epochs = 30;
  double lambda = 1e-2;
  std::uint64_t seed = 1;
};

// Hinge loss with L2 regularization, stochastic subgradient steps of size
// 1/(lambda*t) over a seeded shuffle each epoch. The bias is not regularized.
LinearModel train_pair_classifier(const std::vector<NormalizedPatch>& positives,
                                  const std::vector<NormalizedPatch>& negatives, const std::string& positive_label,
                                  const std::string& negative_label, const TrainParams& params);

struct LabeledGlyph {
  int glyph_id = 0;
  int word_id = 0;
  std::string label;
  NormalizedPatch patch;
};

struct Correction {
  int glyph_id = 0;
  std::string old_label;
  std::string new_label;
  double score = 0.0;
};

// Relabels glyphs carrying either pair label by the sign of the model score.
// Glyphs of words in `protected_words` are never touched. A score of exactly
// zero keeps the old label. Only changes are returned, sorted by glyph id.
std::vector<Correction> apply_corrections(const LinearModel& model, const std::vector<LabeledGlyph>& glyphs,
                                          const std::set<int>& protected_words, unsigned threads = 1);

struct PairCorrection {
  LinearModel model;
  std::vector<Correction> changes;
  long positives = 0;
  long negatives = 0;
  long candidates = 0;  // pair-labelled glyphs outside the clean list
};

// Trains on the pair glyphs of clean-list words and relabels the pair glyphs
// of every other word.
PairCorrection correct_pair(const std::vector<OcrWord>& words, const GlyphSet& glyphs, const CleanList& clean,
                            const std::string& positive_label, const std::string& negative_label,
                            const TrainParams& params, int side = kDefaultPatchSide, unsigned threads = 1);

// Change records: glyph_id old new score
std::string format_corrections_tsv(const std::vector<Correction>& changes);

}  // namespace cleanwords
