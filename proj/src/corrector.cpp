#include "cleanwords/corrector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "cleanwords/error.hpp"
#include "cleanwords/parallel.hpp"

namespace cleanwords {

double LinearModel::score(const NormalizedPatch& patch) const {
  if (patch.values.size() != weights.size()) throw UsageError("patch size does not match the model");
  return std::inner_product(weights.begin(), weights.end(), patch.values.begin(), bias);
}

LinearModel train_pair_classifier(const std::vector<NormalizedPatch>& positives,
                                  const std::vector<NormalizedPatch>& negatives, const std::string& positive_label,
                                  const std::string& negative_label, const TrainParams& params) {
  if (positives.empty() || negatives.empty()) throw UsageError("both classes need at least one training glyph");
  if (positive_label == negative_label) throw UsageError("pair labels must differ");
  if (params.epochs < 1 || !(params.lambda > 0.0)) throw UsageError("need epochs >= 1 and lambda > 0");
  const std::size_t dim = positives.front().values.size();
  struct Sample {
    const NormalizedPatch* x;
    double y;
  };
  std::vector<Sample> samples;
  for (const auto& p : positives) samples.push_back({&p, 1.0});
  for (const auto& n : negatives) samples.push_back({&n, -1.0});
  for (const auto& s : samples) {
    if (s.x->values.size() != dim) throw UsageError("training patches differ in size");
  }

  LinearModel m;
  m.positive = positive_label;
  m.negative = negative_label;
  m.weights.assign(dim, 0.0);
  std::mt19937_64 rng(params.seed);
  long t = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(samples.begin(), samples.end(), rng);
    for (const auto& s : samples) {
      ++t;
      const double eta = 1.0 / (params.lambda * static_cast<double>(t + 1));
      const double margin = s.y * m.score(*s.x);
      const double shrink = 1.0 - eta * params.lambda;
      for (auto& w : m.weights) w *= shrink;
      if (margin < 1.0) {
        for (std::size_t k = 0; k < dim; ++k) m.weights[k] += eta * s.y * s.x->values[k];
        m.bias += eta * s.y;
      }
    }
  }
  for (double w : m.weights) {
    if (!std::isfinite(w)) throw Error("classifier training diverged");
  }
  long right = 0;
  for (const auto& s : samples) {
    if (s.y * m.score(*s.x) > 0) ++right;
  }
  m.training_accuracy = static_cast<double>(right) / static_cast<double>(samples.size());
  m.degenerate = m.training_accuracy < 0.6;
  return m;
}

std::vector<Correction> apply_corrections(const LinearModel& model, const std::vector<LabeledGlyph>& glyphs,
                                          const std::set<int>& protected_words, unsigned threads) {
  std::vector<std::optional<Correction>> slots(glyphs.size());
  parallel_for(glyphs.size(), threads, [&](std::size_t i) {
    const auto& g = glyphs[i];
    if (protected_words.count(g.word_id)) return;
    if (g.label != model.positive && g.label != model.negative) return;
    const double s = model.score(g.patch);
    if (s == 0.0) return;
    const std::string& label = s > 0 ? model.positive : model.negative;
    if (label != g.label) slots[i] = Correction{g.glyph_id, g.label, label, s};
  });
  std::vector<Correction> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  std::sort(out.begin(), out.end(), [](const Correction& a, const Correction& b) { return a.glyph_id < b.glyph_id; });
  return out;
}

PairCorrection correct_pair(const std::vector<OcrWord>& words, const GlyphSet& glyphs, const CleanList& clean,
                            const std::string& positive_label, const std::string& negative_label,
                            const TrainParams& params, int side, unsigned threads) {
  std::set<int> known;
  for (const auto& w : words) known.insert(w.word_id);
  std::set<int> protected_words;
  for (const auto& e : clean.entries) {
    if (!known.count(e.word_id)) throw UsageError("clean list refers to unknown word " + std::to_string(e.word_id));
    protected_words.insert(e.word_id);
  }
  std::vector<const GlyphRef*> pair_glyphs;
  for (const auto& g : glyphs.glyphs) {
    if (g.label == positive_label || g.label == negative_label) pair_glyphs.push_back(&g);
  }
  std::vector<LabeledGlyph> labeled(pair_glyphs.size());
  parallel_for(pair_glyphs.size(), threads, [&](std::size_t i) {
    const auto& g = *pair_glyphs[i];
    labeled[i] = LabeledGlyph{g.glyph_id, g.word_id, g.label, normalize_patch(g.patch, side)};
  });

  PairCorrection out;
  std::vector<NormalizedPatch> pos, neg;
  for (const auto& g : labeled) {
    if (protected_words.count(g.word_id)) {
      (g.label == positive_label ? pos : neg).push_back(g.patch);
    } else {
      ++out.candidates;
    }
  }
  out.positives = static_cast<long>(pos.size());
  out.negatives = static_cast<long>(neg.size());
  out.model = train_pair_classifier(pos, neg, positive_label, negative_label, params);
  out.changes = apply_corrections(out.model, labeled, protected_words, threads);
  return out;
}

std::string format_corrections_tsv(const std::vector<Correction>& changes) {
  std::string out = "glyph_id\told\tnew\tscore\n";
  for (const auto& c : changes) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, c.score);
    out += std::to_string(c.glyph_id) + "\t" + c.old_label + "\t" + c.new_label + "\t" + std::string(buf, p) + "\n";
  }
  return out;
}

}  // namespace cleanwords
