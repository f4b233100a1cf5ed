#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cleanwords/consistency.hpp"
#include "cleanwords/eval.hpp"
#include "cleanwords/image.hpp"
#include "cleanwords/lexicon.hpp"
#include "cleanwords/ocr.hpp"
#include "cleanwords/similarity.hpp"

namespace cleanwords {

// SplitMix64 step; derives independent sub-seeds from (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Stroke-drawn lowercase glyph prototypes on a fixed cell, dark ink on white.
struct SynthFont {
  int cell_width = 16;
  int cell_height = 24;
  int char_spacing = 1;
  int word_spacing = 10;
  std::map<char, GrayImage> prototypes;

  // Seeded stroke perturbations give each font its own shapes while keeping
  // the letterforms recognizable. Covers a-z.
  static SynthFont generate(std::uint64_t seed);

  bool has(char c) const { return prototypes.count(c) != 0; }
  // Throws ConfigError for a label with no prototype.
  void require(const std::string& token) const;
};

struct NoiseParams {
  double gaussian_sigma = 0.0;   // intensity units
  double saltpepper_rate = 0.0;  // per pixel
  int jitter = 0;                // max box offset in pixels, applied by the recognizer
  bool project_to_dictionary = false;
  // Recognizer-side planted confusions: a glyph read as one member of a pair
  // is reported as the other with probability `swap_rate`.
  std::vector<std::pair<char, char>> swap_pairs;
  double swap_rate = 0.0;

  void validate() const;
};

struct PageLayout {
  int page_width = 1200;
  int margin = 40;
  int line_gap = 12;
};

struct SynthPage {
  GrayImage image;
  std::vector<std::string> truth;
  std::vector<Box> word_boxes;
  std::vector<std::vector<Box>> char_boxes;  // exact stamped cells per word
};

SynthPage render_document(const std::vector<std::string>& text, const SynthFont& font, const NoiseParams& noise,
                          std::uint64_t seed, const PageLayout& layout = {});

// Adds Gaussian then salt-and-pepper noise in place.
void apply_noise(GrayImage& img, const NoiseParams& noise, std::mt19937_64& rng);

struct Recognizer {
  const SynthFont* font;
  std::vector<char> labels;
  std::vector<NormalizedPatch> prototypes;
  int side = kDefaultPatchSide;

  explicit Recognizer(const SynthFont& font, int side = kDefaultPatchSide);
  // (label, ncc) of the best-matching prototype; ties go to the smaller label.
  std::pair<char, double> classify(const NormalizedPatch& patch) const;
  std::vector<double> scores(const NormalizedPatch& patch) const;
};

// Nearest lexicon token under pseudo_edit, ties by token order.
std::optional<std::string> nearest_lexicon_word(const Lexicon& lex, const std::string& token,
                                                const ConfusionTable& ct);

// Simulated engine: classifies each (optionally jittered) cell by argmax ncc
// against the font prototypes, reports mean ncc x 100 as confidence and, when
// asked, projects non-dictionary output onto the nearest lexicon word.
std::vector<OcrWord> simulate_ocr(const SynthPage& page, const SynthFont& font, const NoiseParams& noise,
                                  const Lexicon& lex, const ConfusionTable& ct, std::uint64_t seed);

struct NoiseRates {
  double epsilon_hat = 0.0;
  double delta_hat = 1.0;
  int trials = 0;
  int pool_per_class = 0;
  std::string worst_pair;   // "c1>c2" behind epsilon_hat, empty when zero
  std::string worst_class;  // class behind delta_hat
  long epsilon_hits = 0;
  long delta_passes = 0;
};

// Monte Carlo estimates of the per-character corruption bound (over
// non-confusable ordered class pairs) and of the consistency-check success
// rate against a reference pool of `pool_per_class` noisy glyphs per class.
NoiseRates estimate_noise_rates(const SynthFont& font, const NoiseParams& noise, int trials, std::uint64_t seed,
                                const ConfusionTable& ct, const ConsistencyParams& params, int pool_per_class = 10,
                                unsigned threads = 1);

// Noisy isolated rendering of one prototype, cropped to a jittered cell.
GrayImage render_isolated(const SynthFont& font, char c, const NoiseParams& noise, std::mt19937_64& rng);

// Zipf-weighted sample over the first `vocabulary` words of `ranked`.
std::vector<std::string> sample_text(const std::vector<std::string>& ranked, int word_count, std::size_t vocabulary,
                                     double exponent, std::uint64_t seed);

// Replaces `count` tokens (length >= 4) with single-letter variants outside
// the lexicon, using substitutions that are not confusable. Returns the
// replaced positions in increasing order.
std::vector<std::size_t> plant_nondictionary(std::vector<std::string>& tokens, const Lexicon& lex,
                                             const ConfusionTable& ct, int count, std::uint64_t seed);

// Empirical ratio behind p1: engine words that are dictionary words but whose
// truth is a non-dictionary token at pseudo-edit distance 1, over words read
// correctly as dictionary words.
double estimate_p1(const std::vector<OcrWord>& words, const std::vector<AlignedLabel>& labels, const Lexicon& lex,
                   const ConfusionTable& ct);

}  // namespace cleanwords
