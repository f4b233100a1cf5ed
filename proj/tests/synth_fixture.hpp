#pragma once

// Shared synthetic-document setup for tests that run the whole chain.

#include <fstream>
#include <string>
#include <vector>

#include "test_support.hpp"

#include "cleanwords/eval.hpp"
#include "cleanwords/lexicon.hpp"
#include "cleanwords/ocr.hpp"
#include "cleanwords/pipeline.hpp"
#include "cleanwords/similarity.hpp"
#include "cleanwords/synth.hpp"

namespace fixture {

struct Corpus {
  std::vector<std::string> ranked;
  cleanwords::Lexicon lex;
};

inline const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    std::ifstream in(source_path("data/en_50k.txt"));
    for (std::string w; in >> w;) out.ranked.push_back(w);
    out.lex = cleanwords::Lexicon::from_words(out.ranked);
    return out;
  }();
  return c;
}

// Moderate noise with recognizer-side swaps inside confusable pairs.
inline cleanwords::NoiseParams moderate_noise() {
  cleanwords::NoiseParams n;
  n.gaussian_sigma = 80;
  n.saltpepper_rate = 0.02;
  n.swap_pairs = {{'o', 'c'}, {'e', 'c'}, {'h', 'n'}, {'u', 'n'}};
  n.swap_rate = 0.1;
  return n;
}

struct Document {
  std::vector<std::string> truth;
  std::vector<std::size_t> planted;
  cleanwords::SynthPage page;
  std::vector<cleanwords::OcrWord> words;
  std::vector<cleanwords::AlignedLabel> labels;
  cleanwords::GlyphSet glyphs;
  cleanwords::GlyphPool pool;
  std::unique_ptr<cleanwords::DocumentEvidence> evidence;
  cleanwords::CleanList conservative;
  cleanwords::CleanList aggressive;
};

inline std::unique_ptr<Document> make_document(std::uint64_t seed, const cleanwords::NoiseParams& noise,
                                               int word_count = 500, int plant = 0, unsigned threads = 1) {
  using namespace cleanwords;
  const auto& c = corpus();
  const auto ct = ConfusionTable::defaults();
  static const SynthFont font = SynthFont::generate(1);
  auto d = std::make_unique<Document>();
  d->truth = sample_text(c.ranked, word_count, 2000, 1.0, seed);
  d->planted = plant_nondictionary(d->truth, c.lex, ct, plant, seed);
  d->page = render_document(d->truth, font, noise, seed);
  d->words = simulate_ocr(d->page, font, noise, c.lex, ct, seed);
  d->labels = align_to_truth(d->words, d->truth);
  d->glyphs = extract_glyphs(d->page.image, d->words);
  d->pool = GlyphPool(d->glyphs.glyphs, kDefaultPatchSide, threads);
  d->evidence = std::make_unique<DocumentEvidence>(d->words, d->glyphs, d->pool, ConsistencyParams{});
  PipelineConfig cfg;
  cfg.threads = threads;
  d->conservative = build_clean_list(d->words, *d->evidence, c.lex, cfg);
  cfg.mode = ListMode::Aggressive;
  d->aggressive = build_clean_list(d->words, *d->evidence, c.lex, cfg);
  return d;
}

inline const cleanwords::SynthFont& font() {
  static const cleanwords::SynthFont f = cleanwords::SynthFont::generate(1);
  return f;
}

}  // namespace fixture
