#include <cmath>
#include <set>

#include "doctest.h"
#include "synth_fixture.hpp"

#include "cleanwords/error.hpp"

using namespace cleanwords;

namespace {

double word_accuracy(double sigma, std::uint64_t seed) {
  NoiseParams noise;
  noise.gaussian_sigma = sigma;
  const auto& c = fixture::corpus();
  const auto truth = sample_text(c.ranked, 100, 2000, 1.0, seed);
  const auto page = render_document(truth, fixture::font(), noise, seed);
  const auto words = simulate_ocr(page, fixture::font(), noise, c.lex, ConfusionTable::defaults(), seed);
  long good = 0;
  for (std::size_t i = 0; i < words.size(); ++i) good += words[i].text == truth[i];
  return static_cast<double>(good) / static_cast<double>(words.size());
}

}  // namespace

TEST_CASE("font covers a-z with distinct prototypes") {
  const auto& f = fixture::font();
  std::set<std::vector<std::uint8_t>> seen;
  for (char ch = 'a'; ch <= 'z'; ++ch) {
    REQUIRE(f.has(ch));
    const auto& p = f.prototypes.at(ch);
    CHECK(p.width() == f.cell_width);
    CHECK(p.height() == f.cell_height);
    seen.insert(p.pixels());
  }
  CHECK(seen.size() == 26);
  CHECK_THROWS_AS(f.require("Hello"), ConfigError);
  CHECK(SynthFont::generate(1).prototypes == f.prototypes);
  CHECK(SynthFont::generate(2).prototypes != f.prototypes);
}

TEST_CASE("zero noise reproduces the stamped prototypes") {
  const std::vector<std::string> text = {"the", "quick", "brown", "fox"};
  const auto page = render_document(text, fixture::font(), NoiseParams{}, 5);
  REQUIRE(page.char_boxes.size() == text.size());
  for (std::size_t w = 0; w < text.size(); ++w)
    for (std::size_t k = 0; k < text[w].size(); ++k)
      CHECK(page.image.crop(page.char_boxes[w][k]) == fixture::font().prototypes.at(text[w][k]));

  const auto& c = fixture::corpus();
  const auto words = simulate_ocr(page, fixture::font(), NoiseParams{}, c.lex, ConfusionTable::defaults(), 5);
  const auto glyphs = extract_glyphs(page.image, words);
  CHECK(glyphs.flagged_words.empty());
  for (const auto& g : glyphs.glyphs) CHECK(g.patch == fixture::font().prototypes.at(g.label[0]));
  for (std::size_t w = 0; w < text.size(); ++w) {
    CHECK(words[w].text == text[w]);
    CHECK(words[w].bbox == page.word_boxes[w]);
    CHECK_FALSE(words[w].segmentation_inconsistent);
    CHECK(words[w].confidence == doctest::Approx(100.0));
  }
}

TEST_CASE("rendering errors") {
  CHECK_THROWS_AS(render_document({}, fixture::font(), NoiseParams{}, 1), UsageError);
  CHECK_THROWS_AS(render_document({"Caps"}, fixture::font(), NoiseParams{}, 1), ConfigError);
  NoiseParams bad;
  bad.saltpepper_rate = 1.5;
  CHECK_THROWS_AS(render_document({"ok"}, fixture::font(), bad, 1), UsageError);
  bad = {};
  bad.gaussian_sigma = -1;
  CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("same seed gives identical output") {
  const auto& c = fixture::corpus();
  const auto noise = fixture::moderate_noise();
  const auto truth = sample_text(c.ranked, 60, 2000, 1.0, 9);
  CHECK(truth == sample_text(c.ranked, 60, 2000, 1.0, 9));
  CHECK(truth != sample_text(c.ranked, 60, 2000, 1.0, 10));
  const auto a = render_document(truth, fixture::font(), noise, 9);
  const auto b = render_document(truth, fixture::font(), noise, 9);
  CHECK(a.image == b.image);
  CHECK(a.image != render_document(truth, fixture::font(), noise, 10).image);
  const auto ct = ConfusionTable::defaults();
  CHECK(format_ocr_tsv(simulate_ocr(a, fixture::font(), noise, c.lex, ct, 9)) ==
        format_ocr_tsv(simulate_ocr(b, fixture::font(), noise, c.lex, ct, 9)));
}

TEST_CASE("Gaussian noise has the requested spread") {
  GrayImage img(100, 100, 128);
  NoiseParams noise;
  noise.gaussian_sigma = 25;
  std::mt19937_64 rng(4);
  apply_noise(img, noise, rng);
  double sum = 0, sq = 0;
  for (auto p : img.pixels()) {
    sum += p;
    sq += static_cast<double>(p) * p;
  }
  const double n = static_cast<double>(img.pixels().size());
  const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  CHECK(sd > 22.5);
  CHECK(sd < 27.5);
}

TEST_CASE("recognizer and nearest dictionary word") {
  const Recognizer rec(fixture::font());
  for (char ch = 'a'; ch <= 'z'; ++ch) {
    const auto [label, score] = rec.classify(normalize_patch(fixture::font().prototypes.at(ch)));
    CHECK(label == ch);
    CHECK(score == doctest::Approx(1.0));
  }
  // a blank patch scores zero everywhere; the smaller label wins
  CHECK(rec.classify(normalize_patch(GrayImage(16, 24, 255))).first == 'a');

  const auto ct = ConfusionTable::defaults();
  const auto lex = Lexicon::from_words(std::vector<std::string>{"bat", "cat", "cot"});
  CHECK(nearest_lexicon_word(lex, "dat", ct) == "bat");
  CHECK(nearest_lexicon_word(lex, "cot", ct) == "cot");
  CHECK(nearest_lexicon_word(lex, "coat", ct) == "cat");
  CHECK_FALSE(nearest_lexicon_word(Lexicon{}, "x", ct).has_value());
}

TEST_CASE("zero noise gives full word accuracy") { CHECK(word_accuracy(0.0, 3) == 1.0); }

TEST_CASE("accuracy does not improve with more noise") {
  double low = 0, high = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    low += word_accuracy(10, seed);
    high += word_accuracy(160, seed);
  }
  CHECK(high <= low);
}

TEST_CASE("projection yields dictionary words that the pipeline rejects") {
  NoiseParams noise;
  noise.project_to_dictionary = true;
  const auto d = fixture::make_document(41, noise, 300, 6);
  REQUIRE(d->planted.size() == 6);
  const auto& lex = fixture::corpus().lex;
  for (std::size_t i : d->planted) {
    const auto& w = d->words[i];
    CAPTURE(d->truth[i]);
    CHECK_FALSE(lex.contains(d->truth[i]));
    CHECK(lex.contains(w.text));
    CHECK(w.text != d->truth[i]);
    CHECK_FALSE(d->conservative.contains(w.word_id));
    CHECK_FALSE(d->aggressive.contains(w.word_id));
  }
}

TEST_CASE("planting and sampling") {
  const auto& c = fixture::corpus();
  const auto ct = ConfusionTable::defaults();
  auto tokens = sample_text(c.ranked, 200, 2000, 1.0, 2);
  const auto original = tokens;
  const auto planted = plant_nondictionary(tokens, c.lex, ct, 10, 2);
  CHECK(planted.size() == 10);
  CHECK(std::is_sorted(planted.begin(), planted.end()));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const bool is_planted = std::binary_search(planted.begin(), planted.end(), i);
    if (!is_planted) {
      CHECK(tokens[i] == original[i]);
      continue;
    }
    CHECK(tokens[i].size() >= 4);
    CHECK_FALSE(c.lex.contains(tokens[i]));
    CHECK(pseudo_hamming(tokens[i], original[i], ct) == 1);
  }
  CHECK_THROWS_AS(sample_text(c.ranked, 0, 10, 1.0, 1), UsageError);
}

TEST_CASE("p1 estimate") {
  const auto ct = ConfusionTable::defaults();
  const auto lex = Lexicon::from_words(std::vector<std::string>{"cat", "the", "dog"});
  std::vector<OcrWord> words(3);
  const std::vector<std::string> texts = {"the", "cat", "dog"};
  for (int i = 0; i < 3; ++i) {
    words[i].word_id = i;
    words[i].text = texts[i];
  }
  const auto labels = align_to_truth(words, {"the", "cbt", "dog"});
  CHECK(estimate_p1(words, labels, lex, ct) == doctest::Approx(0.5));
  CHECK(estimate_p1({}, {}, lex, ct) == 0.0);
}

TEST_CASE("noise-rate estimation") {
  const auto ct = ConfusionTable::defaults();
  const auto clean = estimate_noise_rates(fixture::font(), NoiseParams{}, 100, 1, ct, ConsistencyParams{}, 10, 4);
  CHECK(clean.epsilon_hat == 0.0);
  CHECK(clean.delta_hat == 1.0);
  CHECK(clean.trials == 100);
  CHECK(clean.worst_pair.empty());
  CHECK_THROWS_AS(estimate_noise_rates(fixture::font(), NoiseParams{}, 99, 1, ct, ConsistencyParams{}),
                  UsageError);
  CHECK_THROWS_AS(estimate_noise_rates(fixture::font(), NoiseParams{}, 100, 1, ct, ConsistencyParams{}, 0),
                  UsageError);

  NoiseParams mild, heavy;
  mild.gaussian_sigma = 60;
  heavy.gaussian_sigma = 180;
  const auto a = estimate_noise_rates(fixture::font(), mild, 200, 3, ct, ConsistencyParams{}, 10, 4);
  const auto b = estimate_noise_rates(fixture::font(), heavy, 200, 3, ct, ConsistencyParams{}, 10, 4);
  CHECK(b.epsilon_hat >= a.epsilon_hat);
  CHECK(b.epsilon_hat > 0.0);
  CHECK(b.delta_hat <= a.delta_hat);
  REQUIRE(b.worst_pair.size() == 3);
  CHECK_FALSE(ct.confusable(b.worst_pair[0], b.worst_pair[2]));
  // dropping the table only adds pairs to the maximum
  const auto open = estimate_noise_rates(fixture::font(), heavy, 200, 3, ConfusionTable{}, ConsistencyParams{}, 10, 4);
  CHECK(open.epsilon_hat >= b.epsilon_hat);
  // thread count does not change the estimate
  const auto serial = estimate_noise_rates(fixture::font(), heavy, 200, 3, ct, ConsistencyParams{}, 10, 1);
  CHECK(serial.epsilon_hits == b.epsilon_hits);
  CHECK(serial.delta_passes == b.delta_passes);
}
