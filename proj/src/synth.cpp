#include "cleanwords/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cleanwords/error.hpp"
#include "cleanwords/parallel.hpp"

namespace cleanwords {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct Point {
  double x, y;
};
using Stroke = std::vector<Point>;

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint8_t kInk = 20;
constexpr std::uint8_t kPaper = 255;

// Elliptical arc; angles in degrees, 90 is the top of the ellipse.
Stroke arc(double cx, double cy, double rx, double ry, double from, double to) {
  Stroke s;
  const int steps = std::max(4, static_cast<int>(std::abs(to - from) / 12.0));
  for (int k = 0; k <= steps; ++k) {
    const double t = (from + (to - from) * k / steps) * kPi / 180.0;
    s.push_back({cx + rx * std::cos(t), cy - ry * std::sin(t)});
  }
  return s;
}

Stroke line(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y1}}; }

// Lowercase letterforms on a 16x24 cell: x-height 9..19, ascenders from 3,
// descenders to 23.
std::map<char, std::vector<Stroke>> letter_strokes() {
  std::map<char, std::vector<Stroke>> g;
  g['a'] = {arc(7.5, 15.8, 3.6, 3.2, 0, 360), line(11.3, 11, 11.3, 19), arc(8, 12, 3.3, 2.8, 0, 160)};
  g['b'] = {line(4, 3, 4, 19), arc(8.3, 14, 4, 5, 0, 360)};
  g['c'] = {arc(8, 14, 4.2, 5, 45, 315)};
  g['d'] = {line(12, 3, 12, 19), arc(7.7, 14, 4, 5, 0, 360)};
  g['e'] = {line(3.8, 14, 12.2, 14), arc(8, 14, 4.2, 5, 0, 320)};
  g['f'] = {line(7, 6, 7, 19), arc(9.5, 6, 2.5, 2.5, 20, 180), line(4, 10, 11, 10)};
  g['g'] = {arc(7.7, 13, 4, 4, 0, 360), line(11.7, 9, 11.7, 20), arc(8, 20, 3.7, 2.8, 200, 360)};
  g['h'] = {line(4, 3, 4, 19), arc(8, 13, 4, 3.5, 0, 180), line(12, 13, 12, 19)};
  g['i'] = {line(8, 9, 8, 19), line(8, 5.2, 8, 6.2)};
  g['j'] = {line(9, 9, 9, 21), arc(6.5, 21, 2.5, 2, 190, 360), line(9, 5.2, 9, 6.2)};
  g['k'] = {line(4, 3, 4, 19), line(11.5, 9, 4.5, 15), line(7, 13, 12, 19)};
  g['l'] = {line(8, 3, 8, 19)};
  g['m'] = {line(2.5, 9, 2.5, 19), arc(5.25, 12.5, 2.75, 3, 0, 180), line(8, 12.5, 8, 19),
            arc(10.75, 12.5, 2.75, 3, 0, 180), line(13.5, 12.5, 13.5, 19)};
  g['n'] = {line(4, 9, 4, 19), arc(8, 13, 4, 3.5, 0, 180), line(12, 13, 12, 19)};
  g['o'] = {arc(8, 14, 4.2, 5, 0, 360)};
  g['p'] = {line(4, 9, 4, 23), arc(8.3, 14, 4, 5, 0, 360)};
  g['q'] = {line(12, 9, 12, 23), arc(7.7, 14, 4, 5, 0, 360)};
  g['r'] = {line(5, 9, 5, 19), arc(8.5, 13, 3.5, 3.2, 60, 180)};
  g['s'] = {{{12, 10.5}, {10, 9.2}, {7, 9.2}, {4.8, 10.6}, {5, 12.8}, {8, 14}, {11, 15.2}, {11.4, 17.6}, {9, 19},
             {6, 19}, {4, 17.8}}};
  g['t'] = {line(7, 5, 7, 17), arc(9.5, 17, 2.5, 2, 180, 330), line(4, 9.5, 11, 9.5)};
  g['u'] = {line(4, 9, 4, 15.5), arc(8, 15.5, 4, 3.5, 180, 360), line(12, 9, 12, 19)};
  g['v'] = {{{3, 9}, {8, 19}, {13, 9}}};
  g['w'] = {{{1.5, 9}, {4.5, 19}, {8, 11}, {11.5, 19}, {14.5, 9}}};
  g['x'] = {line(3, 9, 13, 19), line(13, 9, 3, 19)};
  g['y'] = {line(3, 9, 8, 19), line(13, 9, 6, 23.3)};
  g['z'] = {{{3.5, 9}, {12.5, 9}, {3.5, 19}, {12.5, 19}}};
  return g;
}

double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x, ey = a.y + t * dy - p.y;
  return std::sqrt(ex * ex + ey * ey);
}

GrayImage rasterize(const std::vector<Stroke>& strokes, int w, int h, double half_width) {
  GrayImage img(w, h, kPaper);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Point p{x + 0.5, y + 0.5};
      double d = 1e9;
      for (const auto& s : strokes) {
        if (s.size() == 1) d = std::min(d, segment_distance(p, s[0], s[0]));
        for (std::size_t k = 0; k + 1 < s.size(); ++k) d = std::min(d, segment_distance(p, s[k], s[k + 1]));
      }
      const double coverage = std::clamp(half_width + 0.5 - d, 0.0, 1.0);
      img.at(x, y) = static_cast<std::uint8_t>(std::lround(kPaper - coverage * (kPaper - kInk)));
    }
  }
  return img;
}

}  // namespace

SynthFont SynthFont::generate(std::uint64_t seed) {
  SynthFont font;
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::uniform_real_distribution<double> wobble(-0.35, 0.35);
  std::uniform_real_distribution<double> weight(1.0, 1.25);
  const double half_width = weight(rng);
  for (auto& [c, strokes] : letter_strokes()) {
    for (auto& s : strokes) {
      // one offset per stroke keeps arcs smooth
      const double ox = wobble(rng), oy = wobble(rng);
      for (auto& p : s) {
        p.x += ox;
        p.y += oy;
      }
    }
    font.prototypes.emplace(c, rasterize(strokes, font.cell_width, font.cell_height, half_width));
  }
  return font;
}

void SynthFont::require(const std::string& token) const {
  for (char c : token) {
    if (!has(c)) throw ConfigError(std::string("font has no glyph for '") + c + "'");
  }
}

void NoiseParams::validate() const {
  if (!(gaussian_sigma >= 0.0)) throw UsageError("sigma must be non-negative");
  if (!(saltpepper_rate >= 0.0 && saltpepper_rate <= 1.0)) throw UsageError("salt-and-pepper rate must lie in [0, 1]");
  if (!(swap_rate >= 0.0 && swap_rate <= 1.0)) throw UsageError("swap rate must lie in [0, 1]");
  if (jitter < 0) throw UsageError("jitter must be non-negative");
}

void apply_noise(GrayImage& img, const NoiseParams& noise, std::mt19937_64& rng) {
  if (noise.gaussian_sigma > 0.0) {
    std::normal_distribution<double> gauss(0.0, noise.gaussian_sigma);
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x)
        img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(img.at(x, y) + gauss(rng)), 0L, 255L));
  }
  if (noise.saltpepper_rate > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x)
        if (u(rng) < noise.saltpepper_rate) img.at(x, y) = u(rng) < 0.5 ? 0 : 255;
  }
}

SynthPage render_document(const std::vector<std::string>& text, const SynthFont& font, const NoiseParams& noise,
                          std::uint64_t seed, const PageLayout& layout) {
  if (text.empty()) throw UsageError("cannot render an empty document");
  noise.validate();
  for (const auto& t : text) font.require(t);

  SynthPage page;
  page.truth = text;
  const int advance = font.cell_width + font.char_spacing;
  const int line_height = font.cell_height + layout.line_gap;
  int x = layout.margin, y = layout.margin;
  for (const auto& t : text) {
    const int width = static_cast<int>(t.size()) * advance - font.char_spacing;
    if (x > layout.margin && x + width > layout.page_width - layout.margin) {
      x = layout.margin;
      y += line_height;
    }
    std::vector<Box> cells;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const int left = x + static_cast<int>(k) * advance;
      cells.push_back(Box{left, y, left + font.cell_width, y + font.cell_height});
    }
    page.word_boxes.push_back(Box{cells.front().left, y, cells.back().right, y + font.cell_height});
    page.char_boxes.push_back(std::move(cells));
    x += width + font.word_spacing;
  }
  const int width = std::max(layout.page_width, layout.margin * 2 + font.cell_width);
  const int height = y + font.cell_height + layout.margin;
  page.image = GrayImage(width, height, kPaper);
  for (std::size_t w = 0; w < text.size(); ++w) {
    for (std::size_t k = 0; k < text[w].size(); ++k) {
      const auto& proto = font.prototypes.at(text[w][k]);
      const Box& b = page.char_boxes[w][k];
      for (int py = 0; py < proto.height(); ++py)
        for (int px = 0; px < proto.width(); ++px) page.image.at(b.left + px, b.top + py) = proto.at(px, py);
    }
  }
  std::mt19937_64 rng(derive_seed(seed, 1));
  apply_noise(page.image, noise, rng);
  return page;
}

Recognizer::Recognizer(const SynthFont& f, int side_) : font(&f), side(side_) {
  for (const auto& [c, proto] : f.prototypes) {
    labels.push_back(c);
    prototypes.push_back(normalize_patch(proto, side));
  }
}

std::vector<double> Recognizer::scores(const NormalizedPatch& patch) const {
  std::vector<double> out;
  out.reserve(prototypes.size());
  for (const auto& p : prototypes) out.push_back(ncc(patch, p));
  return out;
}

std::pair<char, double> Recognizer::classify(const NormalizedPatch& patch) const {
  const auto s = scores(patch);
  std::size_t best = 0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s[k] > s[best]) best = k;
  }
  return {labels[best], s[best]};
}

std::optional<std::string> nearest_lexicon_word(const Lexicon& lex, const std::string& token,
                                                const ConfusionTable& ct) {
  std::optional<std::string> best;
  int best_d = 0;
  for (const auto& w : lex.words()) {  // sorted, so the first minimum wins ties
    const int d = pseudo_edit(token, w, ct);
    if (!best || d < best_d) {
      best = w;
      best_d = d;
      if (d == 0) break;
    }
  }
  return best;
}

std::vector<OcrWord> simulate_ocr(const SynthPage& page, const SynthFont& font, const NoiseParams& noise,
                                  const Lexicon& lex, const ConfusionTable& ct, std::uint64_t seed) {
  noise.validate();
  const Recognizer recognizer(font);
  std::mt19937_64 rng(derive_seed(seed, 2));
  std::uniform_int_distribution<int> shift(-noise.jitter, noise.jitter);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GrayImage& img = page.image;

  std::vector<OcrWord> words;
  words.reserve(page.truth.size());
  for (std::size_t w = 0; w < page.truth.size(); ++w) {
    OcrWord word;
    word.word_id = static_cast<int>(w);
    word.page = 1;
    double score_sum = 0.0;
    Box bbox{};
    for (std::size_t k = 0; k < page.char_boxes[w].size(); ++k) {
      Box b = page.char_boxes[w][k];
      if (noise.jitter > 0) {
        const int dx = std::clamp(shift(rng), -b.left, img.width() - b.right);
        const int dy = std::clamp(shift(rng), -b.top, img.height() - b.bottom);
        b = Box{b.left + dx, b.top + dy, b.right + dx, b.bottom + dy};
      }
      auto [label, score] = recognizer.classify(normalize_patch(img.crop(b), recognizer.side));
      for (const auto& [x, y] : noise.swap_pairs) {
        if (label != x && label != y) continue;
        if (u(rng) < noise.swap_rate) label = label == x ? y : x;
        break;
      }
      score_sum += score;
      word.chars.push_back(CharBox{std::string(1, label), b});
      word.text.push_back(label);
      bbox = k == 0 ? b
                    : Box{std::min(bbox.left, b.left), std::min(bbox.top, b.top), std::max(bbox.right, b.right),
                          std::max(bbox.bottom, b.bottom)};
    }
    word.bbox = bbox;
    word.confidence = std::clamp(100.0 * score_sum / static_cast<double>(word.chars.size()), 0.0, 100.0);
    if (noise.project_to_dictionary && !lex.contains(word.text)) {
      if (auto target = nearest_lexicon_word(lex, word.text, ct)) {
        // The engine keeps its segmentation; symbol labels follow the projected
        // text only when the lengths agree.
        if (target->size() == word.chars.size()) {
          for (std::size_t k = 0; k < target->size(); ++k) word.chars[k].label = std::string(1, (*target)[k]);
        }
        word.text = *target;
      }
    }
    word.segmentation_inconsistent = check_segmentation(word);
    words.push_back(std::move(word));
  }
  return words;
}

GrayImage render_isolated(const SynthFont& font, char c, const NoiseParams& noise, std::mt19937_64& rng) {
  const int margin = noise.jitter;
  GrayImage canvas(font.cell_width + 2 * margin, font.cell_height + 2 * margin, kPaper);
  const auto& proto = font.prototypes.at(c);
  for (int y = 0; y < proto.height(); ++y)
    for (int x = 0; x < proto.width(); ++x) canvas.at(margin + x, margin + y) = proto.at(x, y);
  apply_noise(canvas, noise, rng);
  int dx = 0, dy = 0;
  if (margin > 0) {
    std::uniform_int_distribution<int> shift(-margin, margin);
    dx = shift(rng);
    dy = shift(rng);
  }
  return canvas.crop(Box{margin + dx, margin + dy, margin + dx + font.cell_width, margin + dy + font.cell_height});
}

NoiseRates estimate_noise_rates(const SynthFont& font, const NoiseParams& noise, int trials, std::uint64_t seed,
                                const ConfusionTable& ct, const ConsistencyParams& params, int pool_per_class,
                                unsigned threads) {
  if (trials < 100) throw UsageError("noise-rate estimation needs at least 100 trials");
  if (pool_per_class < 1) throw UsageError("reference pool needs at least one glyph per class");
  noise.validate();
  params.validate();
  const Recognizer recognizer(font);
  const std::size_t n = recognizer.labels.size();

  // Per trial: n*n "c1 glyph scored higher against c2" flags, then n pass flags.
  std::vector<std::vector<char>> outcomes(static_cast<std::size_t>(trials));
  parallel_for(outcomes.size(), threads, [&](std::size_t t) {
    std::vector<char> hits(n * n + n, 0);
    std::mt19937_64 rng(derive_seed(seed, t));
    GlyphPool pool;
    int next_id = 0;
    for (std::size_t c = 0; c < n; ++c) {
      for (int k = 0; k < pool_per_class; ++k) {
        auto patch = normalize_patch(render_isolated(font, recognizer.labels[c], noise, rng), recognizer.side);
        const char label = recognizer.classify(patch).first;
        pool.add(next_id++, std::string(1, label), std::move(patch));
      }
    }
    for (std::size_t c1 = 0; c1 < n; ++c1) {
      const char label = recognizer.labels[c1];
      const auto patch = normalize_patch(render_isolated(font, label, noise, rng), recognizer.side);
      const auto s = recognizer.scores(patch);
      for (std::size_t c2 = 0; c2 < n; ++c2) {
        if (c2 != c1 && s[c2] > s[c1]) hits[c1 * n + c2] = 1;
      }
      const auto ranked = rank_similar(-1, patch, pool, params.max_neighbors);
      if (dominate_check(std::string(1, label), ranked, params).kind == Domination::DominatedSame) hits[n * n + c1] = 1;
    }
    outcomes[t] = std::move(hits);
  });
  std::vector<long> totals(n * n + n, 0);
  for (const auto& o : outcomes)
    for (std::size_t k = 0; k < o.size(); ++k) totals[k] += o[k];

  NoiseRates rates;
  rates.trials = trials;
  rates.pool_per_class = pool_per_class;
  for (std::size_t c1 = 0; c1 < n; ++c1) {
    for (std::size_t c2 = 0; c2 < n; ++c2) {
      if (c1 == c2 || ct.confusable(recognizer.labels[c1], recognizer.labels[c2])) continue;
      if (totals[c1 * n + c2] > rates.epsilon_hits) {
        rates.epsilon_hits = totals[c1 * n + c2];
        rates.worst_pair = std::string(1, recognizer.labels[c1]) + ">" + recognizer.labels[c2];
      }
    }
  }
  rates.epsilon_hat = static_cast<double>(rates.epsilon_hits) / trials;
  rates.delta_passes = trials;
  for (std::size_t c = 0; c < n; ++c) {
    if (rates.worst_class.empty() || totals[n * n + c] < rates.delta_passes) {
      rates.delta_passes = totals[n * n + c];
      rates.worst_class = std::string(1, recognizer.labels[c]);
    }
  }
  rates.delta_hat = static_cast<double>(rates.delta_passes) / trials;
  return rates;
}

std::vector<std::string> sample_text(const std::vector<std::string>& ranked, int word_count, std::size_t vocabulary,
                                     double exponent, std::uint64_t seed) {
  const std::size_t v = std::min(vocabulary, ranked.size());
  if (v == 0 || word_count < 1) throw UsageError("need a vocabulary and a positive word count");
  std::vector<double> weights(v);
  for (std::size_t r = 0; r < v; ++r) weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), exponent);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::mt19937_64 rng(derive_seed(seed, 3));
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(word_count));
  for (int i = 0; i < word_count; ++i) out.push_back(ranked[pick(rng)]);
  return out;
}

std::vector<std::size_t> plant_nondictionary(std::vector<std::string>& tokens, const Lexicon& lex,
                                             const ConfusionTable& ct, int count, std::uint64_t seed) {
  static const std::string kReplacements = "tairsldgkbpfm";
  std::mt19937_64 rng(derive_seed(seed, 4));
  std::vector<std::size_t> order(tokens.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> planted;
  for (std::size_t idx : order) {
    if (static_cast<int>(planted.size()) >= count) break;
    std::string& t = tokens[idx];
    if (t.size() < 4) continue;
    std::vector<std::size_t> positions(t.size());
    std::iota(positions.begin(), positions.end(), 0);
    std::shuffle(positions.begin(), positions.end(), rng);
    std::string letters = kReplacements;
    std::shuffle(letters.begin(), letters.end(), rng);
    bool done = false;
    for (std::size_t p : positions) {
      for (char r : letters) {
        if (r == t[p] || ct.confusable(r, t[p])) continue;
        std::string variant = t;
        variant[p] = r;
        if (lex.contains(variant)) continue;
        t = variant;
        done = true;
        break;
      }
      if (done) break;
    }
    if (done) planted.push_back(idx);
  }
  std::sort(planted.begin(), planted.end());
  return planted;
}

double estimate_p1(const std::vector<OcrWord>& words, const std::vector<AlignedLabel>& labels, const Lexicon& lex,
                   const ConfusionTable& ct) {
  if (words.size() != labels.size()) throw UsageError("labels must parallel words");
  long hits = 0, correct = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto token = normalize_token(words[i].text);
    if (!token || !lex.contains(*token)) continue;
    if (labels[i].correct) {
      ++correct;
    } else if (labels[i].truth_token && !lex.contains(*labels[i].truth_token) &&
               pseudo_edit(*labels[i].truth_token, *token, ct) == 1) {
      ++hits;
    }
  }
  return correct ? static_cast<double>(hits) / static_cast<double>(correct) : 0.0;
}

}  // namespace cleanwords
