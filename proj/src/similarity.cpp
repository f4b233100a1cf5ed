#include "cleanwords/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "cleanwords/error.hpp"
#include "cleanwords/parallel.hpp"

namespace cleanwords {

std::vector<double> letterbox(const GrayImage& patch, int side) {
  if (patch.empty()) throw UsageError("cannot normalize an empty patch");
  if (side < 1) throw UsageError("patch side must be positive");
  const int w = patch.width(), h = patch.height();

  double mean = 0.0;
  for (auto v : patch.pixels()) mean += v;
  mean /= static_cast<double>(patch.pixels().size());

  const double scale = std::min(static_cast<double>(side) / w, static_cast<double>(side) / h);
  const int nw = std::clamp(static_cast<int>(std::lround(w * scale)), 1, side);
  const int nh = std::clamp(static_cast<int>(std::lround(h * scale)), 1, side);
  const int ox = (side - nw) / 2, oy = (side - nh) / 2;

  std::vector<double> out(static_cast<std::size_t>(side) * side, mean);
  const double sx = static_cast<double>(w) / nw, sy = static_cast<double>(h) / nh;
  for (int y = 0; y < nh; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, h - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, h - 1);
    const double ty = fy - y0;
    for (int x = 0; x < nw; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, w - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, w - 1);
      const double tx = fx - x0;
      const double top = patch.at(x0, y0) * (1 - tx) + patch.at(x1, y0) * tx;
      const double bot = patch.at(x0, y1) * (1 - tx) + patch.at(x1, y1) * tx;
      out[static_cast<std::size_t>(oy + y) * side + ox + x] = top * (1 - ty) + bot * ty;
    }
  }
  return out;
}

NormalizedPatch normalize_patch(const GrayImage& patch, int side) {
  NormalizedPatch out;
  out.side = side;
  out.values = letterbox(patch, side);

  double mean = 0.0;
  for (double v : out.values) mean += v;
  mean /= static_cast<double>(out.values.size());
  double sq = 0.0;
  for (double& v : out.values) {
    v -= mean;
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  // Intensities are bytes, so any real contrast gives a norm far above this.
  if (norm < 1e-9) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    out.degenerate = true;
    return out;
  }
  for (double& v : out.values) v /= norm;
  return out;
}

double ncc(const NormalizedPatch& a, const NormalizedPatch& b) {
  if (a.side != b.side || a.values.size() != b.values.size())
    throw UsageError("ncc of patches with different sides");
  if (a.degenerate || b.degenerate) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return std::clamp(s, -1.0, 1.0);
}

GlyphPool::GlyphPool(const std::vector<GlyphRef>& glyphs, int side, unsigned threads) : side_(side) {
  ids_.reserve(glyphs.size());
  labels_.reserve(glyphs.size());
  for (const auto& g : glyphs) {
    if (!index_.emplace(g.glyph_id, ids_.size()).second) throw UsageError("duplicate glyph id in pool");
    ids_.push_back(g.glyph_id);
    labels_.push_back(g.label);
  }
  patches_.resize(glyphs.size());
  parallel_for(glyphs.size(), threads, [&](std::size_t i) { patches_[i] = normalize_patch(glyphs[i].patch, side); });
}

int GlyphPool::find(int glyph_id) const {
  auto it = index_.find(glyph_id);
  return it == index_.end() ? -1 : static_cast<int>(it->second);
}

void GlyphPool::add(int glyph_id, std::string label, NormalizedPatch patch) {
  if (patch.side != side_) throw UsageError("patch side does not match pool");
  if (!index_.emplace(glyph_id, ids_.size()).second) throw UsageError("duplicate glyph id in pool");
  ids_.push_back(glyph_id);
  labels_.push_back(std::move(label));
  patches_.push_back(std::move(patch));
}

std::vector<Neighbor> rank_similar(int query_id, const NormalizedPatch& query, const GlyphPool& pool,
                                   int max_neighbors) {
  struct Scored {
    double score;
    int id;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.glyph_id(i) == query_id) continue;
    scored.push_back({ncc(query, pool.patch(i)), pool.glyph_id(i), i});
  }
  const auto k = std::min<std::size_t>(std::max(max_neighbors, 0), scored.size());
  auto better = [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), better);
  std::vector<Neighbor> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({scored[i].id, pool.label(scored[i].index), scored[i].score});
  return out;
}

std::vector<Neighbor> rank_similar(int query_id, const GlyphPool& pool, int max_neighbors) {
  const int index = pool.find(query_id);
  if (index < 0) throw UsageError("glyph " + std::to_string(query_id) + " is not in the pool");
  return rank_similar(query_id, pool.patch(static_cast<std::size_t>(index)), pool, max_neighbors);
}

}  // namespace cleanwords
