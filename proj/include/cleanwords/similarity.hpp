#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cleanwords/image.hpp"
#include "cleanwords/ocr.hpp"

namespace cleanwords {

constexpr int kDefaultPatchSide = 24;

// side x side, zero mean and unit Euclidean norm. A zero-variance source
// gives all-zero values and `degenerate` set.
struct NormalizedPatch {
  int side = 0;
  std::vector<double> values;
  bool degenerate = false;
};

// Letterboxes `patch` into a side x side square (bilinear resampling, aspect
// preserved, padding filled with the patch mean) and normalizes it.
NormalizedPatch normalize_patch(const GrayImage& patch, int side = kDefaultPatchSide);

// Resampling step of normalize_patch, before mean/norm normalization.
std::vector<double> letterbox(const GrayImage& patch, int side);

// Dot product of the normalized values; 0 when either patch is degenerate.
double ncc(const NormalizedPatch& a, const NormalizedPatch& b);

struct Neighbor {
  int glyph_id = 0;
  std::string label;
  double score = 0.0;
};

// Normalized patches of every glyph in a document.
class GlyphPool {
 public:
  GlyphPool() = default;
  GlyphPool(const std::vector<GlyphRef>& glyphs, int side = kDefaultPatchSide, unsigned threads = 1);

  std::size_t size() const { return ids_.size(); }
  int side() const { return side_; }

  // Index of `glyph_id` in the pool, or -1.
  int find(int glyph_id) const;
  int glyph_id(std::size_t index) const { return ids_[index]; }
  const std::string& label(std::size_t index) const { return labels_[index]; }
  const NormalizedPatch& patch(std::size_t index) const { return patches_[index]; }

  // Adds an already normalized patch (used by tests and Monte Carlo pools).
  void add(int glyph_id, std::string label, NormalizedPatch patch);

 private:
  int side_ = kDefaultPatchSide;
  std::vector<int> ids_;
  std::vector<std::string> labels_;
  std::vector<NormalizedPatch> patches_;
  std::unordered_map<int, std::size_t> index_;
};

// The M pool glyphs most similar to `query` (excluding `query_id` itself), by
// descending ncc with ties broken by ascending glyph id.
std::vector<Neighbor> rank_similar(int query_id, const NormalizedPatch& query, const GlyphPool& pool,
                                   int max_neighbors);
std::vector<Neighbor> rank_similar(int query_id, const GlyphPool& pool, int max_neighbors);

}  // namespace cleanwords
