#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cleanwords/consistency.hpp"
#include "cleanwords/lexicon.hpp"
#include "cleanwords/ocr.hpp"
#include "cleanwords/similarity.hpp"

namespace cleanwords {

enum class ListMode { Conservative, Aggressive };

const char* to_string(ListMode m);
ListMode parse_list_mode(std::string_view s);

struct PipelineConfig {
  ListMode mode = ListMode::Conservative;
  ConsistencyParams consistency;
  ConfusionTable confusions = ConfusionTable::defaults();
  int min_word_length = 1;
  unsigned threads = 1;

  void validate() const;
};

// Per-character consistency outcomes of one word; nullopt marks a glyph that
// could not be extracted. Implementations must be safe to call concurrently.
class GlyphEvidence {
 public:
  virtual ~GlyphEvidence() = default;
  virtual std::vector<std::optional<DominationOutcome>> outcomes(const OcrWord& word) const = 0;
};

// Evidence from the glyphs of one document: each glyph is ranked against the
// whole document pool and run through dominate_check. Results are cached.
class DocumentEvidence : public GlyphEvidence {
 public:
  DocumentEvidence(const std::vector<OcrWord>& words, const GlyphSet& glyphs, const GlyphPool& pool,
                   ConsistencyParams params);

  std::vector<std::optional<DominationOutcome>> outcomes(const OcrWord& word) const override;
  DominationOutcome glyph_outcome(int glyph_id) const;

 private:
  const GlyphPool* pool_;
  ConsistencyParams params_;
  // word_id -> glyph id per char, -1 when skipped
  std::map<int, std::vector<int>> word_glyphs_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, DominationOutcome> cache_;
};

// Where a word left the pipeline.
enum class Stage {
  Segmentation = 0,  // inconsistent engine segmentation
  NotInLexicon = 1,
  HammingNeighbor = 2,
  Consistency = 3,
  Accepted = 4,
};

const char* to_string(Stage s);

struct CleanEntry {
  int word_id = 0;
  int page = 0;
  Box bbox;
  std::string text;
  ListMode mode = ListMode::Conservative;
  std::vector<int> stop_indices;
};

struct CleanListStats {
  long total_words = 0;
  long dictionary_words = 0;
  long dropped_segmentation = 0;
  long dropped_not_in_lexicon = 0;
  long dropped_hamming = 0;
  long dropped_consistency = 0;
};

struct CleanList {
  ListMode mode = ListMode::Conservative;
  std::vector<CleanEntry> entries;
  CleanListStats stats;
  // parallel to the input words
  std::vector<Stage> stages;

  bool contains(int word_id) const;
};

CleanList build_clean_list(const std::vector<OcrWord>& words, const GlyphEvidence& evidence, const Lexicon& lex,
                           const PipelineConfig& cfg);

// Clean list TSV: word_id page left top right bottom mode text
std::string format_clean_tsv(const CleanList& list);
CleanList parse_clean_tsv(std::string_view contents);
CleanList load_clean_tsv(const std::filesystem::path& path);

std::string stats_json(const CleanList& list);

}  // namespace cleanwords
