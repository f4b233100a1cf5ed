#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cleanwords/image.hpp"

namespace cleanwords {

struct CharBox {
  std::string label;  // one character (UTF-8 code point) as guessed by the engine
  Box bbox;
};

struct OcrWord {
  int word_id = 0;
  int page = 0;
  Box bbox;
  std::string text;         // raw engine transcription
  double confidence = 0.0;  // [0, 100]
  std::vector<CharBox> chars;
  // Symbol labels do not concatenate to `text`, or a symbol box escapes the word box.
  bool segmentation_inconsistent = false;
};

struct OcrDocument {
  std::vector<OcrWord> words;
  std::vector<std::string> warnings;
};

// OCR interchange TSV:
//   level page word_id char_index left top right bottom conf text
// Word rows carry char_index -1; their symbol rows follow with conf -1.
OcrDocument parse_ocr_tsv(std::string_view contents);
OcrDocument load_ocr_tsv(const std::filesystem::path& path);
std::string format_ocr_tsv(const std::vector<OcrWord>& words);

// Recomputes `segmentation_inconsistent` from the word's own fields.
bool check_segmentation(const OcrWord& word);

struct GlyphRef {
  int glyph_id = 0;
  int word_id = 0;
  int char_index = 0;
  std::string label;
  GrayImage patch;
};

struct GlyphSet {
  std::vector<GlyphRef> glyphs;
  // word ids with at least one glyph that could not be extracted
  std::vector<int> flagged_words;
  std::vector<std::string> errors;

  bool word_flagged(int word_id) const;
};

// Glyph ids number every CharBox of the document in (word, char) order, so an
// id stays the same whether or not earlier glyphs were skipped.
GlyphSet extract_glyphs(const GrayImage& img, const std::vector<OcrWord>& words);

}  // namespace cleanwords
