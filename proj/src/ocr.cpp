#include "cleanwords/ocr.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "cleanwords/atomic_file.hpp"
#include "cleanwords/error.hpp"

namespace cleanwords {

namespace {

constexpr std::string_view kHeader = "level\tpage\tword_id\tchar_index\tleft\ttop\tright\tbottom\tconf\ttext";

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

int parse_int(std::string_view s, std::size_t lineno, const char* field) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(lineno, std::string("bad integer in ") + field + ": '" + std::string(s) + "'");
  return v;
}

double parse_double(std::string_view s, std::size_t lineno) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(lineno, "bad confidence '" + std::string(s) + "'");
  return v;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void trim_trailing(std::string_view& line) {
  while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
}

}  // namespace

bool check_segmentation(const OcrWord& word) {
  std::string joined;
  for (const auto& c : word.chars) {
    joined += c.label;
    if (!c.bbox.valid() || !word.bbox.contains(c.bbox)) return true;
  }
  return joined != word.text;
}

OcrDocument parse_ocr_tsv(std::string_view contents) {
  OcrDocument doc;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  bool seen_header = false;
  OcrWord* current = nullptr;

  while (pos < contents.size()) {
    auto nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = contents.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    trim_trailing(line);
    if (!seen_header) {
      if (line != kHeader) throw ParseError(lineno, "missing or malformed header row");
      seen_header = true;
      continue;
    }
    if (line.empty()) continue;

    const auto f = split_tabs(line);
    if (f.size() != 10) throw ParseError(lineno, "expected 10 fields, got " + std::to_string(f.size()));
    const int page = parse_int(f[1], lineno, "page");
    const int word_id = parse_int(f[2], lineno, "word_id");
    const int char_index = parse_int(f[3], lineno, "char_index");
    Box box{parse_int(f[4], lineno, "left"), parse_int(f[5], lineno, "top"),
            parse_int(f[6], lineno, "right"), parse_int(f[7], lineno, "bottom")};
    if (!box.valid()) throw ParseError(lineno, "degenerate box");
    const double conf = parse_double(f[8], lineno);
    const std::string_view text = f[9];

    if (f[0] == "word") {
      if (char_index != -1) throw ParseError(lineno, "word rows must have char_index -1");
      if (text.empty()) throw ParseError(lineno, "empty word text");
      if (!doc.words.empty() && word_id <= doc.words.back().word_id)
        throw ParseError(lineno, "word ids must increase in reading order");
      OcrWord w;
      w.word_id = word_id;
      w.page = page;
      w.bbox = box;
      w.text = std::string(text);
      w.confidence = conf;
      if (conf < 0.0 || conf > 100.0) {
        w.confidence = std::clamp(conf, 0.0, 100.0);
        doc.warnings.push_back("line " + std::to_string(lineno) + ": confidence " + format_double(conf) +
                               " clamped to [0,100]");
      }
      doc.words.push_back(std::move(w));
      current = &doc.words.back();
    } else if (f[0] == "symbol") {
      if (!current || current->word_id != word_id || current->page != page)
        throw ParseError(lineno, "symbol row does not follow its word row");
      if (char_index != static_cast<int>(current->chars.size()))
        throw ParseError(lineno, "symbol char_index out of sequence");
      if (conf != -1.0) throw ParseError(lineno, "symbol rows must have conf -1");
      if (utf8_length(text) != 1) throw ParseError(lineno, "symbol text must be a single character");
      current->chars.push_back(CharBox{std::string(text), box});
    } else {
      throw ParseError(lineno, "unknown level '" + std::string(f[0]) + "'");
    }
  }
  if (!seen_header) throw ParseError(1, "missing header row");
  for (auto& w : doc.words) w.segmentation_inconsistent = check_segmentation(w);
  return doc;
}

OcrDocument load_ocr_tsv(const std::filesystem::path& path) {
  return parse_ocr_tsv(read_file(path));
}

std::string format_ocr_tsv(const std::vector<OcrWord>& words) {
  std::ostringstream out;
  out << kHeader << '\n';
  auto row = [&](std::string_view level, const OcrWord& w, int ci, const Box& b, const std::string& conf,
                 std::string_view text) {
    out << level << '\t' << w.page << '\t' << w.word_id << '\t' << ci << '\t' << b.left << '\t' << b.top
        << '\t' << b.right << '\t' << b.bottom << '\t' << conf << '\t' << text << '\n';
  };
  for (const auto& w : words) {
    row("word", w, -1, w.bbox, format_double(w.confidence), w.text);
    for (std::size_t i = 0; i < w.chars.size(); ++i)
      row("symbol", w, static_cast<int>(i), w.chars[i].bbox, "-1", w.chars[i].label);
  }
  return out.str();
}

bool GlyphSet::word_flagged(int word_id) const {
  return std::binary_search(flagged_words.begin(), flagged_words.end(), word_id);
}

GlyphSet extract_glyphs(const GrayImage& img, const std::vector<OcrWord>& words) {
  GlyphSet set;
  int next_id = 0;
  for (const auto& w : words) {
    bool flagged = false;
    for (std::size_t i = 0; i < w.chars.size(); ++i) {
      const int id = next_id++;
      const auto& c = w.chars[i];
      if (!img.contains(c.bbox)) {
        set.errors.push_back("glyph " + std::to_string(id) + " (word " + std::to_string(w.word_id) +
                             ", char " + std::to_string(i) + ") lies outside the image");
        flagged = true;
        continue;
      }
      set.glyphs.push_back(GlyphRef{id, w.word_id, static_cast<int>(i), c.label, img.crop(c.bbox)});
    }
    if (flagged) set.flagged_words.push_back(w.word_id);
  }
  std::sort(set.flagged_words.begin(), set.flagged_words.end());
  return set;
}

}  // namespace cleanwords
