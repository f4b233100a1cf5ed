#include "cleanwords/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "cleanwords/atomic_file.hpp"
#include "cleanwords/error.hpp"
#include "cleanwords/parallel.hpp"

namespace cleanwords {

const char* to_string(ListMode m) { return m == ListMode::Conservative ? "conservative" : "aggressive"; }

ListMode parse_list_mode(std::string_view s) {
  if (s == "conservative") return ListMode::Conservative;
  if (s == "aggressive") return ListMode::Aggressive;
  throw UsageError("unknown list mode '" + std::string(s) + "'");
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::Segmentation: return "segmentation";
    case Stage::NotInLexicon: return "not_in_lexicon";
    case Stage::HammingNeighbor: return "hamming_neighbor";
    case Stage::Consistency: return "consistency";
    case Stage::Accepted: return "accepted";
  }
  return "?";
}

void PipelineConfig::validate() const {
  consistency.validate();
  if (min_word_length < 1) throw UsageError("min_word_length must be at least 1");
}

DocumentEvidence::DocumentEvidence(const std::vector<OcrWord>& words, const GlyphSet& glyphs, const GlyphPool& pool,
                                   ConsistencyParams params)
    : pool_(&pool), params_(params) {
  params_.validate();
  std::map<std::pair<int, int>, int> by_position;
  for (const auto& g : glyphs.glyphs) by_position[{g.word_id, g.char_index}] = g.glyph_id;
  for (const auto& w : words) {
    auto& ids = word_glyphs_[w.word_id];
    ids.assign(w.chars.size(), -1);
    for (std::size_t i = 0; i < w.chars.size(); ++i) {
      auto it = by_position.find({w.word_id, static_cast<int>(i)});
      if (it != by_position.end() && pool.find(it->second) >= 0) ids[i] = it->second;
    }
  }
}

DominationOutcome DocumentEvidence::glyph_outcome(int glyph_id) const {
  {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(glyph_id);
    if (it != cache_.end()) return it->second;
  }
  const int index = pool_->find(glyph_id);
  if (index < 0) throw UsageError("glyph " + std::to_string(glyph_id) + " is not in the pool");
  const auto ranked = rank_similar(glyph_id, *pool_, params_.max_neighbors);
  auto outcome = dominate_check(pool_->label(static_cast<std::size_t>(index)), ranked, params_);
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(glyph_id, outcome);
  return outcome;
}

std::vector<std::optional<DominationOutcome>> DocumentEvidence::outcomes(const OcrWord& word) const {
  std::vector<std::optional<DominationOutcome>> out;
  auto it = word_glyphs_.find(word.word_id);
  if (it == word_glyphs_.end()) return std::vector<std::optional<DominationOutcome>>(word.chars.size());
  for (int id : it->second) {
    if (id < 0) {
      out.emplace_back();
    } else {
      out.emplace_back(glyph_outcome(id));
    }
  }
  return out;
}

bool CleanList::contains(int word_id) const {
  return std::any_of(entries.begin(), entries.end(), [&](const CleanEntry& e) { return e.word_id == word_id; });
}

CleanList build_clean_list(const std::vector<OcrWord>& words, const GlyphEvidence& evidence, const Lexicon& lex,
                           const PipelineConfig& cfg) {
  cfg.validate();
  CleanList list;
  list.mode = cfg.mode;
  list.stats.total_words = static_cast<long>(words.size());
  list.stages.assign(words.size(), Stage::Accepted);

  std::vector<std::optional<std::string>> normalized(words.size());
  std::unordered_set<std::string> document_tokens;
  for (std::size_t i = 0; i < words.size(); ++i) {
    normalized[i] = normalize_token(words[i].text);
    if (normalized[i]) document_tokens.insert(*normalized[i]);
  }

  // Steps 1 and 2 depend only on the token, so neighbors are computed once per token.
  std::unordered_map<std::string, std::vector<std::string>> neighbor_cache;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    if (w.segmentation_inconsistent) {
      list.stages[i] = Stage::Segmentation;
      ++list.stats.dropped_segmentation;
      continue;
    }
    const auto& token = normalized[i];
    if (!token || !lex.contains(*token)) {
      list.stages[i] = Stage::NotInLexicon;
      ++list.stats.dropped_not_in_lexicon;
      continue;
    }
    ++list.stats.dictionary_words;
    if (static_cast<int>(token->size()) < cfg.min_word_length) {
      list.stages[i] = Stage::NotInLexicon;
      ++list.stats.dropped_not_in_lexicon;
      continue;
    }
    auto it = neighbor_cache.find(*token);
    if (it == neighbor_cache.end())
      it = neighbor_cache.emplace(*token, neighbors_within(lex, *token, 1, cfg.confusions)).first;
    const auto& neighbors = it->second;
    bool blocked = !neighbors.empty();
    if (blocked && cfg.mode == ListMode::Aggressive) {
      blocked = std::any_of(neighbors.begin(), neighbors.end(),
                            [&](const std::string& n) { return document_tokens.count(n) != 0; });
    }
    if (blocked) {
      list.stages[i] = Stage::HammingNeighbor;
      ++list.stats.dropped_hamming;
      continue;
    }
    candidates.push_back(i);
  }

  std::vector<std::vector<std::optional<DominationOutcome>>> outcomes(candidates.size());
  parallel_for(candidates.size(), cfg.threads,
               [&](std::size_t k) { outcomes[k] = evidence.outcomes(words[candidates[k]]); });

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& w = words[candidates[k]];
    const auto& per_glyph = outcomes[k];
    bool skipped = per_glyph.size() != w.chars.size();
    std::vector<DominationOutcome> present;
    for (const auto& o : per_glyph) {
      if (o) {
        present.push_back(*o);
      } else {
        skipped = true;
      }
    }
    if (!word_reliability(w.segmentation_inconsistent, skipped, present)) {
      list.stages[candidates[k]] = Stage::Consistency;
      ++list.stats.dropped_consistency;
      continue;
    }
    CleanEntry e{w.word_id, w.page, w.bbox, w.text, cfg.mode, {}};
    for (const auto& o : present) e.stop_indices.push_back(o.stop_index);
    list.entries.push_back(std::move(e));
  }
  return list;
}

std::string format_clean_tsv(const CleanList& list) {
  std::ostringstream out;
  out << "word_id\tpage\tleft\ttop\tright\tbottom\tmode\ttext\n";
  for (const auto& e : list.entries) {
    out << e.word_id << '\t' << e.page << '\t' << e.bbox.left << '\t' << e.bbox.top << '\t' << e.bbox.right << '\t'
        << e.bbox.bottom << '\t' << to_string(e.mode) << '\t' << e.text << '\n';
  }
  return out.str();
}

CleanList parse_clean_tsv(std::string_view contents) {
  CleanList list;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  bool mode_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != "word_id\tpage\tleft\ttop\tright\tbottom\tmode\ttext")
        throw ParseError(lineno, "missing or malformed clean list header");
      header = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (int k = 0; k < 7; ++k) {
      const auto tab = line.find('\t', start);
      if (tab == std::string::npos) throw ParseError(lineno, "expected 8 fields");
      f.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    f.push_back(line.substr(start));
    auto num = [&](const std::string& s) {
      int v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError(lineno, "bad integer '" + s + "'");
      return v;
    };
    CleanEntry e;
    e.word_id = num(f[0]);
    e.page = num(f[1]);
    e.bbox = Box{num(f[2]), num(f[3]), num(f[4]), num(f[5])};
    try {
      e.mode = parse_list_mode(f[6]);
    } catch (const UsageError& err) {
      throw ParseError(lineno, err.what());
    }
    e.text = f[7];
    if (!mode_seen) {
      list.mode = e.mode;
      mode_seen = true;
    }
    list.entries.push_back(std::move(e));
  }
  if (!header) throw ParseError(1, "missing clean list header");
  return list;
}

CleanList load_clean_tsv(const std::filesystem::path& path) { return parse_clean_tsv(read_file(path)); }

std::string stats_json(const CleanList& list) {
  const auto& s = list.stats;
  nlohmann::ordered_json j;
  j["mode"] = to_string(list.mode);
  j["total_words"] = s.total_words;
  j["dictionary_words"] = s.dictionary_words;
  j["entries"] = list.entries.size();
  j["dropped"] = {{"segmentation", s.dropped_segmentation},
                  {"not_in_lexicon", s.dropped_not_in_lexicon},
                  {"hamming_neighbor", s.dropped_hamming},
                  {"consistency", s.dropped_consistency}};
  return j.dump(2) + "\n";
}

}  // namespace cleanwords
