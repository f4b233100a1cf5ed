#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cleanwords {

// Lowercases ASCII letters, strips leading/trailing punctuation and rejects
// anything left that is not a letter. Returns nullopt for rejected tokens.
std::optional<std::string> normalize_token(std::string_view raw);

class Lexicon {
 public:
  Lexicon() = default;

  // Normalizes and deduplicates; rejected tokens are dropped silently.
  template <typename Range>
  static Lexicon from_words(const Range& words) {
    Lexicon lex;
    for (const auto& w : words) lex.insert(w);
    return lex;
  }

  bool insert(std::string_view raw);
  bool contains(std::string_view token) const;

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Sorted tokens.
  const std::set<std::string>& words() const { return words_; }
  // Tokens of exactly `length` characters, sorted. Empty when none.
  const std::vector<std::string>& with_length(std::size_t length) const;
  std::size_t max_length() const;

 private:
  std::set<std::string> words_;
  std::unordered_set<std::string> lookup_;
  std::map<std::size_t, std::vector<std::string>> by_length_;
};

// Unordered label pairs that substitute for free, plus two-character <-> one
// character split/join patterns that also cost nothing. The substitution
// relation is symmetric but deliberately not transitive.
class ConfusionTable {
 public:
  void add_substitution(char a, char b);
  void add_split_join(std::string_view pair, char joined);

  bool confusable(char a, char b) const;
  // True when the two characters `pair` may be joined into `joined`.
  bool split_join(char first, char second, char joined) const;

  bool empty() const { return subs_.empty() && split_joins_.empty(); }
  const std::set<std::pair<char, char>>& substitutions() const { return subs_; }
  const std::set<std::pair<std::string, char>>& split_joins() const { return split_joins_; }

  // o/c, c/e, o/e, h/n, n/u, rn<->m, vv<->w.
  static ConfusionTable defaults();

 private:
  std::set<std::pair<char, char>> subs_;  // stored with first < second
  std::set<std::pair<std::string, char>> split_joins_;
};

// Lexicon file: one word per line. Throws IoError when unreadable and
// ConfigError when nothing survives normalization.
Lexicon load_lexicon(const std::filesystem::path& path);

// Confusion file: `S a b` substitution pair, `J xy z` split/join pattern,
// `#` comments and blank lines ignored.
ConfusionTable load_confusions(const std::filesystem::path& path);
ConfusionTable parse_confusions(std::string_view text);

// Positions that differ and are not confusable. nullopt when the lengths differ.
std::optional<int> pseudo_hamming(std::string_view a, std::string_view b,
                                  const ConfusionTable& ct);

// Edit distance where confusable substitutions and table split/joins are
// free; other substitutions, insertions and deletions cost 1.
int pseudo_edit(std::string_view a, std::string_view b, const ConfusionTable& ct);

// Same-length lexicon tokens other than `w` within `radius`, sorted.
std::vector<std::string> neighbors_within(const Lexicon& lex, std::string_view w,
                                          int radius, const ConfusionTable& ct);

struct LexiconStats {
  std::string word;
  // d[i]: same-length words at pseudo-Hamming distance exactly i (self excluded).
  std::vector<long> d;
  // e[i]: different-length words at pseudo-edit distance exactly i.
  std::vector<long> e;
  std::optional<double> r_d;
  std::optional<double> r_e;

  long d_at(std::size_t i) const { return i < d.size() ? d[i] : 0; }
  long e_at(std::size_t i) const { return i < e.size() ? e[i] : 0; }
};

// Median of consecutive ratios counts[i+1]/counts[i] for i >= first with
// counts[i] > 0. nullopt when no ratio is available.
std::optional<double> growth_rate(const std::vector<long>& counts, std::size_t first);

LexiconStats dictionary_stats(const Lexicon& lex, std::string_view w,
                              const ConfusionTable& ct, int max_i);

}  // namespace cleanwords
