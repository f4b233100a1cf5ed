#include "cleanwords/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "cleanwords/error.hpp"

namespace cleanwords {

namespace {

bool is_ascii_letter(unsigned char c) { return c < 0x80 && std::isalpha(c); }

bool is_strippable(unsigned char c) { return c < 0x80 && std::ispunct(c); }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::optional<std::string> normalize_token(std::string_view raw) {
  std::string s = trim(raw);
  std::size_t b = 0, e = s.size();
  while (b < e && is_strippable(s[b])) ++b;
  while (e > b && is_strippable(s[e - 1])) --e;
  if (b == e) return std::nullopt;
  std::string out;
  out.reserve(e - b);
  for (std::size_t i = b; i < e; ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (!is_ascii_letter(c)) return std::nullopt;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool Lexicon::insert(std::string_view raw) {
  auto token = normalize_token(raw);
  if (!token) return false;
  auto [it, fresh] = words_.insert(*token);
  if (!fresh) return false;
  lookup_.insert(*token);
  auto& bucket = by_length_[token->size()];
  bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), *token), *token);
  return true;
}

bool Lexicon::contains(std::string_view token) const {
  return lookup_.find(std::string(token)) != lookup_.end();
}

const std::vector<std::string>& Lexicon::with_length(std::size_t length) const {
  static const std::vector<std::string> kEmpty;
  auto it = by_length_.find(length);
  return it == by_length_.end() ? kEmpty : it->second;
}

std::size_t Lexicon::max_length() const {
  return by_length_.empty() ? 0 : by_length_.rbegin()->first;
}

void ConfusionTable::add_substitution(char a, char b) {
  if (a == b) return;
  subs_.insert(std::minmax(a, b));
}

void ConfusionTable::add_split_join(std::string_view pair, char joined) {
  if (pair.size() != 2) throw ConfigError("split/join pattern needs two characters: " + std::string(pair));
  split_joins_.emplace(std::string(pair), joined);
}

bool ConfusionTable::confusable(char a, char b) const {
  if (a == b || subs_.empty()) return false;
  return subs_.count(std::minmax(a, b)) != 0;
}

bool ConfusionTable::split_join(char first, char second, char joined) const {
  if (split_joins_.empty()) return false;
  const char pair[2] = {first, second};
  return split_joins_.count({std::string(pair, 2), joined}) != 0;
}

ConfusionTable ConfusionTable::defaults() {
  ConfusionTable ct;
  ct.add_substitution('o', 'c');
  ct.add_substitution('c', 'e');
  ct.add_substitution('o', 'e');
  ct.add_substitution('h', 'n');
  ct.add_substitution('n', 'u');
  ct.add_split_join("rn", 'm');
  ct.add_split_join("vv", 'w');
  return ct;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read lexicon " + path.string());
  Lexicon lex;
  std::string line;
  while (std::getline(in, line)) lex.insert(line);
  if (in.bad()) throw IoError("error reading lexicon " + path.string());
  if (lex.empty()) throw ConfigError("lexicon " + path.string() + " has no usable words");
  return lex;
}

ConfusionTable parse_confusions(std::string_view text) {
  ConfusionTable ct;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind[0] == '#') continue;
    std::string x, y, extra;
    if (!(fields >> x >> y) || (fields >> extra)) throw ParseError(lineno, "expected two operands");
    if (kind == "S") {
      if (x.size() != 1 || y.size() != 1) throw ParseError(lineno, "substitution operands must be single characters");
      ct.add_substitution(x[0], y[0]);
    } else if (kind == "J") {
      if (x.size() != 2 || y.size() != 1) throw ParseError(lineno, "split/join must be `J xy z`");
      ct.add_split_join(x, y[0]);
    } else {
      throw ParseError(lineno, "unknown directive '" + kind + "'");
    }
  }
  return ct;
}

ConfusionTable load_confusions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read confusion table " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_confusions(buf.str());
}

std::optional<int> pseudo_hamming(std::string_view a, std::string_view b,
                                  const ConfusionTable& ct) {
  if (a.size() != b.size()) return std::nullopt;
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i] && !ct.confusable(a[i], b[i])) ++d;
  }
  return d;
}

int pseudo_edit(std::string_view a, std::string_view b, const ConfusionTable& ct) {
  const std::size_t n = a.size(), m = b.size();
  // dist[i][j]: cost of turning a[0,i) into b[0,j).
  std::vector<int> dist((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> int& { return dist[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const bool free_sub = a[i - 1] == b[j - 1] || ct.confusable(a[i - 1], b[j - 1]);
      int best = at(i - 1, j - 1) + (free_sub ? 0 : 1);
      best = std::min(best, at(i - 1, j) + 1);
      best = std::min(best, at(i, j - 1) + 1);
      if (i >= 2 && ct.split_join(a[i - 2], a[i - 1], b[j - 1])) best = std::min(best, at(i - 2, j - 1));
      if (j >= 2 && ct.split_join(b[j - 2], b[j - 1], a[i - 1])) best = std::min(best, at(i - 1, j - 2));
      at(i, j) = best;
    }
  }
  return at(n, m);
}

std::vector<std::string> neighbors_within(const Lexicon& lex, std::string_view w,
                                          int radius, const ConfusionTable& ct) {
  std::vector<std::string> out;
  for (const auto& x : lex.with_length(w.size())) {
    if (x == w) continue;
    if (*pseudo_hamming(w, x, ct) <= radius) out.push_back(x);
  }
  return out;
}

std::optional<double> growth_rate(const std::vector<long>& counts, std::size_t first) {
  std::vector<double> ratios;
  for (std::size_t i = first; i + 1 < counts.size(); ++i) {
    if (counts[i] > 0) ratios.push_back(static_cast<double>(counts[i + 1]) / counts[i]);
  }
  if (ratios.empty()) return std::nullopt;
  std::sort(ratios.begin(), ratios.end());
  const std::size_t mid = ratios.size() / 2;
  const double median = ratios.size() % 2 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
  if (!(median > 0.0)) return std::nullopt;
  return median;
}

LexiconStats dictionary_stats(const Lexicon& lex, std::string_view w,
                              const ConfusionTable& ct, int max_i) {
  if (max_i < 2) throw UsageError("dictionary_stats needs max_i >= 2");
  LexiconStats stats;
  stats.word = std::string(w);
  stats.d.assign(max_i + 1, 0);
  stats.e.assign(max_i + 1, 0);

  for (const auto& x : lex.with_length(w.size())) {
    if (x == w) continue;
    const int d = *pseudo_hamming(w, x, ct);
    if (d <= max_i) ++stats.d[d];
  }
  const std::size_t len = w.size();
  const std::size_t lo = len > static_cast<std::size_t>(max_i) ? len - max_i : 1;
  for (std::size_t l = lo; l <= len + max_i; ++l) {
    if (l == len) continue;
    for (const auto& x : lex.with_length(l)) {
      const int d = pseudo_edit(w, x, ct);
      if (d <= max_i) ++stats.e[d];
    }
  }
  stats.r_d = growth_rate(stats.d, 2);
  stats.r_e = growth_rate(stats.e, 1);
  return stats;
}

}  // namespace cleanwords
