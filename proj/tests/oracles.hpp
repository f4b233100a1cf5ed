#pragma once

// Brute-force reference implementations used only by tests. They are written
// from the definitions, independently of the library code paths.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct Table {
  std::set<std::pair<char, char>> subs;  // both orders stored
  std::set<std::pair<std::string, char>> joins;

  void sub(char a, char b) {
    subs.insert({a, b});
    subs.insert({b, a});
  }
  bool free_sub(char a, char b) const { return a == b || subs.count({a, b}) > 0; }
  bool join(char x, char y, char z) const { return joins.count({std::string{x, y}, z}) > 0; }
};

inline Table default_table() {
  Table t;
  t.sub('o', 'c');
  t.sub('c', 'e');
  t.sub('o', 'e');
  t.sub('h', 'n');
  t.sub('n', 'u');
  t.joins.insert({"rn", 'm'});
  t.joins.insert({"vv", 'w'});
  return t;
}

// Suffix recursion with memoization over (i, j).
class EditOracle {
 public:
  EditOracle(std::string a, std::string b, const Table& t) : a_(std::move(a)), b_(std::move(b)), t_(t) {}
  int run() { return go(0, 0); }

 private:
  int go(std::size_t i, std::size_t j) {
    if (i == a_.size()) return static_cast<int>(b_.size() - j);
    if (j == b_.size()) return static_cast<int>(a_.size() - i);
    auto key = std::make_pair(i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int best = 1 + go(i + 1, j);
    best = std::min(best, 1 + go(i, j + 1));
    best = std::min(best, (t_.free_sub(a_[i], b_[j]) ? 0 : 1) + go(i + 1, j + 1));
    if (i + 1 < a_.size() && t_.join(a_[i], a_[i + 1], b_[j])) best = std::min(best, go(i + 2, j + 1));
    if (j + 1 < b_.size() && t_.join(b_[j], b_[j + 1], a_[i])) best = std::min(best, go(i + 1, j + 2));
    memo_[key] = best;
    return best;
  }
  std::string a_, b_;
  const Table& t_;
  std::map<std::pair<std::size_t, std::size_t>, int> memo_;
};

inline int pseudo_edit(const std::string& a, const std::string& b, const Table& t) { return EditOracle(a, b, t).run(); }

inline std::optional<int> pseudo_hamming(const std::string& a, const std::string& b, const Table& t) {
  if (a.size() != b.size()) return std::nullopt;
  int d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += t.free_sub(a[k], b[k]) ? 0 : 1;
  return d;
}

inline int levenshtein(const std::string& a, const std::string& b) { return pseudo_edit(a, b, Table{}); }

// All strings over `alphabet` of length 0..max_len.
inline std::vector<std::string> all_strings(const std::string& alphabet, int max_len) {
  std::vector<std::string> out{""};
  std::vector<std::string> layer{""};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& s : layer)
      for (char c : alphabet) next.push_back(s + c);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

struct Dominance {
  int kind;  // 0 same, 1 other, 2 undominated
  std::string label;
  int stop;
};

// theta given as the exact fraction num/den so the comparison is done in
// integers: count/(i+1) > num/den  <=>  count*den > num*(i+1).
inline Dominance dominate(const std::string& own, const std::vector<std::string>& labels, int max_neighbors, long num,
                          long den) {
  const int steps = std::min<int>(max_neighbors, static_cast<int>(labels.size()));
  for (int i = 1; i <= steps; ++i) {
    std::vector<std::pair<long, std::string>> above;
    std::set<std::string> seen(labels.begin(), labels.begin() + i);
    for (const auto& l : seen) {
      const long count = std::count(labels.begin(), labels.begin() + i, l);
      if (count * den > num * (i + 1)) above.push_back({-count, l});
    }
    if (!above.empty()) {
      std::sort(above.begin(), above.end());
      const auto& winner = above.front().second;
      return {winner == own ? 0 : 1, winner, i};
    }
  }
  return {2, "", steps};
}

}  // namespace oracle
