#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "test_support.hpp"

#include "cleanwords/error.hpp"
#include "cleanwords/lexicon.hpp"

using namespace cleanwords;

namespace {

oracle::Table to_oracle(const ConfusionTable& ct) {
  oracle::Table t;
  for (const auto& [a, b] : ct.substitutions()) t.sub(a, b);
  for (const auto& j : ct.split_joins()) t.joins.insert(j);
  return t;
}

}  // namespace

TEST_CASE("normalize_token folds case and strips surrounding punctuation") {
  CHECK(normalize_token("Cat") == "cat");
  CHECK(normalize_token("dog!") == "dog");
  CHECK(normalize_token("  \"Hello,\" ") == "hello");
  CHECK_FALSE(normalize_token("don't").has_value());
  CHECK_FALSE(normalize_token("abc1").has_value());
  CHECK_FALSE(normalize_token("").has_value());
  CHECK_FALSE(normalize_token("...").has_value());
}

TEST_CASE("load_lexicon normalizes and deduplicates") {
  auto dir = scratch_dir("lexicon");
  write_text(dir / "words.txt", "Cat\ncat\ndog!\n");
  auto lex = load_lexicon(dir / "words.txt");
  CHECK(lex.size() == 2);
  CHECK(lex.contains("cat"));
  CHECK(lex.contains("dog"));
  CHECK_FALSE(lex.contains("Cat"));

  write_text(dir / "blank.txt", "\n\n  \n");
  CHECK_THROWS_AS(load_lexicon(dir / "blank.txt"), ConfigError);
  CHECK_THROWS_AS(load_lexicon(dir / "missing.txt"), IoError);
}

TEST_CASE("shipped 50k word list loads") {
  auto lex = load_lexicon(source_path("data/en_50k.txt"));
  CHECK(lex.size() == 50000);
  CHECK(lex.contains("the"));
  CHECK(lex.with_length(3).size() > 100);
  const auto& six = lex.with_length(6);
  CHECK(std::is_sorted(six.begin(), six.end()));
}

TEST_CASE("confusion table parsing") {
  auto ct = parse_confusions("# comment\nS o c\n\nS h n\nJ rn m\n");
  CHECK(ct.confusable('o', 'c'));
  CHECK(ct.confusable('c', 'o'));
  CHECK(ct.confusable('n', 'h'));
  CHECK_FALSE(ct.confusable('o', 'e'));
  CHECK(ct.split_join('r', 'n', 'm'));
  CHECK_FALSE(ct.split_join('n', 'r', 'm'));

  try {
    parse_confusions("S o c\nX a b\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_confusions("S oo c\n"), ParseError);
  CHECK_THROWS_AS(parse_confusions("J r m\n"), ParseError);
  CHECK_THROWS_AS(load_confusions("/nonexistent/confusions.txt"), IoError);
}

TEST_CASE("shipped confusion file equals the built-in defaults") {
  auto file = load_confusions(source_path("data/default.confusions"));
  auto builtin = ConfusionTable::defaults();
  CHECK(file.substitutions() == builtin.substitutions());
  CHECK(file.split_joins() == builtin.split_joins());
}

TEST_CASE("substitution relation is symmetric but not transitive") {
  ConfusionTable ct;
  ct.add_substitution('a', 'b');
  ct.add_substitution('b', 'c');
  CHECK(ct.confusable('a', 'b'));
  CHECK(ct.confusable('b', 'a'));
  CHECK(ct.confusable('c', 'b'));
  CHECK_FALSE(ct.confusable('a', 'c'));
  CHECK(pseudo_hamming("a", "c", ct) == 1);
}

TEST_CASE("pseudo_hamming examples") {
  const auto ct = ConfusionTable::defaults();
  CHECK(pseudo_hamming("mode", "mere", ct) == 1);
  CHECK(pseudo_hamming("abc", "abc", ct) == 0);
  CHECK(pseudo_hamming("abc", "abd", ConfusionTable{}) == 1);
  CHECK_FALSE(pseudo_hamming("abc", "abcd", ct).has_value());
}

TEST_CASE("pseudo_edit examples") {
  const auto ct = ConfusionTable::defaults();
  CHECK(pseudo_edit("corn", "comb", ct) == 1);
  CHECK(pseudo_edit("corn", "corn", ct) == 0);
  CHECK(pseudo_edit("vvet", "wet", ct) == 0);
  CHECK(pseudo_edit("wet", "vvet", ct) == 0);
  CHECK(pseudo_edit("", "abc", ct) == 3);
  // a generic split costs two: an insertion plus a substitution
  CHECK(pseudo_edit("m", "ab", ConfusionTable{}) == 2);
  CHECK(oracle::pseudo_edit("vvet", "wet", oracle::default_table()) == 0);
}

TEST_CASE("pseudo_edit matches the recursive oracle exhaustively") {
  ConfusionTable custom;
  custom.add_substitution('a', 'b');
  custom.add_split_join("ab", 'c');
  custom.add_split_join("cc", 'a');
  struct Case {
    const char* name;
    std::string alphabet;
    ConfusionTable ct;
  };
  std::vector<Case> cases{{"empty table", "abc", ConfusionTable{}},
                          {"defaults on r/n/m", "rnm", ConfusionTable::defaults()},
                          {"defaults on v/w/o", "vwo", ConfusionTable::defaults()},
                          {"custom", "abc", custom}};
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const auto table = to_oracle(c.ct);
    const auto tokens = oracle::all_strings(c.alphabet, 5);
    long mismatches = 0;
    for (const auto& a : tokens)
      for (const auto& b : tokens)
        if (pseudo_edit(a, b, c.ct) != oracle::pseudo_edit(a, b, table)) ++mismatches;
    CHECK(mismatches == 0);
  }
}

TEST_CASE("distance properties on random token pairs") {
  const auto ct = ConfusionTable::defaults();
  const auto table = oracle::default_table();
  std::mt19937 rng(11);
  const std::string alphabet = "ocehnurmvw";
  auto token = [&](int len) {
    std::string s;
    for (int k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
    return s;
  };
  for (int trial = 0; trial < 3000; ++trial) {
    const auto a = token(static_cast<int>(rng() % 7));
    const auto b = token(static_cast<int>(rng() % 7));
    CAPTURE(a);
    CAPTURE(b);
    const int pe = pseudo_edit(a, b, ct);
    CHECK(pe == pseudo_edit(b, a, ct));
    CHECK(pe <= oracle::levenshtein(a, b));
    CHECK(pseudo_edit(a, b, ConfusionTable{}) == oracle::levenshtein(a, b));
    if (a.size() == b.size()) {
      const int ph = *pseudo_hamming(a, b, ct);
      const int h = *oracle::pseudo_hamming(a, b, oracle::Table{});
      CHECK(ph <= h);
      CHECK(*pseudo_hamming(a, b, ConfusionTable{}) == h);
      CHECK(ph == *oracle::pseudo_hamming(a, b, table));
    }
  }
}

TEST_CASE("neighbors_within examples") {
  const auto lex = Lexicon::from_words(std::vector<std::string>{"cat", "cot", "dog"});
  CHECK(neighbors_within(lex, "cat", 1, ConfusionTable{}) == std::vector<std::string>{"cot"});
  const auto single = Lexicon::from_words(std::vector<std::string>{"cat"});
  CHECK(neighbors_within(single, "cat", 1, ConfusionTable{}).empty());
  const auto lex2 = Lexicon::from_words(std::vector<std::string>{"mode", "mere", "made"});
  auto n = neighbors_within(lex2, "mode", 1, ConfusionTable::defaults());
  CHECK(std::find(n.begin(), n.end(), "mere") != n.end());
  CHECK(std::is_sorted(n.begin(), n.end()));
}

TEST_CASE("growth_rate is the median of consecutive ratios") {
  CHECK(growth_rate({0, 0, 10, 30, 90}, 2) == doctest::Approx(3.0));
  CHECK(growth_rate({0, 0, 10, 20, 80, 160}, 2) == doctest::Approx(2.0));
  CHECK_FALSE(growth_rate({0, 0, 0, 5}, 2).has_value());
  CHECK_FALSE(growth_rate({0, 0, 4}, 2).has_value());
  // ratios starting at index 1 for edit counts
  CHECK(growth_rate({0, 2, 6}, 1) == doctest::Approx(3.0));
}

TEST_CASE("dictionary_stats on a three-word lexicon matches brute force") {
  const auto lex = Lexicon::from_words(std::vector<std::string>{"cat", "cot", "dog"});
  for (const auto& ct : {ConfusionTable{}, ConfusionTable::defaults()}) {
    const auto table = to_oracle(ct);
    const auto s = dictionary_stats(lex, "dog", ct, 2);
    std::vector<long> expected(3, 0);
    for (const auto& x : lex.words()) {
      if (x == "dog") continue;
      const int d = *oracle::pseudo_hamming("dog", x, table);
      if (d <= 2) ++expected[static_cast<std::size_t>(d)];
    }
    CHECK(s.d == expected);
    CHECK(s.d_at(1) == 0);
    CHECK(s.d_at(2) == 1);  // "cot"; "cat" sits at distance 3
    CHECK_FALSE(s.r_d.has_value());
  }
  CHECK_THROWS_AS(dictionary_stats(lex, "dog", ConfusionTable{}, 1), UsageError);
}

TEST_CASE("dictionary_stats counts match brute force on a random lexicon") {
  std::mt19937 rng(5);
  const std::string alphabet = "aocenrm";
  std::vector<std::string> words;
  for (int k = 0; k < 300; ++k) {
    std::string s;
    const int len = 2 + static_cast<int>(rng() % 4);
    for (int c = 0; c < len; ++c) s += alphabet[rng() % alphabet.size()];
    words.push_back(s);
  }
  const auto lex = Lexicon::from_words(words);
  const auto ct = ConfusionTable::defaults();
  const auto table = oracle::default_table();
  for (int k = 0; k < 20; ++k) {
    const std::string w = words[static_cast<std::size_t>(k)];
    const auto s = dictionary_stats(lex, w, ct, 3);
    std::vector<long> d(4, 0), e(4, 0);
    for (const auto& x : lex.words()) {
      if (x.size() == w.size()) {
        if (x == w) continue;
        const int dist = *oracle::pseudo_hamming(w, x, table);
        if (dist <= 3) ++d[static_cast<std::size_t>(dist)];
      } else {
        const int dist = oracle::pseudo_edit(w, x, table);
        if (dist <= 3) ++e[static_cast<std::size_t>(dist)];
      }
    }
    CAPTURE(w);
    CHECK(s.d == d);
    CHECK(s.e == e);
    // empty radius-1 ball iff no word at distance 0 or 1
    CHECK(neighbors_within(lex, w, 1, ct).empty() == (s.d_at(0) == 0 && s.d_at(1) == 0));
  }
}
