#include "cleanwords/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

#include "cleanwords/error.hpp"
#include "cleanwords/lexicon.hpp"

namespace cleanwords {

namespace {

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double pair_cost(const std::string& a, const std::string& b) {
  const auto longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string pct_string(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
  return buf;
}

}  // namespace

std::string scoring_token(const std::string& text) {
  if (auto t = normalize_token(text)) return *t;
  std::string out = text;
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::pair<int, int>> align_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<double> cost((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> double& { return cost[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<double>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<double>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + pair_cost(a[i - 1], b[j - 1]), at(i - 1, j) + 1.0, at(i, j - 1) + 1.0});

  // Costs are sums of small rationals; compare with a tolerance so ties are real ties.
  auto same = [](double x, double y) { return std::abs(x - y) < 1e-9; };
  std::vector<std::pair<int, int>> pairs;
  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    if (same(at(i, j), at(i - 1, j - 1) + pair_cost(a[i - 1], b[j - 1]))) {
      pairs.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
      --i;
      --j;
    } else if (same(at(i, j), at(i - 1, j) + 1.0)) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<AlignedLabel> align_to_truth(const std::vector<OcrWord>& words, const std::vector<std::string>& truth) {
  std::vector<std::string> ocr;
  ocr.reserve(words.size());
  for (const auto& w : words) ocr.push_back(scoring_token(w.text));
  std::vector<AlignedLabel> labels(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) labels[i].word_id = words[i].word_id;
  for (auto [i, j] : align_tokens(ocr, truth)) {
    auto& l = labels[static_cast<std::size_t>(i)];
    l.truth_token = truth[static_cast<std::size_t>(j)];
    l.correct = ocr[static_cast<std::size_t>(i)] == truth[static_cast<std::size_t>(j)];
  }
  return labels;
}

ListMetrics clean_list_metrics(const CleanList& clean, const std::vector<AlignedLabel>& labels) {
  std::map<int, bool> correct;
  for (const auto& l : labels) correct[l.word_id] = l.correct;
  ListMetrics m;
  m.count = static_cast<long>(clean.entries.size());
  m.empty = clean.entries.empty();
  long good = 0;
  for (const auto& e : clean.entries) {
    auto it = correct.find(e.word_id);
    if (it == correct.end()) throw UsageError("no truth label for word " + std::to_string(e.word_id));
    if (it->second) ++good;
  }
  m.errors = m.count - good;
  m.precision = m.empty ? 1.0 : static_cast<double>(good) / static_cast<double>(m.count);
  m.recall = labels.empty() ? 0.0 : static_cast<double>(m.count) / static_cast<double>(labels.size());
  return m;
}

std::vector<PrPoint> confidence_pr_curve(const std::vector<OcrWord>& words, const std::vector<AlignedLabel>& labels) {
  if (words.size() != labels.size()) throw UsageError("labels must parallel words");
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) scored.emplace_back(words[i].confidence, labels[i].correct);
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

  std::vector<PrPoint> curve;
  const double total = static_cast<double>(words.size());
  long kept = 0, good = 0;
  for (std::size_t i = 0; i < scored.size();) {
    const double t = scored[i].first;
    while (i < scored.size() && scored[i].first == t) {
      ++kept;
      if (scored[i].second) ++good;
      ++i;
    }
    curve.push_back({t, static_cast<double>(good) / static_cast<double>(kept), static_cast<double>(good) / total, kept});
  }
  return curve;
}

std::string format_pr_csv(const std::vector<PrPoint>& curve) {
  std::string out = "threshold,precision,recall,kept\n";
  for (const auto& p : curve)
    out += fmt(p.threshold) + "," + fmt(p.precision) + "," + fmt(p.recall) + "," + std::to_string(p.kept) + "\n";
  return out;
}

std::string format_pr_svg(const std::vector<PrPoint>& curve, const std::vector<std::pair<double, double>>& marks) {
  constexpr double kSize = 400, kPad = 40;
  auto px = [&](double recall) { return kPad + recall * (kSize - 2 * kPad); };
  auto py = [&](double precision) { return kSize - kPad - precision * (kSize - 2 * kPad); };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize << "\">\n";
  out << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kSize - 2 * kPad << "\" height=\""
      << kSize - 2 * kPad << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<text x=\"" << kSize / 2 << "\" y=\"" << kSize - 8 << "\" text-anchor=\"middle\">recall</text>\n";
  out << "<text x=\"12\" y=\"" << kSize / 2 << "\" transform=\"rotate(-90 12 " << kSize / 2
      << ")\" text-anchor=\"middle\">precision</text>\n";
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
  for (const auto& p : curve) out << fmt(px(p.recall)) << ',' << fmt(py(p.precision)) << ' ';
  out << "\"/>\n";
  for (const auto& [recall, precision] : marks) {
    const double x = px(recall), y = py(precision);
    out << "<path d=\"M" << fmt(x - 5) << ' ' << fmt(y - 5) << " L" << fmt(x + 5) << ' ' << fmt(y + 5) << " M"
        << fmt(x - 5) << ' ' << fmt(y + 5) << " L" << fmt(x + 5) << ' ' << fmt(y - 5)
        << "\" stroke=\"red\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

DocumentReport document_report(const std::string& name, const std::vector<OcrWord>& words,
                               const std::vector<AlignedLabel>& labels, const CleanList& conservative,
                               const CleanList& aggressive) {
  DocumentReport r;
  r.name = name;
  r.word_count = static_cast<long>(words.size());
  r.correct_words = std::count_if(labels.begin(), labels.end(), [](const AlignedLabel& l) { return l.correct; });
  r.accuracy = r.word_count ? static_cast<double>(r.correct_words) / static_cast<double>(r.word_count) : 0.0;
  auto summarize = [&](const CleanList& list) {
    const auto m = clean_list_metrics(list, labels);
    return ListSummary{m.count, r.word_count ? static_cast<double>(m.count) / static_cast<double>(r.word_count) : 0.0,
                       m.errors};
  };
  r.conservative = summarize(conservative);
  r.aggressive = summarize(aggressive);
  return r;
}

DocumentReport report_totals(const std::vector<DocumentReport>& reports, const std::string& name) {
  DocumentReport t;
  t.name = name;
  for (const auto& r : reports) {
    t.word_count += r.word_count;
    t.correct_words += r.correct_words;
    t.conservative.count += r.conservative.count;
    t.conservative.errors += r.conservative.errors;
    t.aggressive.count += r.aggressive.count;
    t.aggressive.errors += r.aggressive.errors;
  }
  if (t.word_count > 0) {
    const double n = static_cast<double>(t.word_count);
    t.accuracy = static_cast<double>(t.correct_words) / n;
    t.conservative.pct = static_cast<double>(t.conservative.count) / n;
    t.aggressive.pct = static_cast<double>(t.aggressive.count) / n;
  }
  return t;
}

namespace {

nlohmann::ordered_json to_json(const DocumentReport& r) {
  auto list = [](const ListSummary& s) {
    return nlohmann::ordered_json{{"count", s.count}, {"pct", s.pct}, {"errors", s.errors}};
  };
  return nlohmann::ordered_json{{"name", r.name},
                                {"word_count", r.word_count},
                                {"accuracy", r.accuracy},
                                {"conservative", list(r.conservative)},
                                {"aggressive", list(r.aggressive)}};
}

}  // namespace

std::string report_json(const DocumentReport& r) { return to_json(r).dump(2) + "\n"; }

std::string reports_json(const std::vector<DocumentReport>& reports) {
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const auto& r : reports) docs.push_back(to_json(r));
  nlohmann::ordered_json j{{"documents", docs}, {"totals", to_json(report_totals(reports))}};
  return j.dump(2) + "\n";
}

std::string format_report_table(const std::vector<DocumentReport>& reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %8s %9s | %6s %6s %6s | %6s %6s %6s\n", "Document", "Words", "Accuracy",
                "Cons.", "%", "Errors", "Aggr.", "%", "Errors");
  out << line;
  auto row = [&](const DocumentReport& r) {
    std::snprintf(line, sizeof line, "%-16s %8ld %9s | %6ld %6s %6ld | %6ld %6s %6ld\n", r.name.c_str(), r.word_count,
                  pct_string(r.accuracy).c_str(), r.conservative.count, pct_string(r.conservative.pct).c_str(),
                  r.conservative.errors, r.aggressive.count, pct_string(r.aggressive.pct).c_str(), r.aggressive.errors);
    out << line;
  };
  for (const auto& r : reports) row(r);
  if (reports.size() > 1) row(report_totals(reports));
  return out.str();
}

}  // namespace cleanwords
