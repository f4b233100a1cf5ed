#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cleanwords/atomic_file.hpp"
#include "cleanwords/bound.hpp"
#include "cleanwords/corrector.hpp"
#include "cleanwords/error.hpp"
#include "cleanwords/eval.hpp"
#include "cleanwords/image.hpp"
#include "cleanwords/lexicon.hpp"
#include "cleanwords/ocr.hpp"
#include "cleanwords/parallel.hpp"
#include "cleanwords/pipeline.hpp"
#include "cleanwords/similarity.hpp"
#include "cleanwords/synth.hpp"

namespace cleanwords::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum class Level { Error = 0, Info = 1, Debug = 2 };

class Log {
 public:
  Log(std::ostream& err, Level level) : err_(err), level_(level) {}
  void info(const std::string& msg) const { emit(Level::Info, "info", msg); }
  void debug(const std::string& msg) const { emit(Level::Debug, "debug", msg); }
  void error(const std::string& msg) const { emit(Level::Error, "error", msg); }

 private:
  void emit(Level l, const char* tag, const std::string& msg) const {
    if (l <= level_) err_ << "cleanwords: " << tag << ": " << msg << "\n";
  }
  std::ostream& err_;
  Level level_;
};

// Options every subcommand shares.
struct Common {
  std::string config;
  unsigned threads = 0;
  std::string out_dir = ".";
  std::string log_level = "info";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key=value file with option defaults; flags win")->check(CLI::ExistingFile);
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  sub->add_option("--out-dir", c.out_dir, "Directory for outputs")->capture_default_str();
  sub->add_option("--log-level", c.log_level, "error, info or debug")
      ->check(CLI::IsMember({"error", "info", "debug"}))
      ->capture_default_str();
}

// Config file: `key = value` per line, keys are long option names, `#` starts
// a comment. Returns the pairs in file order.
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(read_file(path));
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty() || key == "config")
      throw ConfigError(path + ":" + std::to_string(line_no) + ": invalid key '" + key + "'");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

Level parse_level(const std::string& s) {
  if (s == "error") return Level::Error;
  if (s == "debug") return Level::Debug;
  return Level::Info;
}

// Collects inputs and outputs of one run and writes everything atomically,
// followed by a manifest describing how to reproduce it.
class Run {
 public:
  Run(std::string command, const Common& common) : command_(std::move(command)), dir_(common.out_dir) {}

  void input(const std::string& role, const std::string& path) {
    inputs_.push_back({{"role", role}, {"path", path}, {"fnv1a", fnv1a_hex(read_file(path))}});
  }

  void output(const std::string& name, const std::string& contents) {
    fs::create_directories(dir_);
    write_file_atomic(dir_ / name, contents);
    outputs_.push_back({{"path", name}, {"fnv1a", fnv1a_hex(contents)}});
  }

  void finish(const json& config, std::optional<std::uint64_t> seed) {
    json m;
    m["command"] = command_;
    m["version"] = kVersion;
    m["config"] = config;
    m["config_hash"] = fnv1a_hex(config.dump());
    if (seed) m["seed"] = *seed;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    fs::create_directories(dir_);
    write_file_atomic(dir_ / (command_ + ".manifest.json"), m.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path dir_;
  json inputs_ = json::array();
  json outputs_ = json::array();
};

json confusions_json(const ConfusionTable& ct) {
  json subs = json::array(), joins = json::array();
  for (const auto& [a, b] : ct.substitutions()) subs.push_back(std::string{a, b});
  for (const auto& [pair, c] : ct.split_joins()) joins.push_back(pair + ">" + c);
  return {{"substitutions", subs}, {"split_joins", joins}};
}

json pipeline_json(const PipelineConfig& cfg) {
  return {{"max_neighbors", cfg.consistency.max_neighbors},
          {"theta", cfg.consistency.theta},
          {"min_word_length", cfg.min_word_length},
          {"confusions", confusions_json(cfg.confusions)}};
}

std::string default_config_hash() { return fnv1a_hex(pipeline_json(PipelineConfig{}).dump()); }

ConfusionTable confusions_from(const std::string& path, Run* run) {
  if (path.empty()) return ConfusionTable::defaults();
  if (run) run->input("confusions", path);
  return load_confusions(path);
}

std::vector<std::string> read_truth(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(scoring_token(t));
  return tokens;
}

json stats_to_json(const LexiconStats& s) {
  json d = json::object(), e = json::object();
  for (std::size_t i = 0; i < s.d.size(); ++i) d[std::to_string(i)] = s.d[i];
  for (std::size_t i = 0; i < s.e.size(); ++i) e[std::to_string(i)] = s.e[i];
  json j{{"word", s.word}, {"D", d}, {"E", e}};
  j["r_D"] = s.r_d ? json(*s.r_d) : json(nullptr);
  j["r_E"] = s.r_e ? json(*s.r_e) : json(nullptr);
  return j;
}

json breakdown_json(const BoundBreakdown& b) {
  return {{"hamming_term", b.hamming_term}, {"edit_term", b.edit_term}, {"nondict_term", b.nondict_term},
          {"total", b.total},               {"regime_ok", b.regime_ok}, {"violations", b.violations}};
}

std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- clean -----------------------------------------------------------------

struct CleanOpts {
  Common common;
  std::string image, ocr, lexicon, confusions, mode = "conservative";
  int max_neighbors = 20;
  double theta = 0.66;
  int min_length = 1;
};

void run_clean(const CleanOpts& o, const Log& log) {
  Run run("clean", o.common);
  run.input("image", o.image);
  run.input("ocr", o.ocr);
  run.input("lexicon", o.lexicon);
  PipelineConfig cfg;
  cfg.confusions = confusions_from(o.confusions, &run);
  cfg.consistency.max_neighbors = o.max_neighbors;
  cfg.consistency.theta = o.theta;
  cfg.min_word_length = o.min_length;
  cfg.threads = resolve_threads(o.common.threads);
  std::vector<ListMode> modes;
  if (o.mode == "both") {
    modes = {ListMode::Conservative, ListMode::Aggressive};
  } else {
    modes = {parse_list_mode(o.mode)};
  }
  cfg.validate();

  const auto lex = load_lexicon(o.lexicon);
  const auto img = load_image(o.image);
  const auto doc = load_ocr_tsv(o.ocr);
  for (const auto& w : doc.warnings) log.info(w);
  const auto glyphs = extract_glyphs(img, doc.words);
  for (const auto& e : glyphs.errors) log.info(e);
  const GlyphPool pool(glyphs.glyphs, kDefaultPatchSide, cfg.threads);
  const DocumentEvidence evidence(doc.words, glyphs, pool, cfg.consistency);
  log.debug(std::to_string(doc.words.size()) + " words, " + std::to_string(glyphs.glyphs.size()) + " glyphs");
  for (ListMode m : modes) {
    cfg.mode = m;
    const auto list = build_clean_list(doc.words, evidence, lex, cfg);
    const std::string tag = to_string(m);
    run.output("clean_" + tag + ".tsv", format_clean_tsv(list));
    run.output("stats_" + tag + ".json", stats_json(list));
    log.info(tag + ": " + std::to_string(list.entries.size()) + " of " + std::to_string(doc.words.size()) + " words");
  }
  json config = pipeline_json(cfg);
  config["mode"] = o.mode;
  run.finish(config, std::nullopt);
}

// ---- stats -----------------------------------------------------------------

struct StatsOpts {
  Common common;
  std::string lexicon, confusions;
  std::vector<std::string> words;
  int sample = 0;
  int length = 6;
  std::uint64_t seed = 1;
  int max_i = 6;
};

void run_stats(const StatsOpts& o, const Log& log) {
  Run run("stats", o.common);
  run.input("lexicon", o.lexicon);
  const auto ct = confusions_from(o.confusions, &run);
  if (o.max_i < 2) throw UsageError("--max-i must be at least 2");
  const auto lex = load_lexicon(o.lexicon);
  std::vector<std::string> targets;
  for (const auto& w : o.words) {
    auto t = normalize_token(w);
    if (!t) throw UsageError("--word '" + w + "' is not an alphabetic token");
    targets.push_back(*t);
  }
  if (o.sample > 0) {
    auto pool = lex.with_length(static_cast<std::size_t>(o.length));
    if (pool.empty()) throw UsageError("lexicon has no words of length " + std::to_string(o.length));
    std::mt19937_64 rng(o.seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(pool.size(), static_cast<std::size_t>(o.sample)));
    targets.insert(targets.end(), pool.begin(), pool.end());
  }
  if (targets.empty()) throw UsageError("give --word or --sample");

  std::vector<LexiconStats> stats(targets.size());
  parallel_for(targets.size(), resolve_threads(o.common.threads),
               [&](std::size_t i) { stats[i] = dictionary_stats(lex, targets[i], ct, o.max_i); });
  json words = json::array();
  std::vector<double> rd, re;
  long max_d2 = 0, max_e1 = 0;
  for (const auto& s : stats) {
    words.push_back(stats_to_json(s));
    if (s.r_d) rd.push_back(*s.r_d);
    if (s.r_e) re.push_back(*s.r_e);
    max_d2 = std::max(max_d2, s.d_at(2));
    max_e1 = std::max(max_e1, s.e_at(1));
  }
  json summary{{"words", stats.size()}, {"with_r_D", rd.size()}, {"with_r_E", re.size()}};
  const auto mrd = median(rd), mre = median(re);
  summary["median_r_D"] = mrd ? json(*mrd) : json(nullptr);
  summary["median_r_E"] = mre ? json(*mre) : json(nullptr);
  summary["max_D2"] = max_d2;
  summary["max_E1"] = max_e1;
  run.output("lexicon_stats.json", json{{"words", words}, {"summary", summary}}.dump(2) + "\n");
  if (mrd) log.info("median r_D " + std::to_string(*mrd) + " over " + std::to_string(rd.size()) + " words");
  json config{{"words", o.words}, {"sample", o.sample}, {"length", o.length}, {"max_i", o.max_i},
              {"confusions", confusions_json(ct)}};
  run.finish(config, o.sample > 0 ? std::optional<std::uint64_t>(o.seed) : std::nullopt);
}

// ---- bound -----------------------------------------------------------------

struct BoundOpts {
  Common common;
  std::string params, lexicon, confusions, clean;
  std::vector<std::string> words;
};

BoundParams bound_params_from(const json& j) {
  auto num = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw UsageError(std::string("bound parameter '") + key + "' must be a number");
    return j[key].get<double>();
  };
  auto count = [&](const char* key) {
    const double v = num(key, 0.0);
    if (v != static_cast<double>(static_cast<long>(v))) throw UsageError(std::string(key) + " must be an integer");
    return static_cast<long>(v);
  };
  BoundParams p;
  if (!j.contains("epsilon")) throw UsageError("bound parameters need 'epsilon'");
  p.epsilon = num("epsilon", 0.0);
  p.delta = num("delta", 1.0);
  p.d2 = count("D2");
  p.e1 = count("E1");
  p.p1 = num("p1", 0.0);
  p.r_d = num("r_D", 1.0);
  p.r_e = num("r_E", 1.0);
  p.r_n = num("r_N", 1.0);
  p.validate();
  return p;
}

void run_bound(const BoundOpts& o, const Log& log) {
  Run run("bound", o.common);
  run.input("params", o.params);
  json in;
  try {
    in = json::parse(read_file(o.params));
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("bound parameters are not valid JSON: ") + e.what());
  }
  if (!in.is_object()) throw UsageError("bound parameters must be a JSON object");
  const BoundParams base = bound_params_from(in);
  json out;
  out["params"] = {{"epsilon", base.epsilon}, {"delta", base.delta}, {"D2", base.d2}, {"E1", base.e1},
                   {"p1", base.p1},           {"r_D", base.r_d},     {"r_E", base.r_e}, {"r_N", base.r_n}};
  out["breakdown"] = breakdown_json(evaluate_bound(base));
  if (in.contains("aggregate")) {
    const auto& a = in["aggregate"];
    out["aggregate_total"] = evaluate_bound_aggregate(base.epsilon, a.value("hamming_edit_coeff", 0.0),
                                                      a.value("nondict_coeff", 0.0), a.value("delta_sq", 1.0));
  }

  std::vector<std::string> targets;
  for (const auto& w : o.words) {
    auto t = normalize_token(w);
    if (!t) throw UsageError("--word '" + w + "' is not an alphabetic token");
    targets.push_back(*t);
  }
  if (!o.clean.empty()) {
    run.input("clean", o.clean);
    for (const auto& e : load_clean_tsv(o.clean).entries) {
      if (auto t = normalize_token(e.text)) targets.push_back(*t);
    }
  }
  json config{{"words", o.words}, {"clean", !o.clean.empty()}};
  if (!targets.empty()) {
    if (o.lexicon.empty()) throw UsageError("--lexicon is needed for per-word bounds");
    run.input("lexicon", o.lexicon);
    const auto ct = confusions_from(o.confusions, &run);
    config["confusions"] = confusions_json(ct);
    const auto lex = load_lexicon(o.lexicon);
    std::vector<LexiconStats> stats(targets.size());
    parallel_for(targets.size(), resolve_threads(o.common.threads),
                 [&](std::size_t i) { stats[i] = dictionary_stats(lex, targets[i], ct, 2); });
    json per_word = json::array();
    BoundParams worst = base;
    worst.d2 = worst.e1 = 0;
    for (const auto& s : stats) {
      BoundParams p = base;
      p.d2 = s.d_at(2);
      p.e1 = s.e_at(1);
      worst.d2 = std::max(worst.d2, p.d2);
      worst.e1 = std::max(worst.e1, p.e1);
      per_word.push_back({{"word", s.word}, {"D2", p.d2}, {"E1", p.e1}, {"breakdown", breakdown_json(evaluate_bound(p))}});
    }
    out["words"] = per_word;
    out["document_max"] = {{"D2", worst.d2}, {"E1", worst.e1}, {"breakdown", breakdown_json(evaluate_bound(worst))}};
  }
  run.output("bound.json", out.dump(2) + "\n");
  log.info("total " + std::to_string(out["breakdown"]["total"].get<double>()));
  config["params"] = in;
  run.finish(config, std::nullopt);
}

// ---- eval ------------------------------------------------------------------

struct EvalOpts {
  Common common;
  std::string ocr, truth, conservative, aggressive, name;
  bool svg = false;
};

void run_eval(const EvalOpts& o, const Log& log) {
  Run run("eval", o.common);
  run.input("ocr", o.ocr);
  run.input("truth", o.truth);
  const auto doc = load_ocr_tsv(o.ocr);
  const auto truth = read_truth(o.truth);
  const auto labels = align_to_truth(doc.words, truth);
  auto list_or_empty = [&](const std::string& path, const char* role, ListMode mode) {
    if (path.empty()) {
      CleanList empty;
      empty.mode = mode;
      return empty;
    }
    run.input(role, path);
    return load_clean_tsv(path);
  };
  const auto cons = list_or_empty(o.conservative, "conservative", ListMode::Conservative);
  const auto aggr = list_or_empty(o.aggressive, "aggressive", ListMode::Aggressive);
  const std::string name = o.name.empty() ? fs::path(o.ocr).stem().string() : o.name;
  const auto report = document_report(name, doc.words, labels, cons, aggr);
  const auto curve = confidence_pr_curve(doc.words, labels);
  run.output("report.json", report_json(report));
  run.output("report.txt", format_report_table({report}));
  run.output("pr.csv", format_pr_csv(curve));
  if (o.svg) {
    std::vector<std::pair<double, double>> marks;
    for (const auto* list : {&cons, &aggr}) {
      const auto m = clean_list_metrics(*list, labels);
      if (!m.empty) marks.emplace_back(m.recall, m.precision);
    }
    run.output("pr.svg", format_pr_svg(curve, marks));
  }
  log.info("accuracy " + std::to_string(report.accuracy));
  run.finish(json{{"name", name}, {"svg", o.svg}}, std::nullopt);
}

// ---- synth -----------------------------------------------------------------

struct SynthOpts {
  Common common;
  std::string lexicon, confusions;
  std::uint64_t seed = 1;
  std::uint64_t font_seed = 1;
  int words = 500;
  std::size_t vocabulary = 2000;
  double zipf = 1.0;
  double sigma = 0.0;
  double saltpepper = 0.0;
  int jitter = 0;
  bool project = false;
  std::vector<std::string> swap_pairs;
  double swap_rate = 0.0;
  int plant = 0;
  bool estimate = false;
  int trials = 1000;
  int pool_per_class = 10;
};

void run_synth(const SynthOpts& o, const Log& log) {
  Run run("synth", o.common);
  run.input("lexicon", o.lexicon);
  const auto ct = confusions_from(o.confusions, &run);
  NoiseParams noise;
  noise.gaussian_sigma = o.sigma;
  noise.saltpepper_rate = o.saltpepper;
  noise.jitter = o.jitter;
  noise.project_to_dictionary = o.project;
  noise.swap_rate = o.swap_rate;
  for (const auto& p : o.swap_pairs) {
    if (p.size() != 2 || p[0] == p[1]) throw UsageError("--swap-pair takes two different letters, e.g. oc");
    noise.swap_pairs.emplace_back(p[0], p[1]);
  }
  noise.validate();
  if (o.words < 1) throw UsageError("--words must be positive");

  // The ranked list keeps file order; only alphabetic tokens the font can draw.
  std::vector<std::string> ranked;
  {
    std::istringstream in(read_file(o.lexicon));
    for (std::string line; std::getline(in, line);) {
      if (auto t = normalize_token(line)) ranked.push_back(*t);
    }
  }
  const auto lex = Lexicon::from_words(ranked);
  if (lex.empty()) throw ConfigError("lexicon " + o.lexicon + " has no usable words");
  const auto font = SynthFont::generate(o.font_seed);
  auto text = sample_text(ranked, o.words, o.vocabulary, o.zipf, o.seed);
  const auto planted = plant_nondictionary(text, lex, ct, o.plant, o.seed);
  const auto page = render_document(text, font, noise, o.seed);
  const auto words = simulate_ocr(page, font, noise, lex, ct, o.seed);

  std::string truth;
  for (const auto& t : text) truth += t + "\n";
  run.output("page.pgm", encode_pgm(page.image));
  run.output("page.tsv", format_ocr_tsv(words));
  run.output("truth.txt", truth);
  json planted_json = json::array();
  for (auto i : planted) planted_json.push_back(i);

  json config{{"font_seed", o.font_seed},   {"words", o.words},      {"vocabulary", o.vocabulary},
              {"zipf", o.zipf},             {"sigma", o.sigma},      {"saltpepper", o.saltpepper},
              {"jitter", o.jitter},         {"project", o.project},  {"swap_pairs", o.swap_pairs},
              {"swap_rate", o.swap_rate},   {"plant", o.plant},      {"confusions", confusions_json(ct)}};
  if (o.estimate) {
    const auto rates = estimate_noise_rates(font, noise, o.trials, o.seed, ct, ConsistencyParams{},
                                            o.pool_per_class, resolve_threads(o.common.threads));
    json r{{"epsilon_hat", rates.epsilon_hat}, {"epsilon_hits", rates.epsilon_hits}, {"worst_pair", rates.worst_pair},
           {"delta_hat", rates.delta_hat},     {"delta_passes", rates.delta_passes}, {"worst_class", rates.worst_class},
           {"trials", rates.trials},           {"pool_per_class", rates.pool_per_class}};
    run.output("rates.json", r.dump(2) + "\n");
    log.info("epsilon_hat " + std::to_string(rates.epsilon_hat) + ", delta_hat " + std::to_string(rates.delta_hat));
    config["trials"] = o.trials;
    config["pool_per_class"] = o.pool_per_class;
  }
  json extra{{"planted", planted_json}};
  run.output("planted.json", extra.dump(2) + "\n");
  log.info("rendered " + std::to_string(text.size()) + " words");
  run.finish(config, o.seed);
}

// ---- correct ---------------------------------------------------------------

struct CorrectOpts {
  Common common;
  std::string image, ocr, clean;
  std::vector<std::string> pair;
  TrainParams train;
};

void run_correct(const CorrectOpts& o, const Log& log) {
  Run run("correct", o.common);
  run.input("image", o.image);
  run.input("ocr", o.ocr);
  run.input("clean", o.clean);
  if (o.pair.size() != 2 || o.pair[0] == o.pair[1]) throw UsageError("--pair takes two different labels");
  const auto img = load_image(o.image);
  const auto doc = load_ocr_tsv(o.ocr);
  const auto clean = load_clean_tsv(o.clean);
  const auto glyphs = extract_glyphs(img, doc.words);
  const auto result = correct_pair(doc.words, glyphs, clean, o.pair[0], o.pair[1], o.train, kDefaultPatchSide,
                                   resolve_threads(o.common.threads));
  if (result.model.degenerate) log.info("classifier is no better than chance; corrections are unreliable");
  run.output("corrections.tsv", format_corrections_tsv(result.changes));
  json summary{{"positive", o.pair[0]},
               {"negative", o.pair[1]},
               {"training_positives", result.positives},
               {"training_negatives", result.negatives},
               {"training_accuracy", result.model.training_accuracy},
               {"degenerate", result.model.degenerate},
               {"candidates", result.candidates},
               {"changes", result.changes.size()}};
  run.output("corrector.json", summary.dump(2) + "\n");
  log.info(std::to_string(result.changes.size()) + " glyphs relabelled");
  run.finish(json{{"pair", o.pair}, {"epochs", o.train.epochs}, {"lambda", o.train.lambda}}, o.train.seed);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extracts near-certain word lists from OCR output", "cleanwords"};
  app.require_subcommand(1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print version and default configuration hash");

  CleanOpts clean;
  auto* c = app.add_subcommand("clean", "Build clean word lists for one page");
  add_common(c, clean.common);
  c->add_option("--image", clean.image, "Page image (PGM or PNG)")->required()->check(CLI::ExistingFile);
  c->add_option("--ocr", clean.ocr, "OCR interchange TSV")->required()->check(CLI::ExistingFile);
  c->add_option("--lexicon", clean.lexicon, "Word list, one per line")->required()->check(CLI::ExistingFile);
  c->add_option("--confusions", clean.confusions, "Confusion table file")->check(CLI::ExistingFile);
  c->add_option("--mode", clean.mode, "conservative, aggressive or both")
      ->check(CLI::IsMember({"conservative", "aggressive", "both"}))
      ->capture_default_str();
  c->add_option("--max-neighbors", clean.max_neighbors, "Neighbors examined per glyph")->capture_default_str();
  c->add_option("--theta", clean.theta, "Domination threshold")->capture_default_str();
  c->add_option("--min-length", clean.min_length, "Shortest word considered")->capture_default_str();

  StatsOpts stats;
  auto* s = app.add_subcommand("stats", "Dictionary neighborhood counts and growth rates");
  add_common(s, stats.common);
  s->add_option("--lexicon", stats.lexicon, "Word list")->required()->check(CLI::ExistingFile);
  s->add_option("--confusions", stats.confusions, "Confusion table file")->check(CLI::ExistingFile);
  s->add_option("--word", stats.words, "Word to analyse (repeatable)");
  s->add_option("--sample", stats.sample, "Number of lexicon words to sample");
  s->add_option("--length", stats.length, "Length of sampled words")->capture_default_str();
  s->add_option("--seed", stats.seed, "Sampling seed")->capture_default_str();
  s->add_option("--max-i", stats.max_i, "Largest distance counted")->capture_default_str();

  BoundOpts bound;
  auto* b = app.add_subcommand("bound", "Evaluate the worst-case error bound");
  add_common(b, bound.common);
  b->add_option("--params", bound.params, "JSON parameter object")->required()->check(CLI::ExistingFile);
  b->add_option("--lexicon", bound.lexicon, "Word list for per-word D2/E1")->check(CLI::ExistingFile);
  b->add_option("--confusions", bound.confusions, "Confusion table file")->check(CLI::ExistingFile);
  b->add_option("--clean", bound.clean, "Clean list TSV whose words get per-word bounds")->check(CLI::ExistingFile);
  b->add_option("--word", bound.words, "Word for a per-word bound (repeatable)");

  EvalOpts eval;
  auto* e = app.add_subcommand("eval", "Score OCR output and clean lists against ground truth");
  add_common(e, eval.common);
  e->add_option("--ocr", eval.ocr, "OCR interchange TSV")->required()->check(CLI::ExistingFile);
  e->add_option("--truth", eval.truth, "Ground-truth tokens, whitespace separated")->required()->check(CLI::ExistingFile);
  e->add_option("--conservative", eval.conservative, "Conservative clean list TSV")->check(CLI::ExistingFile);
  e->add_option("--aggressive", eval.aggressive, "Aggressive clean list TSV")->check(CLI::ExistingFile);
  e->add_option("--name", eval.name, "Document name in the report");
  e->add_flag("--svg", eval.svg, "Also write pr.svg");

  SynthOpts synth;
  auto* y = app.add_subcommand("synth", "Render a synthetic page and simulate OCR on it");
  add_common(y, synth.common);
  y->add_option("--lexicon", synth.lexicon, "Frequency-ranked word list")->required()->check(CLI::ExistingFile);
  y->add_option("--confusions", synth.confusions, "Confusion table file")->check(CLI::ExistingFile);
  y->add_option("--seed", synth.seed, "Document seed")->capture_default_str();
  y->add_option("--font-seed", synth.font_seed, "Font seed")->capture_default_str();
  y->add_option("--words", synth.words, "Words on the page")->capture_default_str();
  y->add_option("--vocabulary", synth.vocabulary, "Sample from this many top-ranked words")->capture_default_str();
  y->add_option("--zipf", synth.zipf, "Zipf exponent")->capture_default_str();
  y->add_option("--sigma", synth.sigma, "Gaussian noise std (intensity units)")->capture_default_str();
  y->add_option("--saltpepper", synth.saltpepper, "Salt-and-pepper rate per pixel")->capture_default_str();
  y->add_option("--jitter", synth.jitter, "Max box offset in pixels")->capture_default_str();
  y->add_flag("--project", synth.project, "Project non-dictionary output onto the nearest lexicon word");
  y->add_option("--swap-pair", synth.swap_pairs, "Label pair the recognizer swaps, e.g. oc (repeatable)");
  y->add_option("--swap-rate", synth.swap_rate, "Probability of a swap")->capture_default_str();
  y->add_option("--plant", synth.plant, "Non-dictionary words to plant")->capture_default_str();
  y->add_flag("--estimate-rates", synth.estimate, "Also estimate epsilon and delta");
  y->add_option("--trials", synth.trials, "Monte Carlo trials")->capture_default_str();
  y->add_option("--pool-per-class", synth.pool_per_class, "Reference glyphs per class")->capture_default_str();

  CorrectOpts correct;
  auto* r = app.add_subcommand("correct", "Relabel a confusable pair with a document-trained classifier");
  add_common(r, correct.common);
  r->add_option("--image", correct.image, "Page image")->required()->check(CLI::ExistingFile);
  r->add_option("--ocr", correct.ocr, "OCR interchange TSV")->required()->check(CLI::ExistingFile);
  r->add_option("--clean", correct.clean, "Conservative clean list TSV")->required()->check(CLI::ExistingFile);
  r->add_option("--pair", correct.pair, "Positive and negative label")->expected(2)->required();
  r->add_option("--epochs", correct.train.epochs, "Training epochs")->capture_default_str();
  r->add_option("--lambda", correct.train.lambda, "L2 regularization")->capture_default_str();
  r->add_option("--seed", correct.train.seed, "Training seed")->capture_default_str();

  // --version alone must work without a subcommand.
  if (std::find(args.begin(), args.end(), "--version") != args.end()) {
    out << "cleanwords " << kVersion << " config " << default_config_hash() << "\n";
    return 0;
  }
  const std::vector<std::pair<CLI::App*, Common*>> subs = {{c, &clean.common}, {s, &stats.common},
                                                             {b, &bound.common}, {e, &eval.common},
                                                             {y, &synth.common}, {r, &correct.common}};
  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    // Config values are injected as flags ahead of the command line, skipping
    // options the command line already set, and the whole line is parsed again.
    for (const auto& [sub, common] : subs) {
      if (!sub->parsed() || common->config.empty()) continue;
      std::vector<std::string> merged;
      for (const auto& [key, value] : parse_config_file(common->config)) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) throw ConfigError(common->config + ": unknown option '" + key + "'");
        if (opt->count() > 0) continue;
        merged.push_back("--" + key + "=" + value);
      }
      std::vector<std::string> full = args;
      const auto pos = std::find(full.begin(), full.end(), sub->get_name());
      full.insert(pos + 1, merged.begin(), merged.end());
      app.clear();
      app.parse(std::vector<std::string>(full.rbegin(), full.rend()));
      break;
    }
  } catch (const ConfigError& ex) {
    err << "cleanwords: " << ex.what() << "\n";
    return 1;
  } catch (const IoError& ex) {
    err << "cleanwords: " << ex.what() << "\n";
    return 1;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "cleanwords: " << ex.what() << "\n";
    if (app.get_subcommands().empty()) err << "run 'cleanwords --help' for usage\n";
    return 1;
  }

  std::string level = "info";
  for (const auto* common : {&clean.common, &stats.common, &bound.common, &eval.common, &synth.common, &correct.common}) {
    if (common->log_level != "info") level = common->log_level;
  }
  const Log log(err, parse_level(level));
  try {
    if (c->parsed()) run_clean(clean, log);
    if (s->parsed()) run_stats(stats, log);
    if (b->parsed()) run_bound(bound, log);
    if (e->parsed()) run_eval(eval, log);
    if (y->parsed()) run_synth(synth, log);
    if (r->parsed()) run_correct(correct, log);
  } catch (const UsageError& ex) {
    log.error(ex.what());
    return 1;
  } catch (const ConfigError& ex) {
    log.error(ex.what());
    return 1;
  } catch (const std::exception& ex) {
    log.error(ex.what());
    return 2;
  }
  return 0;
}

}  // namespace cleanwords::cli
