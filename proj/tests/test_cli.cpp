#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"

#include "cleanwords/atomic_file.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cleanwords::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string lexicon() { return source_path("data/en_50k.txt").string(); }

Result synth(const fs::path& dir, std::vector<std::string> extra = {}, const std::string& words = "80") {
  std::vector<std::string> args = {"synth",      "--lexicon",  lexicon(),  "--out-dir", dir.string(), "--seed", "3",
                                   "--words",    words,        "--sigma",  "80",        "--saltpepper", "0.02",
                                   "--swap-pair", "oc",        "--swap-rate", "0.1",    "--log-level", "error"};
  args.insert(args.end(), extra.begin(), extra.end());
  return cli(args);
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(cleanwords::read_file(p)); }

}  // namespace

TEST_CASE("version") {
  const auto r = cli({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("cleanwords 1.0.0 config ", 0) == 0);
  CHECK(r.out.size() == std::string("cleanwords 1.0.0 config ").size() + 16 + 1);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(cli({}).code == 1);
  const auto unknown = cli({"clean", "--bogus"});
  CHECK(unknown.code == 1);
  CHECK_FALSE(unknown.err.empty());
  const auto dir = scratch_dir("cli_usage");
  const auto missing = cli({"synth", "--lexicon", (dir / "nope.txt").string(), "--out-dir", dir.string()});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("--lexicon") != std::string::npos);
  CHECK(cli({"synth", "--lexicon", lexicon(), "--out-dir", dir.string(), "--sigma", "-1"}).code == 1);
  CHECK(cli({"clean", "--help"}).code == 0);
}

TEST_CASE("bad input contents exit with 2") {
  const auto dir = scratch_dir("cli_bad_input");
  write_text(dir / "page.pgm", "P5\n2 2\n255\nxxxx");
  write_text(dir / "ocr.tsv", "not an ocr file\n");
  const auto r = cli({"clean", "--image", (dir / "page.pgm").string(), "--ocr", (dir / "ocr.tsv").string(),
                      "--lexicon", lexicon(), "--out-dir", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("cleanwords: error: ") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "clean_conservative.tsv"));
}

TEST_CASE("synth output is reproducible") {
  const auto a = scratch_dir("cli_synth_a");
  const auto b = scratch_dir("cli_synth_b");
  REQUIRE(synth(a, {"--threads", "1"}).code == 0);
  REQUIRE(synth(b, {"--threads", "4"}).code == 0);
  for (const char* name : {"page.pgm", "page.tsv", "truth.txt", "planted.json", "synth.manifest.json"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(a / name));
    CHECK(cleanwords::read_file(a / name) == cleanwords::read_file(b / name));
  }
  const auto m = read_json(a / "synth.manifest.json");
  CHECK(m.at("command") == "synth");
  CHECK(m.at("version") == "1.0.0");
  CHECK(m.at("seed") == 3);
  CHECK(m.at("outputs").size() == 4);
  CHECK(m.at("outputs")[0].at("fnv1a") == cleanwords::fnv1a_hex(cleanwords::read_file(a / "page.pgm")));
}

TEST_CASE("config file supplies defaults and flags win") {
  const auto dir = scratch_dir("cli_config");
  write_text(dir / "synth.ini", "words = 30\nsigma = 0\n");
  REQUIRE(cli({"synth", "--lexicon", lexicon(), "--out-dir", (dir / "a").string(), "--config",
               (dir / "synth.ini").string()})
              .code == 0);
  std::istringstream truth(cleanwords::read_file(dir / "a" / "truth.txt"));
  int count = 0;
  for (std::string t; truth >> t;) ++count;
  CHECK(count == 30);
  CHECK(read_json(dir / "a" / "synth.manifest.json").at("config").at("sigma") == 0.0);

  REQUIRE(cli({"synth", "--lexicon", lexicon(), "--out-dir", (dir / "b").string(), "--config",
               (dir / "synth.ini").string(), "--words", "12"})
              .code == 0);
  write_text(dir / "bad.ini", "wordz = 3\n");
  CHECK(cli({"synth", "--lexicon", lexicon(), "--out-dir", (dir / "c").string(), "--config",
             (dir / "bad.ini").string()})
            .code == 1);
  write_text(dir / "broken.ini", "just words\n");
  CHECK(cli({"synth", "--lexicon", lexicon(), "--out-dir", (dir / "c").string(), "--config",
             (dir / "broken.ini").string()})
            .code == 1);

  std::istringstream truth_b(cleanwords::read_file(dir / "b" / "truth.txt"));
  count = 0;
  for (std::string t; truth_b >> t;) ++count;
  CHECK(count == 12);
}

TEST_CASE("full chain through every subcommand") {
  const auto dir = scratch_dir("cli_chain");
  REQUIRE(synth(dir, {}, "200").code == 0);
  const auto page = (dir / "page.pgm").string();
  const auto ocr = (dir / "page.tsv").string();

  auto r = cli({"clean", "--image", page, "--ocr", ocr, "--lexicon", lexicon(), "--mode", "both", "--out-dir",
                dir.string(), "--log-level", "error"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  for (const char* name : {"clean_conservative.tsv", "clean_aggressive.tsv", "stats_conservative.json",
                           "stats_aggressive.json", "clean.manifest.json"})
    CHECK(fs::exists(dir / name));
  const auto stats = read_json(dir / "stats_conservative.json");
  CHECK(stats.at("total_words") == 200);

  r = cli({"eval", "--ocr", ocr, "--truth", (dir / "truth.txt").string(), "--conservative",
           (dir / "clean_conservative.tsv").string(), "--aggressive", (dir / "clean_aggressive.tsv").string(),
           "--svg", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto report = read_json(dir / "report.json");
  CHECK(report.at("word_count") == 200);
  CHECK(report.at("conservative").at("errors") == 0);
  CHECK(fs::exists(dir / "pr.csv"));
  CHECK(fs::exists(dir / "pr.svg"));
  CHECK(fs::exists(dir / "report.txt"));

  r = cli({"correct", "--image", page, "--ocr", ocr, "--clean", (dir / "clean_conservative.tsv").string(), "--pair",
           "o", "c", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(cleanwords::read_file(dir / "corrections.tsv").rfind("glyph_id\told\tnew\tscore\n", 0) == 0);
  CHECK(read_json(dir / "corrector.json").contains("training_accuracy"));

  r = cli({"stats", "--lexicon", lexicon(), "--word", "cat", "--word", "house", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto lst = read_json(dir / "lexicon_stats.json");
  CHECK(lst.at("words").size() == 2);
  CHECK(lst.contains("summary"));

  write_text(dir / "params.json", R"({"epsilon": 1e-4, "delta": 0.5, "D2": 5, "E1": 2, "p1": 1e-3})");
  r = cli({"bound", "--params", (dir / "params.json").string(), "--lexicon", lexicon(), "--clean",
           (dir / "clean_conservative.tsv").string(), "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto bound = read_json(dir / "bound.json");
  CHECK(bound.at("breakdown").at("total").get<double>() == doctest::Approx(3.84e-6));
  CHECK(bound.contains("document_max"));

  write_text(dir / "bad.json", R"({"delta": 0.5})");
  CHECK(cli({"bound", "--params", (dir / "bad.json").string(), "--out-dir", dir.string()}).code == 1);
}
