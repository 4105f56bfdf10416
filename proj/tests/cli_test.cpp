#include "navmem/cli.hpp"
#include "navmem/io.hpp"

#include "support/generators.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace navmem;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "navmem");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("simulate") {
  const auto dir = navmem::testing::temp_dir("cli_simulate");
  const std::vector<std::string> flags{"simulate", "--seed", "1", "--rooms", "4", "--policy", "revisit_loop",
                                       "--steps", "40"};
  auto with_out = [&](const std::string& name) {
    auto f = flags;
    f.insert(f.end(), {"--out", (dir / name).string(), "--house-out", (dir / (name + ".house")).string()});
    return f;
  };

  const auto r = run(with_out("a.jsonl"));
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const std::string a = slurp(dir / "a.jsonl");
  CHECK(count_lines(a) == 40);
  CHECK(load_trajectory(dir / "a.jsonl").size() == 40);
  CHECK(load_episodes(dir / "a.episode.jsonl").size() == 1);

  REQUIRE(run(with_out("b.jsonl")).code == 0);
  CHECK(slurp(dir / "b.jsonl") == a);
  CHECK(slurp(dir / "b.episode.jsonl") == slurp(dir / "a.episode.jsonl"));
  CHECK(slurp(dir / "b.jsonl.house") == slurp(dir / "a.jsonl.house"));

  SUBCASE("instruction adds a meta header") {
    auto f = with_out("m.jsonl");
    f.insert(f.end(), {"--instruction", "find the sofa"});
    REQUIRE(run(f).code == 0);
    const auto traj = load_trajectory(dir / "m.jsonl");
    CHECK(traj.meta().at("instruction") == "find the sofa");
    CHECK(count_lines(slurp(dir / "m.jsonl")) == 41);
  }
  SUBCASE("usage errors") {
    CHECK(run({"simulate", "--rooms", "0", "--out", (dir / "x.jsonl").string()}).code == 2);
    CHECK(run({"simulate", "--policy", "teleport", "--out", (dir / "x.jsonl").string()}).code == 2);
    CHECK(run({"simulate", "--steps", "10"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
  }
  SUBCASE("infeasible house is a runtime error") {
    const auto bad = run({"simulate", "--rooms", "50", "--extent", "2", "--out", (dir / "x.jsonl").string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("error:") != std::string::npos);
  }
}

TEST_CASE("sample") {
  const auto dir = navmem::testing::temp_dir("cli_sample");
  save_trajectory(navmem::testing::five_frame_fixture(), dir / "five.jsonl");

  const auto r = run({"sample", "--in", (dir / "five.jsonl").string(), "--out", (dir / "h.json").string(),
                      "--w", "4", "--epsilon", "0.1", "--tau", "0.95"});
  REQUIRE(r.code == 0);
  const auto h = load_sampled(dir / "h.json");
  CHECK(h.source_t == std::vector<std::int64_t>{4, 2, 1, 1});
  const auto stats = nlohmann::json::parse(r.out);
  CHECK(stats.at("n_selected") == 3);
  CHECK(stats.at("retained_fraction") == 0.6);

  const auto all = run({"sample", "--in", (dir / "five.jsonl").string(), "--w", "10", "--epsilon", "0"});
  REQUIRE(all.code == 0);
  CHECK(nlohmann::json::parse(all.out).at("retained_fraction") == 1.0);

  CHECK(run({"sample", "--w", "4"}).code == 2);
  CHECK(run({"sample", "--in", (dir / "missing.jsonl").string()}).code == 2);
  CHECK(run({"sample", "--in", (dir / "five.jsonl").string(), "--tau", "1.5"}).code == 2);
  CHECK(run({"sample", "--in", (dir / "five.jsonl").string(), "--w", "0"}).code == 2);

  std::ofstream(dir / "broken.jsonl") << "not json\n";
  CHECK(run({"sample", "--in", (dir / "broken.jsonl").string()}).code == 1);
}

TEST_CASE("sweep") {
  const auto dir = navmem::testing::temp_dir("cli_sweep");
  for (const char* name : {"a", "b"}) {
    REQUIRE(run({"simulate", "--seed", name[0] == 'a' ? "3" : "4", "--policy", "random_walk", "--steps", "150",
                 "--out", (dir / (std::string(name) + ".jsonl")).string()})
                .code == 0);
  }
  const std::string a = (dir / "a.jsonl").string(), b = (dir / "b.jsonl").string();

  SUBCASE("preset grid") {
    const auto r = run({"sweep", "--in", a, "--preset", "hyperparam"});
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 13);
    CHECK(lines[0] == cli::kSweepHeader);
    CHECK(lines[1].starts_with("1,"));
    CHECK(lines[12].starts_with("12,"));

    const auto two = run({"sweep", "--in", a, "--in", b, "--preset", "hyperparam"});
    REQUIRE(two.code == 0);
    CHECK(split_lines(two.out).size() == 25);
    CHECK(run({"sweep", "--in", a, "--in", b, "--preset", "hyperparam"}).out == two.out);
  }
  SUBCASE("explicit lists and file output") {
    const auto r = run({"sweep", "--in", a, "--w", "10,20", "--epsilon", "0.1", "--tau", "0.9,0.95",
                        "--out", (dir / "s.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(split_lines(slurp(dir / "s.csv")).size() == 5);
  }
  SUBCASE("tau 1 is a pure recency window") {
    const auto r = run({"sweep", "--in", a, "--w", "20,60,200", "--epsilon", "0.05,0.2", "--tau", "1.0"});
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 7);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      std::vector<std::string> cols;
      std::istringstream row(lines[i]);
      for (std::string c; std::getline(row, c, ',');) cols.push_back(c);
      REQUIRE(cols.size() == 11);
      const auto w = std::stoul(cols[2]);
      CHECK(std::stoul(cols[6]) == std::min<std::size_t>(w, 150));
    }
  }
  SUBCASE("usage errors") {
    CHECK(run({"sweep", "--in", a}).code == 2);
    CHECK(run({"sweep", "--in", a, "--w", "10"}).code == 2);
    CHECK(run({"sweep", "--in", a, "--preset", "table9"}).code == 2);
    CHECK(run({"sweep", "--in", a, "--preset", "hyperparam", "--w", "10"}).code == 2);
  }
}

TEST_CASE("metrics") {
  const auto dir = navmem::testing::temp_dir("cli_metrics");
  std::vector<Episode> eps(4);
  eps[0] = {true, 10, 10, {"a"}, 4};
  eps[1] = {false, 10, 3, {"a", "b"}, 4};
  eps[2] = {true, 5, 5, {"a", "b", "c"}, 4};
  eps[3] = {true, 8, 8, {"a", "b", "c", "d"}, 4};
  save_episodes(eps, dir / "e.jsonl");
  const auto r = run({"metrics", "--in", (dir / "e.jsonl").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "{\"n\":4,\"sr\":0.75,\"sel\":0.75,\"pct_rooms\":62.5}\n");
}

TEST_CASE("posenc") {
  const auto r = run({"posenc", "--x", "0", "--y", "0", "--c", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "[0.0,1.0,0.0,1.0]\n");
  CHECK(run({"posenc", "--c", "6"}).code == 1);
  const auto freqs = nlohmann::json::parse(run({"posenc", "--c", "8", "--frequencies"}).out);
  REQUIRE(freqs.size() == 2);
  CHECK(freqs[0] == 1.0);
  CHECK(std::abs(freqs[1].get<double>() - 0.01) < 1e-12);
}

TEST_CASE("eqa-pack") {
  const auto dir = navmem::testing::temp_dir("cli_eqa");
  Trajectory traj = navmem::testing::line_trajectory(100);
  traj = Trajectory(traj.observations(), {{"instruction", "go to a laptop in the bedroom"}});
  save_trajectory(traj, dir / "t.jsonl");
  const std::string in = (dir / "t.jsonl").string();

  const auto r = run({"eqa-pack", "--in", in, "--w", "60"});
  REQUIRE(r.code == 0);
  const auto pair = nlohmann::json::parse(r.out);
  std::vector<std::int64_t> expect;
  for (int t = 40; t < 100; ++t) expect.push_back(t);
  CHECK(pair.at("frame_refs").get<std::vector<std::int64_t>>() == expect);
  CHECK(pair.at("instruction") == "go to a laptop in the bedroom");

  REQUIRE(run({"eqa-pack", "--in", in, "--out", (dir / "a.jsonl").string()}).code == 0);
  REQUIRE(run({"eqa-pack", "--in", in, "--out", (dir / "b.jsonl").string()}).code == 0);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
  REQUIRE(run({"eqa-pack", "--in", in, "--out", (dir / "a.jsonl").string(), "--append"}).code == 0);
  CHECK(count_lines(slurp(dir / "a.jsonl")) == 2);

  save_trajectory(navmem::testing::line_trajectory(5), dir / "bare.jsonl");
  CHECK(run({"eqa-pack", "--in", (dir / "bare.jsonl").string()}).code == 1);
  CHECK(run({"eqa-pack", "--in", (dir / "bare.jsonl").string(), "--instruction", "find a cup"}).code == 0);
}
