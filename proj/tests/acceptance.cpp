// Acceptance suite: one PASS/FAIL line per criterion.

#include "navmem/cli.hpp"
#include "navmem/eqa.hpp"
#include "navmem/io.hpp"
#include "navmem/metrics.hpp"
#include "navmem/posenc.hpp"
#include "navmem/sampler.hpp"
#include "navmem/simulator.hpp"

#include "support/generators.hpp"
#include "support/invariants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace navmem;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cli_run(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "navmem");
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out != nullptr) *out = o.str();
  return code;
}

// Shared by criteria 1 and 2.
struct OracleCase {
  Trajectory traj;
  SamplerConfig cfg;
};

std::vector<OracleCase> oracle_cases() {
  const std::size_t ws[] = {1, 20, 60};
  const double eps[] = {0.0, 0.05, 0.1, 0.2};
  const double taus[] = {0.9, 0.95, 0.99, 1.0};
  Rng rng(1000);
  std::vector<OracleCase> cases;
  for (std::size_t i = 0; i < 1000; ++i) {
    SamplerConfig cfg;
    cfg.window_w = ws[i % 3];
    cfg.epsilon_m = eps[(i / 3) % 4];
    cfg.tau = taus[(i / 12) % 4];
    cases.push_back({navmem::testing::random_trajectory(rng, 1 + rng.index(500)), cfg});
  }
  return cases;
}

Outcome criterion_1(const std::vector<OracleCase>& cases) {
  Outcome o;
  const auto start = Clock::now();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    o.require(sample_history(c.traj, c.cfg) == oracle_sample(c.traj, c.cfg),
              "mismatch on case " + std::to_string(i));
  }
  const double s = seconds_since(start);
  o.require(s < 30.0, "took " + std::to_string(s) + " s");
  if (o.pass) o.detail = std::to_string(cases.size()) + " cases in " + std::to_string(s) + " s";
  return o;
}

Outcome criterion_2(const std::vector<OracleCase>& cases) {
  Outcome o;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    if (auto v = navmem::testing::check_history(c.traj, c.cfg, sample_history(c.traj, c.cfg))) {
      ++violations;
      o.require(false, "case " + std::to_string(i) + ": " + *v);
    }
  }
  if (o.pass) o.detail = "0 violations";
  return o;
}

Outcome criterion_3() {
  Outcome o;
  SamplerConfig cfg;
  cfg.window_w = 4;
  cfg.epsilon_m = 0.1;
  cfg.tau = 0.95;
  const auto h = sample_history(navmem::testing::five_frame_fixture(), cfg);
  o.require(h.source_t == std::vector<std::int64_t>{4, 2, 1, 1}, "source_t differs from [4, 2, 1, 1]");
  return o;
}

Outcome criterion_4() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const House house = generate_house(seed, 4, 8.0);
    RunOptions opt;
    opt.policy = Policy::revisit_loop;
    opt.start = house.free_cells()[seed * 37 % house.free_cells().size()];
    opt.tour_len = 8;
    opt.steps = 8 * 5;
    opt.features.seed = seed;
    const auto traj = run_policy(house, opt).trajectory;
    const std::string tag = "seed " + std::to_string(seed);
    o.require(sample_history(traj, SamplerConfig{}).n_valid == 8, tag + ": defaults did not keep 8");
    for (std::size_t w : {1u, 20u, 40u, 60u, 100u}) {
      SamplerConfig cfg;
      cfg.window_w = w;
      cfg.epsilon_m = 0.0;
      o.require(sample_history(traj, cfg).n_valid == std::min<std::size_t>(40, w),
                tag + ": eps=0 W=" + std::to_string(w));
    }
  }
  return o;
}

Outcome criterion_5() {
  Outcome o;
  Rng rng(55);
  for (int i = 0; i < 100; ++i) {
    const double v = rng.uniform(-50, 50), delta = rng.uniform(-50, 50);
    const double w = std::exp(rng.uniform(std::log(1e-4), 0.0));
    const double s = std::sin(v * w), c = std::cos(v * w);
    const double a = delta * w;
    const double s2 = std::sin((v + delta) * w), c2 = std::cos((v + delta) * w);
    o.require(std::abs(s2 - (s * std::cos(a) + c * std::sin(a))) < 1e-9 &&
                  std::abs(c2 - (c * std::cos(a) - s * std::sin(a))) < 1e-9,
              "rotation identity (scalar) failed");
  }
  const PosEncConfig cfg{64, 10000.0};
  const auto freqs = frequencies(cfg);
  for (int i = 0; i < 100; ++i) {
    const double v = rng.uniform(-50, 50), delta = rng.uniform(-50, 50);
    const std::size_t k = rng.index(freqs.size());
    const auto base = encode_axis(v, cfg), shifted = encode_axis(v + delta, cfg);
    const double a = delta * freqs[k];
    const double s = base[2 * k], c = base[2 * k + 1];
    o.require(std::abs(shifted[2 * k] - (s * std::cos(a) + c * std::sin(a))) < 1e-9 &&
                  std::abs(shifted[2 * k + 1] - (c * std::cos(a) - s * std::sin(a))) < 1e-9,
              "rotation identity failed on encode_axis");
  }
  for (std::size_t c : {4u, 8u, 1024u}) {
    const auto pe = encode_2d(0.0, 0.0, {c, 10000.0});
    for (std::size_t m = 0; m < pe.size(); ++m) {
      o.require(pe[m] == (m % 2 == 0 ? 0.0 : 1.0), "PE(0,0) not [0,1,0,1,...] for c=" + std::to_string(c));
    }
  }
  const auto w8 = frequencies({8, 10000.0});
  o.require(std::abs(w8[0] - 1.0) < 1e-12, "omega_0 != 1");
  o.require(std::abs(w8[1] - 0.01) < 1e-12, "omega_1 != 0.01");
  return o;
}

Episode episode(bool s, double w, double e) {
  Episode ep;
  ep.success = s;
  ep.shortest_len = w;
  ep.episode_len = e;
  return ep;
}

Outcome criterion_6() {
  Outcome o;
  o.require(std::abs(sel(std::vector<Episode>{episode(true, 10, 10), episode(true, 5, 10)}) - 0.75) < 1e-12,
            "SEL fixture");
  o.require(success_rate(std::vector<Episode>{episode(true, 1, 1), episode(false, 1, 1), episode(true, 1, 1),
                                              episode(true, 1, 1)}) == 0.75,
            "SR fixture");
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Episode> set;
    const std::size_t n = 1 + rng.index(30);
    for (std::size_t k = 0; k < n; ++k) {
      set.push_back(episode(rng.index(2) == 0, 1.0 + static_cast<double>(rng.index(200)),
                            1.0 + static_cast<double>(rng.index(400))));
    }
    o.require(sel(set) <= success_rate(set), "SEL > SR on random set " + std::to_string(i));
  }
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const House house = generate_house(seed, 1 + static_cast<int>(seed % 6), 8.0);
    const auto cells = house.free_cells();
    RunOptions opt;
    opt.policy = Policy::shortest_path;
    opt.start = cells[(seed * 7919) % cells.size()];
    opt.goal = cells[(seed * 104729 + 11) % cells.size()];
    opt.steps = 100000;
    const auto ep = run_policy(house, opt).episode;
    if (ep.success) {
      ++successes;
      o.require(sel_term(ep) == 1.0, "shortest-path SEL term != 1 for seed " + std::to_string(seed));
    }
  }
  o.require(successes == 50, "shortest-path episode failed");
  return o;
}

Outcome criterion_7() {
  Outcome o;
  ObjectiveInputs in;
  in.action_losses = {1.0};
  in.answer_token_logprobs = {-2.0};
  in.occ_loss = 3.0;
  in.lambda_occ = 0.5;
  o.require(composite_objective(in) == 4.5, "composite != 4.5");
  in.lambda_occ = 0.0;
  o.require(composite_objective(in) == action_loss(in.action_losses) + answer_loss(in.answer_token_logprobs),
            "lambda = 0 does not reduce to action + answer loss");
  const std::vector<double> uniform(kActionSpaceSize, 1.0 / static_cast<double>(kActionSpaceSize));
  constexpr double kLn20 = 2.99573227355399099344;
  for (std::size_t target = 0; target < kActionSpaceSize; ++target) {
    o.require(std::abs(cross_entropy(uniform, target) - kLn20) < 1e-12, "uniform CE != ln 20");
  }
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const auto dir = navmem::testing::temp_dir("acceptance_8");
  for (const char* policy : {"revisit_loop", "random_walk", "shortest_path"}) {
    std::string files[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / (std::string(policy) + std::to_string(rep) + ".jsonl");
      o.require(cli_run({"simulate", "--seed", "1", "--rooms", "4", "--policy", policy, "--steps", "120",
                         "--instruction", "find the sofa", "--out", out.string()}) == 0,
                std::string("simulate failed: ") + policy);
      files[rep] = slurp(out) + slurp(dir / (std::string(policy) + std::to_string(rep) + ".episode.jsonl"));
    }
    o.require(!files[0].empty() && files[0] == files[1], std::string("simulate not byte-identical: ") + policy);

    const auto path = dir / (std::string(policy) + "0.jsonl");
    const Trajectory traj = load_trajectory(path);
    save_trajectory(traj, dir / "rt.jsonl");
    o.require(slurp(dir / "rt.jsonl") == slurp(path), "trajectory round trip not byte-identical");
    o.require(load_trajectory(dir / "rt.jsonl") == traj, "trajectory round trip not equal");

    const auto h = sample_history(traj, SamplerConfig{});
    save_sampled(h, dir / "h.json");
    o.require(load_sampled(dir / "h.json") == h, "sampled history round trip not equal");
    save_sampled(load_sampled(dir / "h.json"), dir / "h2.json");
    o.require(slurp(dir / "h.json") == slurp(dir / "h2.json"), "sampled history rewrite not byte-identical");
  }
  std::string a, b;
  const std::vector<std::string> sweep{"sweep", "--in", (dir / "random_walk0.jsonl").string(), "--in",
                                       (dir / "revisit_loop0.jsonl").string(), "--preset", "hyperparam"};
  o.require(cli_run(sweep, &a) == 0 && cli_run(sweep, &b) == 0, "sweep failed");
  o.require(!a.empty() && a == b, "sweep not byte-identical");
  return o;
}

Outcome criterion_9() {
  Outcome o;
  for (std::size_t len : {1u, 30u, 60u, 100u}) {
    const auto traj = navmem::testing::line_trajectory(len);
    const auto refs = select_context(traj, 60);
    const std::size_t n = std::min<std::size_t>(len, 60);
    bool ok = refs.size() == n;
    for (std::size_t i = 0; ok && i < n; ++i) ok = refs[i] == traj[len - n + i].t;
    o.require(ok, "select_context suffix property fails for length " + std::to_string(len));
  }

  const StructuredResponse full{"scene text", "plan text", "reasoning text"};
  const std::string lines[] = {"Scene: scene text", "Plan: plan text", "Reasoning: reasoning text"};
  for (int drop = 0; drop < 3; ++drop) {
    std::string two;
    for (int s = 0; s < 3; ++s) {
      if (s != drop) two += lines[s] + "\n";
    }
    bool rejected = false;
    try {
      parse_response(two);
    } catch (const ResponseParseError&) {
      rejected = true;
    }
    o.require(rejected, "2-section response accepted");
  }
  o.require(parse_response(format_response(full)) == full, "3-section response not parsed");
  const auto prompt = build_prompt("go to a laptop in the bedroom", select_context(navmem::testing::line_trajectory(10), 60),
                                   default_exemplars());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    MockClient two({seed, 2, 0});
    bool rejected = false;
    try {
      generate(prompt, two);
    } catch (const ResponseParseError&) {
      rejected = true;
    }
    o.require(rejected, "2-section mock response accepted");
  }

  const auto dir = navmem::testing::temp_dir("acceptance_9");
  const Trajectory base = navmem::testing::line_trajectory(100);
  save_trajectory(Trajectory(base.observations(), {{"instruction", "go to a laptop in the bedroom"}}),
                  dir / "t.jsonl");
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    o.require(cli_run({"eqa-pack", "--in", (dir / "t.jsonl").string(), "--w", "60", "--out",
                       (dir / name).string()}) == 0,
              "eqa-pack failed");
  }
  const std::string pa = slurp(dir / "a.jsonl");
  o.require(!pa.empty() && pa == slurp(dir / "b.jsonl"), "eqa-pack not byte-identical");
  o.require(pa.find("\"frame_refs\":[40,41,") != std::string::npos && pa.find(",99]") != std::string::npos,
            "eqa-pack frame_refs not 40..99");
  return o;
}

Outcome criterion_10() {
  Outcome o;
  const fs::path data = fs::path(NAVMEM_DATA_DIR) / "trajectories";
  std::vector<std::string> inputs;
  if (fs::is_directory(data)) {
    for (const auto& entry : fs::directory_iterator(data)) {
      if (entry.path().extension() == ".jsonl") inputs.push_back(entry.path().string());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  o.require(!inputs.empty(), "no bundled trajectories under " + data.string());
  if (!o.pass) return o;

  std::vector<std::string> args{"sweep", "--preset", "hyperparam"};
  for (const auto& in : inputs) args.insert(args.end(), {"--in", in});
  const auto start = Clock::now();
  std::string csv;
  o.require(cli_run(args, &csv) == 0, "sweep failed");
  const double s = seconds_since(start);
  o.require(s < 60.0, "took " + std::to_string(s) + " s");

  // Expected (W, eps, tau) per grid point, built independently of the CLI.
  std::vector<std::tuple<std::size_t, double, double>> points;
  for (std::size_t w : {20u, 40u, 60u, 80u, 100u}) points.emplace_back(w, 0.1, 0.0);
  for (double e : {0.05, 0.1, 0.15, 0.2}) points.emplace_back(60, e, 0.0);
  for (double t : {0.9, 0.95, 0.99}) points.emplace_back(60, 0.1, t);

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  o.require(line == cli::kSweepHeader, "bad CSV header");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::istringstream row(line);
    for (std::string c; std::getline(row, c, ',');) cols.push_back(c);
    if (cols.size() != 11) {
      o.require(false, "row " + std::to_string(rows) + " has " + std::to_string(cols.size()) + " columns");
      break;
    }
    const std::size_t point = rows / inputs.size();
    const std::size_t traj = rows % inputs.size();
    if (point >= points.size()) {
      o.require(false, "too many rows");
      break;
    }
    const auto [w, e, t] = points[point];
    const std::size_t n_total = std::stoul(cols[5]), n_sel = std::stoul(cols[6]), n_pad = std::stoul(cols[7]);
    const double frac = std::stod(cols[8]);
    o.require(std::stoul(cols[0]) == point + 1 && cols[1] == inputs[traj] &&
                  std::stoul(cols[2]) == w && std::stod(cols[3]) == e && std::stod(cols[4]) == t,
              "row " + std::to_string(rows) + " has wrong key columns: " + line);
    o.require(n_sel >= 1 && n_sel <= std::min(w, n_total) && n_sel + n_pad == w &&
                  frac == static_cast<double>(n_sel) / static_cast<double>(n_total) &&
                  std::stod(cols[9]) >= 0.0 && std::abs(std::stod(cols[10])) <= 1.0,
              "row " + std::to_string(rows) + " has inconsistent values: " + line);
    ++rows;
  }
  o.require(rows == points.size() * inputs.size(),
            "expected " + std::to_string(points.size() * inputs.size()) + " rows, got " + std::to_string(rows));
  if (o.pass) {
    o.detail = std::to_string(rows) + " rows over " + std::to_string(inputs.size()) + " trajectories in " +
               std::to_string(s) + " s";
  }
  return o;
}

}  // namespace

int main() {
  const auto cases = oracle_cases();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", [&] { return criterion_1(cases); }},
      {"sampler invariants", [&] { return criterion_2(cases); }},
      {"five-frame hand trace", criterion_3},
      {"revisit compression", criterion_4},
      {"positional encoding", criterion_5},
      {"navigation metrics", criterion_6},
      {"training objective", criterion_7},
      {"determinism and round trips", criterion_8},
      {"EQA pipeline", criterion_9},
      {"hyperparameter sweep", criterion_10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
