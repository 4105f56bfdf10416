#include "navmem/cli.hpp"

#include "navmem/eqa.hpp"
#include "navmem/io.hpp"
#include "navmem/metrics.hpp"
#include "navmem/posenc.hpp"
#include "navmem/rng.hpp"
#include "navmem/sampler.hpp"
#include "navmem/simulator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

namespace navmem::cli {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& text, bool append = false) {
  std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!out) {
    throw FormatError("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw FormatError("write to " + path.string() + " failed");
  }
}

std::filesystem::path default_episode_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_filename(out.stem().string() + ".episode.jsonl");
  return p;
}

Cell pick_free_cell(const House& house, Rng& rng, const std::string* avoid_room) {
  auto cells = house.free_cells();
  if (avoid_room != nullptr && house.rooms().size() > 1) {
    std::erase_if(cells, [&](Cell c) { return house.room_at(c).label == *avoid_room; });
  }
  return cells[rng.index(cells.size())];
}

// --- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::uint64_t seed = 0;
  int rooms = 4;
  std::string policy = "revisit_loop";
  int steps = 40;
  double extent = 8.0;
  std::size_t feat_dim = 64;
  std::size_t n_basis = 128;
  double length_scale = 1.0;
  double heading_scale = 45.0;
  int tour = 8;
  std::string instruction;
  std::filesystem::path out;
  std::filesystem::path episode_out;
  std::filesystem::path house_out;
};

void cmd_simulate(const SimulateArgs& a, std::ostream& err) {
  const House house = generate_house(a.seed, a.rooms, a.extent);
  Rng rng(mix_seed(a.seed, 10));
  const Cell start = pick_free_cell(house, rng, nullptr);
  const Cell goal = pick_free_cell(house, rng, &house.room_at(start).label);

  RunOptions opts;
  opts.policy = parse_policy(a.policy);
  opts.start = start;
  opts.goal = goal;
  opts.steps = a.steps;
  opts.tour_len = a.tour;
  opts.seed = a.seed;
  opts.features = {a.feat_dim, a.n_basis, a.length_scale, a.heading_scale, a.seed};
  PolicyRun run = run_policy(house, opts);

  Trajectory traj = std::move(run.trajectory);
  if (!a.instruction.empty()) {
    traj = Trajectory(traj.observations(), {{"house_id", "house-" + std::to_string(a.seed)},
                                            {"instruction", a.instruction},
                                            {"policy", a.policy}});
  }
  save_trajectory(traj, a.out);
  const auto episode_path = a.episode_out.empty() ? default_episode_path(a.out) : a.episode_out;
  save_episodes({run.episode}, episode_path);
  if (!a.house_out.empty()) {
    write_text(a.house_out, house_to_json(house) + "\n");
  }
  err << "simulate: " << traj.size() << " observations -> " << a.out.string() << ", episode -> "
      << episode_path.string() << '\n';
}

// --- sample ---------------------------------------------------------------

struct SampleArgs {
  std::filesystem::path in;
  std::filesystem::path out;
  std::size_t w = 60;
  double epsilon = 0.1;
  double tau = 0.95;
  bool token_wise = false;
  std::size_t dummy_dim = 0;
};

void cmd_sample(const SampleArgs& a, std::ostream& out) {
  const Trajectory traj = load_trajectory(a.in);
  SamplerConfig cfg;
  cfg.window_w = a.w;
  cfg.epsilon_m = a.epsilon;
  cfg.tau = a.tau;
  cfg.pool_before_compare = !a.token_wise;
  cfg.dummy_dim = a.dummy_dim;
  const SampledHistory history = sample_history(traj, cfg);
  if (!a.out.empty()) {
    save_sampled(history, a.out);
  }
  out << stats_to_json(redundancy_stats(traj, history)) << '\n';
}

// --- metrics / posenc / eqa-pack ----------------------------------------

void cmd_metrics(const std::filesystem::path& in, std::ostream& out) {
  const auto episodes = load_episodes(in);
  nlohmann::ordered_json j;
  j["n"] = episodes.size();
  j["sr"] = success_rate(episodes);
  j["sel"] = sel(episodes);
  j["pct_rooms"] = pct_rooms(episodes);
  out << j.dump() << '\n';
}

struct PosencArgs {
  double x = 0.0;
  double y = 0.0;
  std::size_t c = 1024;
  double base = 10000.0;
  bool frequencies = false;
};

void cmd_posenc(const PosencArgs& a, std::ostream& out) {
  const PosEncConfig cfg{a.c, a.base};
  const auto values = a.frequencies ? frequencies(cfg) : encode_2d(a.x, a.y, cfg);
  out << nlohmann::json(values).dump() << '\n';
}

struct EqaPackArgs {
  std::filesystem::path in;
  std::filesystem::path out;
  std::size_t w = 60;
  std::string instruction;
  std::uint64_t seed = 0;
  bool append = false;
};

void cmd_eqa_pack(const EqaPackArgs& a, std::ostream& out) {
  const Trajectory traj = load_trajectory(a.in);
  std::string instruction = a.instruction;
  if (instruction.empty()) {
    auto it = traj.meta().find("instruction");
    if (it == traj.meta().end()) {
      throw Error("eqa-pack: no --instruction given and trajectory meta has none");
    }
    instruction = it->second;
  }
  const EqaPrompt prompt =
      build_prompt(instruction, select_context(traj, a.w), default_exemplars());
  auto client = client_from_env(a.seed);
  const StructuredResponse response =
      generate(prompt, *client, RetryPolicy::from_env(), traj.meta());
  const std::string line = eqa_pair_to_json(prompt, response) + "\n";
  if (a.out.empty()) {
    out << line;
  } else {
    write_text(a.out, line, a.append);
  }
}

std::vector<char*> to_argv(std::vector<std::string>& storage) {
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return argv;
}

}  // namespace

// --- sweep ----------------------------------------------------------------

void SweepSpec::validate() const {
  if (grids.empty()) throw Error("sweep: no grids");
  if (inputs.empty()) throw Error("sweep: no input trajectories");
  for (const auto& g : grids) {
    if (g.w_values.empty() || g.epsilon_values.empty() || g.tau_values.empty()) {
      throw Error("sweep: every grid needs W, epsilon and tau values");
    }
  }
}

std::vector<SweepGrid> hyperparam_grids() {
  return {
      {{20, 40, 60, 80, 100}, {0.1}, {0.0}},
      {{60}, {0.05, 0.1, 0.15, 0.2}, {0.0}},
      {{60}, {0.1}, {0.9, 0.95, 0.99}},
  };
}

std::string run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<Trajectory> trajectories;
  trajectories.reserve(spec.inputs.size());
  for (const auto& path : spec.inputs) {
    trajectories.push_back(load_trajectory(path));
  }

  struct Job {
    std::size_t exp;
    SamplerConfig cfg;
    std::size_t traj;
  };
  std::vector<Job> jobs;
  std::size_t exp = 0;
  for (const auto& g : spec.grids) {
    for (std::size_t w : g.w_values) {
      for (double eps : g.epsilon_values) {
        for (double tau : g.tau_values) {
          ++exp;
          SamplerConfig cfg;
          cfg.window_w = w;
          cfg.epsilon_m = eps;
          cfg.tau = tau;
          for (std::size_t t = 0; t < trajectories.size(); ++t) {
            jobs.push_back({exp, cfg, t});
          }
        }
      }
    }
  }

  std::vector<std::string> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      try {
        const auto& traj = trajectories[job.traj];
        const auto stats = redundancy_stats(traj, sample_history(traj, job.cfg));
        rows[i] = std::to_string(job.exp) + "," + csv_field(spec.inputs[job.traj].string()) + "," +
                  std::to_string(job.cfg.window_w) + "," + fmt_double(job.cfg.epsilon_m) + "," +
                  fmt_double(job.cfg.tau) + "," + std::to_string(stats.n_total) + "," +
                  std::to_string(stats.n_selected) + "," + std::to_string(stats.n_padded) + "," +
                  fmt_double(stats.retained_fraction) + "," +
                  fmt_double(stats.min_pairwise_dist_m) + "," +
                  fmt_double(stats.mean_pairwise_cos);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        const Job& job = jobs[i];
        throw Error("sweep: W=" + std::to_string(job.cfg.window_w) +
                    " epsilon=" + fmt_double(job.cfg.epsilon_m) + " tau=" + fmt_double(job.cfg.tau) +
                    " on " + spec.inputs[job.traj].string() + " failed: " + e.what());
      }
    }
  }

  std::string csv = std::string(kSweepHeader) + "\n";
  for (const auto& row : rows) {
    csv += row;
    csv += '\n';
  }
  return csv;
}

// --- entry point ------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Observation-history sampling toolkit for embodied navigation", "navmem"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic house and run a policy");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--rooms", sim.rooms, "Number of rooms")->check(CLI::PositiveNumber);
  simulate->add_option("--policy", sim.policy, "revisit_loop | random_walk | shortest_path")
      ->check(CLI::IsMember({"revisit_loop", "random_walk", "shortest_path"}));
  simulate->add_option("--steps", sim.steps, "Observation budget")->check(CLI::PositiveNumber);
  simulate->add_option("--extent", sim.extent, "House side length in meters")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--feat-dim", sim.feat_dim, "Feature dimension")->check(CLI::PositiveNumber);
  simulate->add_option("--n-basis", sim.n_basis, "Number of cosine basis functions")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--length-scale", sim.length_scale, "Feature length scale, meters")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--heading-scale", sim.heading_scale, "Feature heading scale, degrees")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--tour", sim.tour, "Poses per revisit_loop tour");
  simulate->add_option("--instruction", sim.instruction, "Store a meta header with this instruction");
  simulate->add_option("--out", sim.out, "Trajectory output path")->required();
  simulate->add_option("--episode-out", sim.episode_out, "Episode summary path");
  simulate->add_option("--house-out", sim.house_out, "House map output path");

  SampleArgs smp;
  auto* sample = app.add_subcommand("sample", "Sample a fixed-length history from a trajectory");
  sample->add_option("--in", smp.in, "Trajectory file")->required()->check(CLI::ExistingFile);
  sample->add_option("--out", smp.out, "Sampled-history output path");
  sample->add_option("--w", smp.w, "Window size")->check(CLI::PositiveNumber);
  sample->add_option("--epsilon", smp.epsilon, "Relative position threshold, meters")
      ->check(CLI::NonNegativeNumber);
  sample->add_option("--tau", smp.tau, "Semantic similarity threshold")->check(CLI::Range(-1.0, 1.0));
  sample->add_flag("--token-wise", smp.token_wise, "Compare raw tokens instead of pooled features");
  sample->add_option("--dummy-dim", smp.dummy_dim, "Feature length of dummy slots");

  std::vector<std::filesystem::path> sweep_inputs;
  std::string preset;
  SweepGrid grid;
  std::filesystem::path sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Sweep sampler settings, emit CSV");
  sweep->add_option("--in", sweep_inputs, "Trajectory files")->required()->check(CLI::ExistingFile);
  auto* preset_opt = sweep->add_option("--preset", preset, "Named grid")->check(CLI::IsMember({"hyperparam"}));
  sweep->add_option("--w", grid.w_values, "Window sizes")->delimiter(',')->excludes(preset_opt)
      ->check(CLI::PositiveNumber);
  sweep->add_option("--epsilon", grid.epsilon_values, "Position thresholds")->delimiter(',')
      ->excludes(preset_opt)->check(CLI::NonNegativeNumber);
  sweep->add_option("--tau", grid.tau_values, "Similarity thresholds")->delimiter(',')
      ->excludes(preset_opt)->check(CLI::Range(-1.0, 1.0));
  sweep->add_option("--out", sweep_out, "CSV output path (default: stdout)");

  std::filesystem::path metrics_in;
  auto* metrics = app.add_subcommand("metrics", "SR, SEL and %Rooms over episode summaries");
  metrics->add_option("--in", metrics_in, "Episode-summary JSON lines")->required()
      ->check(CLI::ExistingFile);

  PosencArgs pe;
  auto* posenc = app.add_subcommand("posenc", "Print the 2D positional encoding of (x, y)");
  posenc->add_option("--x", pe.x, "x, meters");
  posenc->add_option("--y", pe.y, "y, meters");
  posenc->add_option("--c", pe.c, "Encoding length (multiple of 4)")->check(CLI::PositiveNumber);
  posenc->add_option("--base", pe.base, "Frequency base")->check(CLI::PositiveNumber);
  posenc->add_flag("--frequencies", pe.frequencies, "Print the frequency table instead");

  EqaPackArgs eqa;
  auto* eqa_pack = app.add_subcommand("eqa-pack", "Build an EQA pair from a trajectory's final frames");
  eqa_pack->add_option("--in", eqa.in, "Trajectory file")->required()->check(CLI::ExistingFile);
  eqa_pack->add_option("--out", eqa.out, "Output JSON lines path (default: stdout)");
  eqa_pack->add_option("--w", eqa.w, "Context window")->check(CLI::PositiveNumber);
  eqa_pack->add_option("--instruction", eqa.instruction, "Instruction (default: meta.instruction)");
  eqa_pack->add_option("--seed", eqa.seed, "Mock client seed");
  eqa_pack->add_flag("--append", eqa.append, "Append to --out instead of overwriting");

  std::vector<std::string> storage = args;
  if (storage.empty()) storage.push_back("navmem");
  auto argv = to_argv(storage);
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*simulate) {
      cmd_simulate(sim, err);
    } else if (*sample) {
      cmd_sample(smp, out);
    } else if (*sweep) {
      SweepSpec spec;
      spec.inputs = sweep_inputs;
      if (!preset.empty()) {
        spec.grids = hyperparam_grids();
      } else {
        if (grid.w_values.empty() || grid.epsilon_values.empty() || grid.tau_values.empty()) {
          err << "sweep: give --preset or all of --w, --epsilon, --tau\n";
          return kExitUsage;
        }
        spec.grids = {grid};
      }
      const std::string csv = run_sweep(spec);
      if (sweep_out.empty()) {
        out << csv;
      } else {
        write_text(sweep_out, csv);
      }
    } else if (*metrics) {
      cmd_metrics(metrics_in, out);
    } else if (*posenc) {
      cmd_posenc(pe, out);
    } else if (*eqa_pack) {
      cmd_eqa_pack(eqa, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace navmem::cli
