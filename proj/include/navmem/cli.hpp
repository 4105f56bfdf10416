#ifndef NAVMEM_CLI_HPP
#define NAVMEM_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace navmem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name), writing
/// machine-readable output to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One cross product of sampler settings.
struct SweepGrid {
  std::vector<std::size_t> w_values;
  std::vector<double> epsilon_values;
  std::vector<double> tau_values;
};

struct SweepSpec {
  std::vector<SweepGrid> grids;
  std::vector<std::filesystem::path> inputs;

  void validate() const;
};

/// Three one-axis-at-a-time grids: W in {20..100} and epsilon in
/// {0.05..0.2} with tau = 0, then tau in {0.9, 0.95, 0.99} (12 points).
std::vector<SweepGrid> hyperparam_grids();

inline constexpr const char* kSweepHeader =
    "exp,trajectory,w,epsilon,tau,n_total,n_selected,n_padded,retained_fraction,"
    "min_pairwise_dist_m,mean_pairwise_cos";

/// CSV with one row per (grid point, trajectory), grid points numbered
/// from 1 in grid order. Rows are emitted in that order regardless of how
/// they are computed.
std::string run_sweep(const SweepSpec& spec);

}  // namespace navmem::cli

#endif  // NAVMEM_CLI_HPP
