#ifndef NAVMEM_IO_HPP
#define NAVMEM_IO_HPP

#include "navmem/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace navmem {

/// Reading or writing a file failed, or its contents are malformed.
/// The message names the offending line when one is known.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Trajectory files are JSON lines: an optional {"meta": {...}} header on
// line 1, then one observation record per line.
Trajectory load_trajectory(const std::filesystem::path& path);
Trajectory read_trajectory(std::istream& in);
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);
void write_trajectory(const Trajectory& traj, std::ostream& out);

// Sampled histories are a single JSON object.
void save_sampled(const SampledHistory& history, const std::filesystem::path& path);
SampledHistory load_sampled(const std::filesystem::path& path);
std::string sampled_to_json(const SampledHistory& history);
SampledHistory sampled_from_json(const std::string& text);

// Episode summaries: {"success", "w", "e", "rooms_visited", "total_rooms"}.
std::string episode_to_json(const Episode& episode);
Episode episode_from_json(const std::string& line);
std::vector<Episode> load_episodes(const std::filesystem::path& path);
void save_episodes(const std::vector<Episode>& episodes, const std::filesystem::path& path);

}  // namespace navmem

#endif  // NAVMEM_IO_HPP
