#ifndef NAVMEM_SIMULATOR_HPP
#define NAVMEM_SIMULATOR_HPP

#include "navmem/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace navmem {

/// Grid cell size in meters; one "move base" step.
inline constexpr double kCellSize = 0.2;
/// Constant camera height of simulated agents, meters.
inline constexpr double kAgentHeight = 0.9;
/// An episode succeeds when it ends within this distance of the goal, meters.
inline constexpr double kSuccessDistance = 2.0;

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Axis-aligned half-open block of cells [x0, x1) x [y0, y1).
struct Room {
  std::string label;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool contains(Cell c) const { return c.x >= x0 && c.x < x1 && c.y >= y0 && c.y < y1; }
  bool operator==(const Room&) const = default;
};

/// Occupancy grid partitioned into rectangular rooms. The constructor
/// rejects grids whose rooms overlap or leave cells uncovered, and grids
/// whose free cells are not all mutually reachable (4-connected).
class House {
 public:
  House(int width, int height, std::vector<std::uint8_t> free, std::vector<Room> rooms,
        std::uint64_t seed);

  /// Wall-free single-room house.
  static House open(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Room>& rooms() const { return rooms_; }
  const std::vector<std::uint8_t>& grid() const { return free_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_; }
  bool is_free(Cell c) const { return in_bounds(c) && free_[index(c)] != 0; }
  const Room& room_at(Cell c) const;
  std::vector<Cell> free_cells() const;

  /// World position of a cell (z = kAgentHeight).
  Position position_of(Cell c) const;

  /// BFS step counts from `from` to every cell, -1 where unreachable.
  std::vector<int> bfs_distances(Cell from) const;
  int distance(Cell from, Cell to) const;
  /// Cells of one shortest 4-connected path, both endpoints included.
  /// Empty when unreachable.
  std::vector<Cell> shortest_path(Cell from, Cell to) const;

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  bool operator==(const House&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> free_;
  std::vector<Room> rooms_;
  std::vector<int> room_of_;
  std::uint64_t seed_ = 0;
};

/// Square house of side `extent_m`, split into `n_rooms` rooms by seeded
/// binary space partitioning, with one doorway per split. Throws Error when
/// the extent cannot hold that many rooms.
House generate_house(std::uint64_t seed, int n_rooms, double extent_m);

// Grid is stored run-length encoded as [[value, count], ...] in row-major order.
std::string house_to_json(const House& house);
House house_from_json(const std::string& text);

struct FeatureSynthConfig {
  std::size_t feat_dim = 64;
  std::size_t n_basis = 128;
  double length_scale_m = 1.0;
  double heading_scale_deg = 45.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Smooth random-cosine-basis embedding of (x, y, heading) into unit vectors.
/// Similar poses map to nearby vectors; poses far apart relative to the
/// length and heading scales decorrelate.
class FeatureSynthesizer {
 public:
  explicit FeatureSynthesizer(const FeatureSynthConfig& cfg);

  FeatureTokens operator()(const Position& position, double heading_deg) const;

 private:
  FeatureSynthConfig cfg_;
  std::vector<double> freq_;    // n_basis x 4
  std::vector<double> phase_;   // n_basis
  std::vector<double> project_; // feat_dim x n_basis
};

/// One-token features for a pose.
FeatureTokens synth_features(const Position& position, double heading_deg,
                             const FeatureSynthConfig& cfg);

enum class Policy { revisit_loop, random_walk, shortest_path };

Policy parse_policy(std::string_view name);
std::string_view to_string(Policy policy);

struct RunOptions {
  Policy policy = Policy::random_walk;
  Cell start;
  std::optional<Cell> goal;
  // Observation budget. revisit_loop and random_walk emit exactly this many
  // observations; shortest_path stops at the goal or the budget.
  int steps = 1;
  FeatureSynthConfig features;
  // Distinct poses in one revisit_loop tour (even, >= 4).
  int tour_len = 8;
  std::uint64_t seed = 0;
};

struct PolicyRun {
  Trajectory trajectory;
  Episode episode;
};

/// Drives an agent through `house`. Episode lengths are counted in moves
/// with a floor of one; w is the BFS distance to the goal, or equals e
/// when there is no goal (such episodes never succeed).
///
/// revisit_loop walks a closed rectangular ring of tour_len cells near
/// `start` (facing along the ring) and repeats it. Throws Error when the
/// start or goal is blocked, the goal is unreachable, or no ring fits.
PolicyRun run_policy(const House& house, const RunOptions& options);

}  // namespace navmem

#endif  // NAVMEM_SIMULATOR_HPP
