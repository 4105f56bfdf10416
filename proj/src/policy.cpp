#include "navmem/rng.hpp"
#include "navmem/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace navmem {

namespace {

struct Pose {
  Cell cell;
  double heading_deg;
};

double heading_of_move(Cell from, Cell to) {
  if (to.x > from.x) return 0.0;
  if (to.y > from.y) return 90.0;
  if (to.x < from.x) return 180.0;
  return 270.0;
}

std::string move_label(double heading) {
  if (heading == 0.0) return "move_east";
  if (heading == 90.0) return "move_north";
  if (heading == 180.0) return "move_west";
  return "move_south";
}

// Ring of `tour_len` cells around a rectangle anchored at `anchor`,
// counter-clockwise: +x, +y, -x, -y.
std::vector<Cell> ring_cells(Cell anchor, int tour_len) {
  const int half = tour_len / 2;
  const int dx = (half + 1) / 2;
  const int dy = half - dx;
  std::vector<Cell> ring;
  Cell c = anchor;
  for (int i = 0; i < dx; ++i, ++c.x) ring.push_back(c);
  for (int i = 0; i < dy; ++i, ++c.y) ring.push_back(c);
  for (int i = 0; i < dx; ++i, --c.x) ring.push_back(c);
  for (int i = 0; i < dy; ++i, --c.y) ring.push_back(c);
  return ring;
}

std::vector<Pose> revisit_tour(const House& house, Cell start, int tour_len) {
  if (tour_len < 4 || tour_len % 2 != 0) {
    throw Error("revisit_loop: tour length must be even and >= 4");
  }
  // Candidate anchors in BFS order from the start, so the ring sits as close
  // to the start as the walls allow.
  const auto dist = house.bfs_distances(start);
  std::vector<Cell> order;
  for (Cell c : house.free_cells()) {
    if (dist[house.index(c)] >= 0) order.push_back(c);
  }
  std::stable_sort(order.begin(), order.end(), [&](Cell a, Cell b) {
    return dist[house.index(a)] < dist[house.index(b)];
  });
  for (Cell anchor : order) {
    const auto ring = ring_cells(anchor, tour_len);
    if (std::all_of(ring.begin(), ring.end(), [&](Cell c) { return house.is_free(c); })) {
      std::vector<Pose> tour;
      for (std::size_t i = 0; i < ring.size(); ++i) {
        tour.push_back({ring[i], heading_of_move(ring[i], ring[(i + 1) % ring.size()])});
      }
      return tour;
    }
  }
  throw Error("revisit_loop: no free ring of " + std::to_string(tour_len) + " cells reachable");
}

std::vector<Pose> random_walk(const House& house, Cell start, int steps, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 3));
  std::vector<Cell> cells{start};
  while (static_cast<int>(cells.size()) < steps) {
    const Cell c = cells.back();
    std::vector<Cell> options;
    for (Cell n : {Cell{c.x + 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x - 1, c.y}, Cell{c.x, c.y - 1}}) {
      if (house.is_free(n)) options.push_back(n);
    }
    cells.push_back(options.empty() ? c : options[rng.index(options.size())]);
  }
  std::vector<Pose> poses;
  double heading = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i + 1 < cells.size() && cells[i + 1] != cells[i]) {
      heading = heading_of_move(cells[i], cells[i + 1]);
    }
    poses.push_back({cells[i], heading});
  }
  return poses;
}

std::vector<Pose> follow_path(const std::vector<Cell>& path, int steps) {
  std::vector<Pose> poses;
  double heading = 0.0;
  const std::size_t n = std::min(path.size(), static_cast<std::size_t>(steps));
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < path.size()) {
      heading = heading_of_move(path[i], path[i + 1]);
    }
    poses.push_back({path[i], heading});
  }
  return poses;
}

}  // namespace

Policy parse_policy(std::string_view name) {
  if (name == "revisit_loop") return Policy::revisit_loop;
  if (name == "random_walk") return Policy::random_walk;
  if (name == "shortest_path") return Policy::shortest_path;
  throw Error("unknown policy: " + std::string(name));
}

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::revisit_loop: return "revisit_loop";
    case Policy::random_walk: return "random_walk";
    case Policy::shortest_path: return "shortest_path";
  }
  return "unknown";
}

PolicyRun run_policy(const House& house, const RunOptions& options) {
  if (!house.is_free(options.start)) {
    throw Error("run_policy: start cell is not free");
  }
  if (options.goal && !house.is_free(*options.goal)) {
    throw Error("run_policy: goal cell is not free");
  }
  if (options.steps < 1) {
    throw Error("run_policy: steps must be at least 1");
  }
  std::optional<int> goal_dist;
  if (options.goal) {
    const int d = house.distance(options.start, *options.goal);
    if (d < 0) {
      throw Error("run_policy: goal unreachable");
    }
    goal_dist = d;
  }

  std::vector<Pose> poses;
  switch (options.policy) {
    case Policy::revisit_loop: {
      const auto tour = revisit_tour(house, options.start, options.tour_len);
      for (int t = 0; t < options.steps; ++t) {
        poses.push_back(tour[static_cast<std::size_t>(t) % tour.size()]);
      }
      break;
    }
    case Policy::random_walk:
      poses = random_walk(house, options.start, options.steps, options.seed);
      break;
    case Policy::shortest_path:
      if (!options.goal) {
        throw Error("run_policy: shortest_path requires a goal");
      }
      poses = follow_path(house.shortest_path(options.start, *options.goal), options.steps);
      break;
  }

  const FeatureSynthesizer synth(options.features);
  std::vector<Observation> observations;
  observations.reserve(poses.size());
  Episode episode;
  episode.total_rooms = static_cast<int>(house.rooms().size());
  for (std::size_t t = 0; t < poses.size(); ++t) {
    const Pose& pose = poses[t];
    Observation obs;
    obs.t = static_cast<std::int64_t>(t);
    obs.position = house.position_of(pose.cell);
    obs.heading_deg = pose.heading_deg;
    obs.features = synth(obs.position, pose.heading_deg);
    obs.room_id = house.room_at(pose.cell).label;
    obs.action = t + 1 < poses.size() ? move_label(pose.heading_deg) : std::string("end");
    episode.rooms_visited.insert(*obs.room_id);
    observations.push_back(std::move(obs));
  }

  const double moves = std::max(1.0, static_cast<double>(poses.size()) - 1.0);
  episode.episode_len = moves;
  if (options.goal) {
    episode.shortest_len = std::max(1.0, static_cast<double>(*goal_dist));
    const Position end = house.position_of(poses.back().cell);
    const Position target = house.position_of(*options.goal);
    episode.success = norm(end - target) <= kSuccessDistance;
  } else {
    episode.shortest_len = moves;
    episode.success = false;
  }
  return {Trajectory(std::move(observations)), std::move(episode)};
}

}  // namespace navmem
