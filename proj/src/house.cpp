#include "navmem/rng.hpp"
#include "navmem/simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>

namespace navmem {

namespace {

constexpr int kMinRoomCells = 4;

constexpr Cell kNeighborSteps[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

House::House(int width, int height, std::vector<std::uint8_t> free, std::vector<Room> rooms,
             std::uint64_t seed)
    : width_(width), height_(height), free_(std::move(free)), rooms_(std::move(rooms)),
      seed_(seed) {
  if (width_ < 1 || height_ < 1) {
    throw Error("house: grid must be at least 1x1");
  }
  const auto n_cells = static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  if (free_.size() != n_cells) {
    throw Error("house: grid size does not match dimensions");
  }
  if (rooms_.empty()) {
    throw Error("house: at least one room required");
  }
  room_of_.assign(n_cells, -1);
  for (std::size_t r = 0; r < rooms_.size(); ++r) {
    const Room& room = rooms_[r];
    if (room.x0 < 0 || room.y0 < 0 || room.x1 > width_ || room.y1 > height_ ||
        room.x0 >= room.x1 || room.y0 >= room.y1) {
      throw Error("house: room " + room.label + " out of bounds");
    }
    for (int y = room.y0; y < room.y1; ++y) {
      for (int x = room.x0; x < room.x1; ++x) {
        auto& slot = room_of_[index({x, y})];
        if (slot != -1) {
          throw Error("house: rooms overlap at cell (" + std::to_string(x) + ", " +
                      std::to_string(y) + ")");
        }
        slot = static_cast<int>(r);
      }
    }
  }
  if (std::find(room_of_.begin(), room_of_.end(), -1) != room_of_.end()) {
    throw Error("house: rooms do not cover the grid");
  }
  const auto cells = free_cells();
  if (cells.empty()) {
    throw Error("house: no free cells");
  }
  const auto dist = bfs_distances(cells.front());
  for (Cell c : cells) {
    if (dist[index(c)] < 0) {
      throw Error("house: free space is not connected");
    }
  }
}

House House::open(int width, int height) {
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(std::max(height, 0));
  return House(width, height, std::vector<std::uint8_t>(n, 1),
               {Room{"room_0", 0, 0, width, height}}, 0);
}

const Room& House::room_at(Cell c) const {
  if (!in_bounds(c)) {
    throw Error("house: cell out of bounds");
  }
  return rooms_[static_cast<std::size_t>(room_of_[index(c)])];
}

std::vector<Cell> House::free_cells() const {
  std::vector<Cell> out;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (free_[index({x, y})] != 0) {
        out.push_back({x, y});
      }
    }
  }
  return out;
}

Position House::position_of(Cell c) const {
  return {c.x * kCellSize, c.y * kCellSize, kAgentHeight};
}

std::vector<int> House::bfs_distances(Cell from) const {
  std::vector<int> dist(free_.size(), -1);
  if (!is_free(from)) {
    return dist;
  }
  std::deque<Cell> queue{from};
  dist[index(from)] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (Cell step : kNeighborSteps) {
      const Cell n{c.x + step.x, c.y + step.y};
      if (is_free(n) && dist[index(n)] < 0) {
        dist[index(n)] = dist[index(c)] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

int House::distance(Cell from, Cell to) const {
  if (!in_bounds(to)) {
    return -1;
  }
  return bfs_distances(from)[index(to)];
}

std::vector<Cell> House::shortest_path(Cell from, Cell to) const {
  if (!in_bounds(to)) {
    return {};
  }
  // Distances from the goal; walk downhill from the start, taking the first
  // neighbor in kNeighborSteps order at each step.
  const auto dist = bfs_distances(to);
  if (!is_free(from) || dist[index(from)] < 0) {
    return {};
  }
  std::vector<Cell> path{from};
  Cell c = from;
  while (c != to) {
    for (Cell step : kNeighborSteps) {
      const Cell n{c.x + step.x, c.y + step.y};
      if (is_free(n) && dist[index(n)] == dist[index(c)] - 1) {
        c = n;
        break;
      }
    }
    path.push_back(c);
  }
  return path;
}

namespace {

struct Split {
  bool vertical;  // line x = at, spanning [lo, hi) in y; otherwise y = at over x
  int at;
  int lo;
  int hi;
};

int leaf_containing(const std::vector<Room>& leaves, Cell c) {
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].contains(c)) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

House generate_house(std::uint64_t seed, int n_rooms, double extent_m) {
  if (n_rooms < 1) {
    throw Error("generate_house: n_rooms must be at least 1");
  }
  if (!std::isfinite(extent_m) || extent_m <= 0.0) {
    throw Error("generate_house: extent must be positive");
  }
  const int side = static_cast<int>(std::lround(extent_m / kCellSize));
  if (side < kMinRoomCells) {
    throw Error("generate_house: infeasible, extent too small for one room");
  }

  Rng rng(mix_seed(seed, 1));
  std::vector<Room> leaves{Room{"", 0, 0, side, side}};
  std::vector<Split> splits;

  while (static_cast<int>(leaves.size()) < n_rooms) {
    // Split the largest room that can still hold two minimum-size rooms.
    int best = -1;
    long best_area = -1;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const Room& r = leaves[i];
      const int w = r.x1 - r.x0;
      const int h = r.y1 - r.y0;
      if (std::max(w, h) < 2 * kMinRoomCells) {
        continue;
      }
      const long area = static_cast<long>(w) * h;
      if (area > best_area) {
        best_area = area;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) {
      throw Error("generate_house: infeasible, extent " + std::to_string(extent_m) +
                  " m too small for " + std::to_string(n_rooms) + " rooms");
    }
    Room room = leaves[static_cast<std::size_t>(best)];
    const int w = room.x1 - room.x0;
    const int h = room.y1 - room.y0;
    bool vertical = w > h;
    if (w == h) {
      vertical = rng.index(2) == 0;
    }
    if (vertical && w < 2 * kMinRoomCells) vertical = false;
    if (!vertical && h < 2 * kMinRoomCells) vertical = true;

    const int len = vertical ? w : h;
    const int offset =
        kMinRoomCells + static_cast<int>(rng.index(static_cast<std::uint64_t>(len - 2 * kMinRoomCells + 1)));
    Room low = room;
    Room high = room;
    if (vertical) {
      const int at = room.x0 + offset;
      low.x1 = at;
      high.x0 = at;
      splits.push_back({true, at, room.y0, room.y1});
    } else {
      const int at = room.y0 + offset;
      low.y1 = at;
      high.y0 = at;
      splits.push_back({false, at, room.x0, room.x1});
    }
    leaves[static_cast<std::size_t>(best)] = low;
    leaves.push_back(high);
  }

  for (std::size_t i = 0; i < leaves.size(); ++i) {
    leaves[i].label = "room_" + std::to_string(i);
  }

  // Each room walls off its high-x column and high-y row unless they lie on
  // the house boundary.
  std::vector<std::uint8_t> free(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), 1);
  auto at = [&](int x, int y) -> std::uint8_t& {
    return free[static_cast<std::size_t>(y) * static_cast<std::size_t>(side) +
                static_cast<std::size_t>(x)];
  };
  for (const Room& r : leaves) {
    if (r.x1 < side) {
      for (int y = r.y0; y < r.y1; ++y) at(r.x1 - 1, y) = 0;
    }
    if (r.y1 < side) {
      for (int x = r.x0; x < r.x1; ++x) at(x, r.y1 - 1) = 0;
    }
  }

  // One doorway per split, between the two rooms that meet at the start of
  // the split line; both start there, so they overlap by >= kMinRoomCells.
  for (const Split& s : splits) {
    const Cell low_cell = s.vertical ? Cell{s.at - 1, s.lo} : Cell{s.lo, s.at - 1};
    const Cell high_cell = s.vertical ? Cell{s.at, s.lo} : Cell{s.lo, s.at};
    const Room& a = leaves[static_cast<std::size_t>(leaf_containing(leaves, low_cell))];
    const Room& b = leaves[static_cast<std::size_t>(leaf_containing(leaves, high_cell))];
    const int overlap_end = s.vertical ? std::min(a.y1, b.y1) : std::min(a.x1, b.x1);
    // Skip the last overlapping cell: it may be a room's own wall row/column.
    const int door =
        s.lo + static_cast<int>(rng.index(static_cast<std::uint64_t>(overlap_end - 1 - s.lo)));
    if (s.vertical) {
      at(s.at - 1, door) = 1;
    } else {
      at(door, s.at - 1) = 1;
    }
  }

  return House(side, side, std::move(free), std::move(leaves), seed);
}

std::string house_to_json(const House& house) {
  nlohmann::ordered_json j;
  j["width"] = house.width();
  j["height"] = house.height();
  j["cell_size"] = kCellSize;
  j["seed"] = house.seed();
  j["rooms"] = nlohmann::ordered_json::array();
  for (const Room& r : house.rooms()) {
    j["rooms"].push_back({{"label", r.label}, {"x0", r.x0}, {"y0", r.y0}, {"x1", r.x1}, {"y1", r.y1}});
  }
  auto rle = nlohmann::ordered_json::array();
  const auto& grid = house.grid();
  for (std::size_t i = 0; i < grid.size();) {
    std::size_t run = 1;
    while (i + run < grid.size() && grid[i + run] == grid[i]) ++run;
    rle.push_back({grid[i], run});
    i += run;
  }
  j["grid_rle"] = std::move(rle);
  return j.dump();
}

House house_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int width = j.at("width").get<int>();
    const int height = j.at("height").get<int>();
    std::vector<Room> rooms;
    for (const auto& r : j.at("rooms")) {
      rooms.push_back({r.at("label").get<std::string>(), r.at("x0").get<int>(), r.at("y0").get<int>(),
                       r.at("x1").get<int>(), r.at("y1").get<int>()});
    }
    std::vector<std::uint8_t> grid;
    for (const auto& run : j.at("grid_rle")) {
      grid.insert(grid.end(), run.at(1).get<std::size_t>(), run.at(0).get<std::uint8_t>());
    }
    return House(width, height, std::move(grid), std::move(rooms), j.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed house JSON: ") + e.what());
  }
}

}  // namespace navmem
