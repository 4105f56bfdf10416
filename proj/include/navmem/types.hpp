#ifndef NAVMEM_TYPES_HPP
#define NAVMEM_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace navmem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using FeatureVector = std::vector<double>;

/// Absolute or relative agent position in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Position&) const = default;

  bool finite() const;
};

Position operator-(const Position& a, const Position& b);

/// Euclidean norm of a position delta.
double norm(const Position& p);

/// Token matrix of one observation, row-major, n_tokens x feat_dim.
class FeatureTokens {
 public:
  FeatureTokens() = default;

  /// Throws Error if the matrix is empty, ragged or has non-finite entries.
  explicit FeatureTokens(const std::vector<FeatureVector>& rows);
  FeatureTokens(std::size_t n_tokens, std::size_t feat_dim, std::vector<double> values);

  std::size_t n_tokens() const { return n_tokens_; }
  std::size_t feat_dim() const { return feat_dim_; }
  bool empty() const { return n_tokens_ == 0; }

  std::span<const double> token(std::size_t i) const {
    return {values_.data() + i * feat_dim_, feat_dim_};
  }
  const std::vector<double>& values() const { return values_; }

  std::vector<FeatureVector> rows() const;

  bool operator==(const FeatureTokens&) const = default;

 private:
  std::size_t n_tokens_ = 0;
  std::size_t feat_dim_ = 0;
  std::vector<double> values_;
};

struct Observation {
  std::int64_t t = 0;
  Position position;
  double heading_deg = 0.0;
  FeatureTokens features;
  std::optional<std::string> room_id;
  std::optional<std::string> action;

  bool operator==(const Observation&) const = default;
};

/// Chronological observation queue; index 0 is the initial step, the last
/// entry is the current step. Invariants are enforced on construction.
class Trajectory {
 public:
  using Meta = std::map<std::string, std::string>;

  Trajectory() = default;
  explicit Trajectory(std::vector<Observation> observations, Meta meta = {});

  const std::vector<Observation>& observations() const { return observations_; }
  const Observation& operator[](std::size_t i) const { return observations_[i]; }
  const Observation& back() const { return observations_.back(); }
  std::size_t size() const { return observations_.size(); }
  bool empty() const { return observations_.empty(); }
  const Meta& meta() const { return meta_; }

  /// Feature dimension shared by every observation, 0 when empty.
  std::size_t feat_dim() const;

  bool operator==(const Trajectory&) const = default;

 private:
  std::vector<Observation> observations_;
  Meta meta_;
};

/// Maximum height drift tolerated within one trajectory, meters.
inline constexpr double kHeightTolerance = 1e-9;

struct SamplerConfig {
  std::size_t window_w = 60;
  double epsilon_m = 0.1;
  double tau = 0.95;
  bool pool_before_compare = true;
  // Length of the zero vectors emitted when the history is empty.
  std::size_t dummy_dim = 0;

  /// Throws Error on W = 0, negative or non-finite epsilon, tau outside [-1, 1].
  void validate() const;
};

/// Fixed-length sampler output, newest entry first.
struct SampledHistory {
  std::size_t w = 0;
  std::size_t n_valid = 0;
  std::vector<std::int64_t> source_t;
  std::vector<Position> rel_positions;
  std::vector<FeatureVector> features;

  std::size_t n_padded() const { return w - n_valid; }

  bool operator==(const SampledHistory&) const = default;
};

struct Episode {
  bool success = false;
  double shortest_len = 1.0;
  double episode_len = 1.0;
  std::set<std::string> rooms_visited;
  int total_rooms = 1;

  bool operator==(const Episode&) const = default;
};

}  // namespace navmem

#endif  // NAVMEM_TYPES_HPP
