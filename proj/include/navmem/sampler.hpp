#ifndef NAVMEM_SAMPLER_HPP
#define NAVMEM_SAMPLER_HPP

#include "navmem/types.hpp"

#include <span>

namespace navmem {

/// Per-dimension maximum over the tokens of one observation.
FeatureVector max_pool(const FeatureTokens& features);

/// a.b / (|a||b|), clamped to [-1, 1]. Throws Error on a length mismatch
/// or a zero-norm operand.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Adaptive 3D-aware history sampling.
///
/// Walks the trajectory from the current (last) frame back to the first,
/// expressing positions relative to the current frame. A frame is dropped
/// when some already selected entry lies strictly closer than epsilon_m
/// AND has cosine similarity strictly above tau with it; the current frame
/// is always kept. Kept frames are max-pooled. Selection stops at
/// window_w entries, and a short result is padded by repeating its last
/// entry. An empty trajectory yields window_w zero-feature dummy slots
/// with source_t = -1 and n_valid = 0.
///
/// Zero-norm pooled features never count as similar to anything.
SampledHistory sample_history(const Trajectory& traj, const SamplerConfig& cfg);

/// Straight transliteration of the sampling procedure with no shortcuts or
/// caching; kept as the equivalence reference for sample_history.
SampledHistory oracle_sample(const Trajectory& traj, const SamplerConfig& cfg);

struct RedundancyStats {
  std::size_t n_total = 0;
  std::size_t n_selected = 0;
  std::size_t n_padded = 0;
  double retained_fraction = 0.0;
  // Pairwise statistics over the non-padded entries; both are 0 when
  // n_pairs is 0.
  std::size_t n_pairs = 0;
  double min_pairwise_dist_m = 0.0;
  double mean_pairwise_cos = 0.0;

  bool operator==(const RedundancyStats&) const = default;
};

RedundancyStats redundancy_stats(const Trajectory& traj, const SampledHistory& history);

std::string stats_to_json(const RedundancyStats& stats);

}  // namespace navmem

#endif  // NAVMEM_SAMPLER_HPP
