#include "navmem/sampler.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

// Floating-point contract shared with oracle.cpp: dot products and squared
// norms accumulate left to right, norms are sqrt of that sum, cosine is
// dot / (|a| * |b|) clamped to [-1, 1], and distance is
// sqrt(dx*dx + dy*dy + dz*dz) on the difference of relative positions.
// Equal expressions give bit-identical decisions in both implementations.

namespace navmem {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += a[k] * b[k];
  }
  return acc;
}

double l2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Cosine with precomputed norms; 0 when either norm is zero.
double cosine_with_norms(std::span<const double> a, double norm_a, std::span<const double> b,
                         double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) {
    return 0.0;
  }
  return std::clamp(dot(a, b) / (norm_a * norm_b), -1.0, 1.0);
}

// Zero-norm features never count as the same view, whatever tau is.
bool same_view(std::span<const double> a, double norm_a, std::span<const double> b, double norm_b,
               double tau) {
  return norm_a != 0.0 && norm_b != 0.0 && cosine_with_norms(a, norm_a, b, norm_b) > tau;
}

struct Selected {
  FeatureVector pooled;
  double norm = 0.0;
  Position rel;
  std::int64_t t = 0;
};

// Exact test for |a - b| < eps, with a per-axis early reject that can only
// fire when the exact distance is at least eps.
bool strictly_within(const Position& a, const Position& b, double eps, double reject_bound) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  if (std::abs(dx) > reject_bound || std::abs(dy) > reject_bound || std::abs(dz) > reject_bound) {
    return false;
  }
  return std::sqrt(dx * dx + dy * dy + dz * dz) < eps;
}

SampledHistory dummy_history(std::size_t w, std::size_t dim) {
  SampledHistory out;
  out.w = w;
  out.n_valid = 0;
  out.source_t.assign(w, -1);
  out.rel_positions.assign(w, Position{});
  out.features.assign(w, FeatureVector(dim, 0.0));
  return out;
}

}  // namespace

FeatureVector max_pool(const FeatureTokens& features) {
  if (features.empty()) {
    throw Error("max_pool: empty token matrix");
  }
  auto first = features.token(0);
  FeatureVector out(first.begin(), first.end());
  for (std::size_t i = 1; i < features.n_tokens(); ++i) {
    auto tok = features.token(i);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = std::max(out[k], tok[k]);
    }
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("cosine_similarity: length mismatch");
  }
  const double na = l2(a);
  const double nb = l2(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error("cosine_similarity: zero-norm vector");
  }
  return cosine_with_norms(a, na, b, nb);
}

SampledHistory sample_history(const Trajectory& traj, const SamplerConfig& cfg) {
  cfg.validate();
  const std::size_t w = cfg.window_w;
  if (traj.empty()) {
    return dummy_history(w, cfg.dummy_dim);
  }

  const std::size_t n = traj.size();
  const Position ref = traj.back().position;
  // With eps = 0 no distance is < eps; with tau = 1 no clamped cosine is > tau.
  const bool can_skip = cfg.epsilon_m > 0.0 && cfg.tau < 1.0;
  const double reject_bound = cfg.epsilon_m * (1.0 + 1e-9);

  std::vector<Selected> selected;
  selected.reserve(std::min(n, w));

  for (std::size_t i = n; i-- > 0 && selected.size() < w;) {
    const Observation& obs = traj[i];
    const Position rel = obs.position - ref;

    FeatureVector pooled;
    double pooled_norm = 0.0;
    bool have_pooled = false;
    auto ensure_pooled = [&] {
      if (!have_pooled) {
        pooled = max_pool(obs.features);
        pooled_norm = l2(pooled);
        have_pooled = true;
      }
    };

    if (can_skip && i + 1 < n) {
      bool redundant = false;
      for (const Selected& s : selected) {
        if (!strictly_within(rel, s.rel, cfg.epsilon_m, reject_bound)) {
          continue;
        }
        if (cfg.pool_before_compare) {
          ensure_pooled();
          redundant = same_view(pooled, pooled_norm, s.pooled, s.norm, cfg.tau);
        } else {
          for (std::size_t k = 0; k < obs.features.n_tokens() && !redundant; ++k) {
            auto tok = obs.features.token(k);
            redundant = same_view(tok, l2(tok), s.pooled, s.norm, cfg.tau);
          }
        }
        if (redundant) {
          break;
        }
      }
      if (redundant) {
        continue;
      }
    }

    ensure_pooled();
    selected.push_back({std::move(pooled), pooled_norm, rel, obs.t});
  }

  SampledHistory out;
  out.w = w;
  out.n_valid = selected.size();
  out.source_t.reserve(w);
  out.rel_positions.reserve(w);
  out.features.reserve(w);
  for (auto& s : selected) {
    out.source_t.push_back(s.t);
    out.rel_positions.push_back(s.rel);
    out.features.push_back(std::move(s.pooled));
  }
  while (out.features.size() < w) {
    out.source_t.push_back(out.source_t.back());
    out.rel_positions.push_back(out.rel_positions.back());
    out.features.push_back(out.features.back());
  }
  return out;
}

RedundancyStats redundancy_stats(const Trajectory& traj, const SampledHistory& history) {
  RedundancyStats stats;
  stats.n_total = traj.size();
  stats.n_selected = history.n_valid;
  stats.n_padded = history.w - history.n_valid;
  stats.retained_fraction =
      stats.n_total == 0 ? 0.0
                         : static_cast<double>(stats.n_selected) / static_cast<double>(stats.n_total);

  std::vector<double> norms;
  norms.reserve(history.n_valid);
  for (std::size_t a = 0; a < history.n_valid; ++a) {
    norms.push_back(l2(history.features[a]));
  }
  double min_dist = std::numeric_limits<double>::infinity();
  double cos_sum = 0.0;
  for (std::size_t a = 0; a < history.n_valid; ++a) {
    for (std::size_t b = a + 1; b < history.n_valid; ++b) {
      min_dist = std::min(min_dist, norm(history.rel_positions[b] - history.rel_positions[a]));
      cos_sum += cosine_with_norms(history.features[a], norms[a], history.features[b], norms[b]);
      ++stats.n_pairs;
    }
  }
  if (stats.n_pairs > 0) {
    stats.min_pairwise_dist_m = min_dist;
    stats.mean_pairwise_cos = cos_sum / static_cast<double>(stats.n_pairs);
  }
  return stats;
}

std::string stats_to_json(const RedundancyStats& stats) {
  nlohmann::ordered_json j;
  j["n_total"] = stats.n_total;
  j["n_selected"] = stats.n_selected;
  j["n_padded"] = stats.n_padded;
  j["retained_fraction"] = stats.retained_fraction;
  j["n_pairs"] = stats.n_pairs;
  j["min_pairwise_dist_m"] = stats.min_pairwise_dist_m;
  j["mean_pairwise_cos"] = stats.mean_pairwise_cos;
  return j.dump();
}

}  // namespace navmem
