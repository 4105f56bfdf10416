// Reference implementation of adaptive history sampling, written as a
// direct transcription of the textbook greedy loop (V, P, k, the reverse
// scan, the existence test, padding). Shares no helpers with sampler.cpp.
// See the floating-point contract at the top of sampler.cpp.

#include "navmem/sampler.hpp"

#include <cmath>

namespace navmem {

namespace {

FeatureVector pool_tokens(const FeatureTokens& v) {
  FeatureVector out(v.feat_dim());
  for (std::size_t k = 0; k < v.feat_dim(); ++k) {
    double m = v.token(0)[k];
    for (std::size_t r = 1; r < v.n_tokens(); ++r) {
      if (m < v.token(r)[k]) {
        m = v.token(r)[k];
      }
    }
    out[k] = m;
  }
  return out;
}

// Zero-norm features never count as the same view.
bool same_view(std::span<const double> a, std::span<const double> b, double tau) {
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    aa += a[k] * a[k];
  }
  for (std::size_t k = 0; k < b.size(); ++k) {
    bb += b[k] * b[k];
  }
  const double na = std::sqrt(aa);
  const double nb = std::sqrt(bb);
  if (na == 0.0 || nb == 0.0) {
    return false;
  }
  double c = ab / (na * nb);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c > tau;
}

double dist(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

SampledHistory oracle_sample(const Trajectory& traj, const SamplerConfig& cfg) {
  cfg.validate();
  const std::size_t W = cfg.window_w;
  const auto& G = traj.observations();

  std::vector<FeatureVector> V;
  std::vector<Position> P;
  std::vector<std::int64_t> T;

  if (G.empty()) {
    // dummy data
    SampledHistory out;
    out.w = W;
    out.n_valid = 0;
    for (std::size_t s = 0; s < W; ++s) {
      out.features.push_back(FeatureVector(cfg.dummy_dim, 0.0));
      out.rel_positions.push_back({0.0, 0.0, 0.0});
      out.source_t.push_back(-1);
    }
    return out;
  }

  const Position p_ref = G[G.size() - 1].position;
  std::size_t k = 0;
  for (std::int64_t i = static_cast<std::int64_t>(G.size()) - 1; i >= 0; --i) {
    const Observation& g = G[static_cast<std::size_t>(i)];
    const Position p_rel{g.position.x - p_ref.x, g.position.y - p_ref.y, g.position.z - p_ref.z};

    bool skip = false;
    if (i < static_cast<std::int64_t>(G.size()) - 1) {
      for (std::size_t j = 0; j < k; ++j) {
        bool similar = false;
        if (cfg.pool_before_compare) {
          similar = same_view(pool_tokens(g.features), V[j], cfg.tau);
        } else {
          for (std::size_t r = 0; r < g.features.n_tokens(); ++r) {
            if (same_view(g.features.token(r), V[j], cfg.tau)) {
              similar = true;
            }
          }
        }
        if (dist(p_rel, P[j]) < cfg.epsilon_m && similar) {
          skip = true;
        }
      }
    }
    if (skip) {
      continue;
    }

    V.push_back(pool_tokens(g.features));
    P.push_back(p_rel);
    T.push_back(g.t);
    k = k + 1;
    if (k == W) {
      break;
    }
  }

  SampledHistory out;
  out.w = W;
  out.n_valid = k;
  while (k < W) {
    // padding with last valid frame
    V.push_back(V.back());
    P.push_back(P.back());
    T.push_back(T.back());
    k = k + 1;
  }
  out.features = std::move(V);
  out.rel_positions = std::move(P);
  out.source_t = std::move(T);
  return out;
}

}  // namespace navmem
