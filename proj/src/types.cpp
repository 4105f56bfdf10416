#include "navmem/types.hpp"

#include "detail/validate.hpp"

#include <cmath>
#include <string>

namespace navmem {

bool Position::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

Position operator-(const Position& a, const Position& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

double norm(const Position& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }

FeatureTokens::FeatureTokens(const std::vector<FeatureVector>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error("empty feature token matrix");
  }
  n_tokens_ = rows.size();
  feat_dim_ = rows.front().size();
  values_.reserve(n_tokens_ * feat_dim_);
  for (const auto& row : rows) {
    if (row.size() != feat_dim_) {
      throw Error("ragged feature token matrix");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw Error("non-finite feature value");
      }
      values_.push_back(v);
    }
  }
}

FeatureTokens::FeatureTokens(std::size_t n_tokens, std::size_t feat_dim,
                             std::vector<double> values)
    : n_tokens_(n_tokens), feat_dim_(feat_dim), values_(std::move(values)) {
  if (n_tokens_ == 0 || feat_dim_ == 0) {
    throw Error("empty feature token matrix");
  }
  if (values_.size() != n_tokens_ * feat_dim_) {
    throw Error("feature token matrix size mismatch");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error("non-finite feature value");
    }
  }
}

std::vector<FeatureVector> FeatureTokens::rows() const {
  std::vector<FeatureVector> out;
  out.reserve(n_tokens_);
  for (std::size_t i = 0; i < n_tokens_; ++i) {
    auto tok = token(i);
    out.emplace_back(tok.begin(), tok.end());
  }
  return out;
}

Trajectory::Trajectory(std::vector<Observation> observations, Meta meta)
    : observations_(std::move(observations)), meta_(std::move(meta)) {
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    const Observation* prev = i == 0 ? nullptr : &observations_[i - 1];
    if (auto why = detail::check_observation(observations_[i], prev, i == 0 ? nullptr : &observations_[0])) {
      throw Error(*why + " at index " + std::to_string(i));
    }
  }
}

std::size_t Trajectory::feat_dim() const {
  return observations_.empty() ? 0 : observations_.front().features.feat_dim();
}

void SamplerConfig::validate() const {
  if (window_w < 1) {
    throw Error("window size must be at least 1");
  }
  if (!std::isfinite(epsilon_m) || epsilon_m < 0.0) {
    throw Error("epsilon must be finite and non-negative");
  }
  if (!std::isfinite(tau) || tau < -1.0 || tau > 1.0) {
    throw Error("tau must lie in [-1, 1]");
  }
}

namespace detail {

std::optional<std::string> check_observation(const Observation& obs, const Observation* prev,
                                             const Observation* first) {
  if (obs.features.empty()) {
    return "empty feature token matrix";
  }
  if (!obs.position.finite()) {
    return "non-finite position";
  }
  if (!std::isfinite(obs.heading_deg) || obs.heading_deg < 0.0 || obs.heading_deg >= 360.0) {
    return "heading out of range [0, 360)";
  }
  const std::int64_t expected_t = prev == nullptr ? 0 : prev->t + 1;
  if (obs.t != expected_t) {
    return std::string("non-contiguous timestep");
  }
  if (first != nullptr) {
    if (std::abs(obs.position.z - first->position.z) > kHeightTolerance) {
      return "non-constant height";
    }
    if (obs.features.feat_dim() != first->features.feat_dim()) {
      return "feature dimension mismatch";
    }
  }
  return std::nullopt;
}

}  // namespace detail

}  // namespace navmem
