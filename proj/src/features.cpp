#include "navmem/rng.hpp"
#include "navmem/simulator.hpp"

#include <cmath>
#include <numbers>

namespace navmem {

void FeatureSynthConfig::validate() const {
  if (feat_dim == 0 || n_basis == 0) {
    throw Error("feature synth: feat_dim and n_basis must be positive");
  }
  if (!std::isfinite(length_scale_m) || length_scale_m <= 0.0 ||
      !std::isfinite(heading_scale_deg) || heading_scale_deg <= 0.0) {
    throw Error("feature synth: scales must be finite and positive");
  }
}

FeatureSynthesizer::FeatureSynthesizer(const FeatureSynthConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  Rng rng(mix_seed(cfg_.seed, 2));
  freq_.resize(cfg_.n_basis * 4);
  phase_.resize(cfg_.n_basis);
  project_.resize(cfg_.feat_dim * cfg_.n_basis);
  for (double& f : freq_) f = rng.normal();
  for (double& p : phase_) p = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (double& m : project_) m = rng.normal();
}

FeatureTokens FeatureSynthesizer::operator()(const Position& position, double heading_deg) const {
  // Heading enters through (cos, sin) so the map is periodic; on the unit
  // circle chord length ~ angle for small turns, hence the radian scale.
  const double heading = heading_deg * std::numbers::pi / 180.0;
  const double heading_scale = cfg_.heading_scale_deg * std::numbers::pi / 180.0;
  const double z[4] = {position.x / cfg_.length_scale_m, position.y / cfg_.length_scale_m,
                       std::cos(heading) / heading_scale, std::sin(heading) / heading_scale};

  std::vector<double> basis(cfg_.n_basis);
  for (std::size_t k = 0; k < cfg_.n_basis; ++k) {
    const double* w = &freq_[k * 4];
    basis[k] = std::cos(w[0] * z[0] + w[1] * z[1] + w[2] * z[2] + w[3] * z[3] + phase_[k]);
  }

  std::vector<double> out(cfg_.feat_dim, 0.0);
  double sq = 0.0;
  for (std::size_t r = 0; r < cfg_.feat_dim; ++r) {
    double acc = 0.0;
    for (std::size_t k = 0; k < cfg_.n_basis; ++k) {
      acc += project_[r * cfg_.n_basis + k] * basis[k];
    }
    out[r] = acc;
    sq += acc * acc;
  }
  const double len = std::sqrt(sq);
  if (len > 0.0) {
    for (double& v : out) v /= len;
  }
  return FeatureTokens(1, cfg_.feat_dim, std::move(out));
}

FeatureTokens synth_features(const Position& position, double heading_deg,
                             const FeatureSynthConfig& cfg) {
  return FeatureSynthesizer(cfg)(position, heading_deg);
}

}  // namespace navmem
