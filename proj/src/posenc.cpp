#include "navmem/posenc.hpp"

#include <cmath>

namespace navmem {

void PosEncConfig::validate() const {
  if (feat_dim == 0 || feat_dim % 4 != 0) {
    throw Error("positional encoding dimension must be a positive multiple of 4");
  }
  if (!std::isfinite(base) || base <= 0.0) {
    throw Error("positional encoding base must be finite and positive");
  }
}

AffineFusion AffineFusion::identity(std::size_t dim) {
  std::vector<double> w(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    w[i * dim + i] = 1.0;
  }
  return AffineFusion(dim, std::move(w), std::vector<double>(dim, 0.0));
}

AffineFusion::AffineFusion(std::size_t dim, std::vector<double> weight_row_major,
                           std::vector<double> bias)
    : dim_(dim), weight_(std::move(weight_row_major)), bias_(std::move(bias)) {
  if (weight_.size() != dim_ * dim_ || bias_.size() != dim_) {
    throw Error("affine fusion: weight must be dim x dim and bias length dim");
  }
  for (double v : weight_) {
    if (!std::isfinite(v)) throw Error("affine fusion: non-finite weight");
  }
  for (double v : bias_) {
    if (!std::isfinite(v)) throw Error("affine fusion: non-finite bias");
  }
}

FeatureVector AffineFusion::apply(std::span<const double> v) const {
  if (v.size() != dim_) {
    throw Error("affine fusion: dimension mismatch");
  }
  FeatureVector out(bias_);
  for (std::size_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
      acc += weight_[r * dim_ + c] * v[c];
    }
    out[r] += acc;
  }
  return out;
}

std::vector<double> frequencies(const PosEncConfig& cfg) {
  cfg.validate();
  const double d = static_cast<double>(cfg.axis_dim());
  std::vector<double> omega(cfg.axis_dim() / 2);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    omega[k] = std::exp(-2.0 * static_cast<double>(k) * std::log(cfg.base) / d);
  }
  return omega;
}

std::vector<double> encode_axis(double v, const PosEncConfig& cfg) {
  if (!std::isfinite(v)) {
    throw Error("encode_axis: non-finite coordinate");
  }
  const auto omega = frequencies(cfg);
  std::vector<double> out(cfg.axis_dim());
  for (std::size_t m = 0; m < out.size(); ++m) {
    const double angle = v * omega[m / 2];
    out[m] = (m % 2 == 0) ? std::sin(angle) : std::cos(angle);
  }
  return out;
}

std::vector<double> encode_2d(double x, double y, const PosEncConfig& cfg) {
  auto out = encode_axis(x, cfg);
  const auto py = encode_axis(y, cfg);
  out.insert(out.end(), py.begin(), py.end());
  return out;
}

FeatureVector fuse_position(std::span<const double> feature, const Position& rel_pos,
                            const PosEncConfig& cfg, const AffineFusion& fusion) {
  if (feature.size() != cfg.feat_dim || fusion.dim() != cfg.feat_dim) {
    throw Error("fuse_position: dimension mismatch");
  }
  const auto pe = encode_2d(rel_pos.x, rel_pos.y, cfg);
  FeatureVector sum(feature.begin(), feature.end());
  for (std::size_t k = 0; k < sum.size(); ++k) {
    sum[k] += pe[k];
  }
  return fusion.apply(sum);
}

}  // namespace navmem
