#ifndef NAVMEM_POSENC_HPP
#define NAVMEM_POSENC_HPP

#include "navmem/types.hpp"

#include <span>
#include <vector>

namespace navmem {

/// Axis-separated sinusoidal encoding of (x, y). `feat_dim` is the total
/// encoding length c; each axis gets d = c / 2 entries of interleaved
/// sin/cos pairs, so c must be a positive multiple of 4.
struct PosEncConfig {
  std::size_t feat_dim = 1024;
  double base = 10000.0;

  void validate() const;
  std::size_t axis_dim() const { return feat_dim / 2; }
};

/// Fully connected map applied after adding the encoding. Defaults to the
/// identity, since no trained weights exist at this scale.
class AffineFusion {
 public:
  static AffineFusion identity(std::size_t dim);
  AffineFusion(std::size_t dim, std::vector<double> weight_row_major, std::vector<double> bias);

  std::size_t dim() const { return dim_; }
  FeatureVector apply(std::span<const double> v) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> weight_;
  std::vector<double> bias_;
};

/// omega_k = exp(-2k ln(base) / d) for k = 0 .. d/2 - 1.
std::vector<double> frequencies(const PosEncConfig& cfg);

/// Length-d vector: even m -> sin(v * omega_{m/2}), odd m -> cos(v * omega_{m/2}).
std::vector<double> encode_axis(double v, const PosEncConfig& cfg);

/// encode_axis(x) followed by encode_axis(y); length c. Height is not encoded.
std::vector<double> encode_2d(double x, double y, const PosEncConfig& cfg);

/// fusion(feature + encode_2d(rel_pos.x, rel_pos.y)).
FeatureVector fuse_position(std::span<const double> feature, const Position& rel_pos,
                            const PosEncConfig& cfg, const AffineFusion& fusion);

}  // namespace navmem

#endif  // NAVMEM_POSENC_HPP
