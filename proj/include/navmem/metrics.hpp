#ifndef NAVMEM_METRICS_HPP
#define NAVMEM_METRICS_HPP

#include "navmem/types.hpp"

#include <span>
#include <vector>

namespace navmem {

/// Size of the discrete action space used for behavior cloning.
inline constexpr std::size_t kActionSpaceSize = 20;

/// Mean of the success flags. Throws Error on an empty set.
double success_rate(std::span<const Episode> episodes);

/// Episode-length weighted success: mean of S_i * w_i / max(w_i, e_i).
double sel(std::span<const Episode> episodes);

/// Contribution of one episode to sel().
double sel_term(const Episode& episode);

/// Mean over episodes of 100 * |rooms_visited| / total_rooms.
double pct_rooms(std::span<const Episode> episodes);

/// -ln p[target]; throws Error on an invalid distribution or target.
double cross_entropy(std::span<const double> probs, std::size_t target);

/// Sum of per-step cross-entropies over one expert trajectory.
double action_loss(std::span<const double> per_step_ce);

/// Negated sum of answer-token log-probabilities.
double answer_loss(std::span<const double> token_logprobs);

struct ObjectiveInputs {
  std::vector<double> action_losses;
  std::vector<double> answer_token_logprobs;
  double occ_loss = 0.0;
  double lambda_occ = 0.0;
};

/// action_loss + answer_loss + lambda_occ * occ_loss.
double composite_objective(const ObjectiveInputs& inp);

}  // namespace navmem

#endif  // NAVMEM_METRICS_HPP
