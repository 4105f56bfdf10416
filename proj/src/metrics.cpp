#include "navmem/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace navmem {

namespace {

void require_non_empty(std::span<const Episode> episodes, const char* what) {
  if (episodes.empty()) {
    throw Error(std::string(what) + ": empty episode set");
  }
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(std::string(what) + ": non-finite value");
    }
  }
}

}  // namespace

double success_rate(std::span<const Episode> episodes) {
  require_non_empty(episodes, "success_rate");
  const auto hits = std::count_if(episodes.begin(), episodes.end(),
                                  [](const Episode& e) { return e.success; });
  return static_cast<double>(hits) / static_cast<double>(episodes.size());
}

double sel_term(const Episode& episode) {
  if (!(episode.shortest_len > 0.0) || !(episode.episode_len > 0.0) ||
      !std::isfinite(episode.shortest_len) || !std::isfinite(episode.episode_len)) {
    throw Error("sel: episode lengths must be positive and finite");
  }
  if (!episode.success) {
    return 0.0;
  }
  return episode.shortest_len / std::max(episode.shortest_len, episode.episode_len);
}

double sel(std::span<const Episode> episodes) {
  require_non_empty(episodes, "sel");
  double sum = 0.0;
  for (const auto& ep : episodes) {
    sum += sel_term(ep);
  }
  return sum / static_cast<double>(episodes.size());
}

double pct_rooms(std::span<const Episode> episodes) {
  require_non_empty(episodes, "pct_rooms");
  double sum = 0.0;
  for (const auto& ep : episodes) {
    if (ep.total_rooms < 1) {
      throw Error("pct_rooms: total_rooms must be at least 1");
    }
    if (ep.rooms_visited.size() > static_cast<std::size_t>(ep.total_rooms)) {
      throw Error("pct_rooms: rooms_visited exceeds total_rooms");
    }
    sum += 100.0 * static_cast<double>(ep.rooms_visited.size()) / ep.total_rooms;
  }
  return sum / static_cast<double>(episodes.size());
}

double cross_entropy(std::span<const double> probs, std::size_t target) {
  if (target >= probs.size()) {
    throw Error("cross_entropy: target out of range");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error("cross_entropy: invalid probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("cross_entropy: probabilities do not sum to 1");
  }
  return -std::log(probs[target]);
}

double action_loss(std::span<const double> per_step_ce) {
  require_finite(per_step_ce, "action_loss");
  double sum = 0.0;
  for (double ce : per_step_ce) {
    sum += ce;
  }
  return sum;
}

double answer_loss(std::span<const double> token_logprobs) {
  require_finite(token_logprobs, "answer_loss");
  double sum = 0.0;
  for (double lp : token_logprobs) {
    if (lp > 0.0) {
      throw Error("answer_loss: log-probability must be <= 0");
    }
    sum += lp;
  }
  return -sum;
}

double composite_objective(const ObjectiveInputs& inp) {
  if (!std::isfinite(inp.occ_loss) || inp.occ_loss < 0.0 || !std::isfinite(inp.lambda_occ) ||
      inp.lambda_occ < 0.0) {
    throw Error("composite_objective: occ_loss and lambda_occ must be finite and >= 0");
  }
  return action_loss(inp.action_losses) + answer_loss(inp.answer_token_logprobs) +
         inp.lambda_occ * inp.occ_loss;
}

}  // namespace navmem
