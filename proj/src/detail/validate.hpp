#ifndef NAVMEM_DETAIL_VALIDATE_HPP
#define NAVMEM_DETAIL_VALIDATE_HPP

#include "navmem/types.hpp"

#include <optional>
#include <string>

namespace navmem::detail {

// Returns the first trajectory invariant broken by `obs`, given its
// predecessor and the trajectory's first observation (both null for index 0).
std::optional<std::string> check_observation(const Observation& obs, const Observation* prev,
                                             const Observation* first);

}  // namespace navmem::detail

#endif  // NAVMEM_DETAIL_VALIDATE_HPP
