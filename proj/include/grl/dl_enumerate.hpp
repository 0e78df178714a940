#pragma once

#include <span>
#include <vector>

#include "grl/dl.hpp"
#include "grl/relational.hpp"

namespace grl::dl {

/// Every concept and distance feature derivable from the domain's predicates
/// with complexity <= max_complexity, keeping one representative per
/// denotation signature over `samples` (lowest complexity, then lexicographic).
/// Concepts are built bottom-up from retained lower-complexity concepts and
/// roles. Output is in canonical order with ids 0..n-1.
std::vector<Feature> enumerate_features(const Domain& domain, const ObjectUniverse& universe,
                                        std::span<const RelationalState> samples, int max_complexity);

} // namespace grl::dl
