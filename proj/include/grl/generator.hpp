#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "grl/instance.hpp"

namespace grl {

/// Canonical domain name for a name or short alias (sys, aa, gol, wf).
/// Throws ValidationError for anything else.
std::string canonical_domain_name(std::string_view name_or_alias);

/// Problem generator used to build curricula and test instances.
///   sysadmin            SYS(n)      random connected network: spanning tree plus
///                                   extra edges with probability 0.3; all running
///   academic_advising   AA(l,c,p)   l levels of c courses; level > 1 courses get
///                                   p prerequisites from lower levels; all required
///   game_of_life        GoL(x,y)    x*y grid, 8-neighborhood, random live cells
///   wildfire            WF(x,y)     x*y grid, 8-neighborhood, one burning cell
/// Deterministic for fixed (domain, size_params, seed).
InstanceSpec generate_instance(std::string_view domain_name, std::span<const int> size_params,
                               std::uint64_t seed, int horizon = 40);

/// Distinct states visited by uniform-random rollouts, always including s0.
std::set<RelationalState> sample_state_space(const InstanceSpec& spec, int episodes, std::uint64_t seed);

} // namespace grl
