#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "grl/dynamics.hpp"
#include "grl/instance.hpp"

namespace grl::domains {

std::vector<std::shared_ptr<const Dynamics>> builtin_dynamics();

std::shared_ptr<const Dynamics> make_sysadmin();
std::shared_ptr<const Dynamics> make_academic_advising();
std::shared_ptr<const Dynamics> make_game_of_life();
std::shared_ptr<const Dynamics> make_wildfire();

/// Objects o with unary(o) in the state.
std::set<std::string> holding(const RelationalState& state, std::string_view unary);

/// For each first argument x of binary(x, y) in `facts`, the list of y.
std::map<std::string, std::vector<std::string>> successors(const std::set<GroundFact>& facts,
                                                           std::string_view binary);

/// For each second argument y of binary(x, y) in `facts`, the list of x.
std::map<std::string, std::vector<std::string>> predecessors(const std::set<GroundFact>& facts,
                                                             std::string_view binary);

inline bool acts_on(const GroundAction& action, std::string_view schema, const std::string& object) {
    return action.schema == schema && action.args.size() == 1 && action.args[0] == object;
}

} // namespace grl::domains
