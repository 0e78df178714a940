#include "domains/builtin.hpp"

namespace grl::domains {

std::vector<std::shared_ptr<const Dynamics>> builtin_dynamics() {
    return {make_sysadmin(), make_academic_advising(), make_game_of_life(), make_wildfire()};
}

std::set<std::string> holding(const RelationalState& state, std::string_view unary) {
    std::set<std::string> out;
    for (const auto& f : state)
        if (f.predicate == unary && f.args.size() == 1) out.insert(f.args[0]);
    return out;
}

std::map<std::string, std::vector<std::string>> successors(const std::set<GroundFact>& facts,
                                                           std::string_view binary) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& f : facts)
        if (f.predicate == binary && f.args.size() == 2) out[f.args[0]].push_back(f.args[1]);
    return out;
}

std::map<std::string, std::vector<std::string>> predecessors(const std::set<GroundFact>& facts,
                                                             std::string_view binary) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& f : facts)
        if (f.predicate == binary && f.args.size() == 2) out[f.args[1]].push_back(f.args[0]);
    return out;
}

} // namespace grl::domains
