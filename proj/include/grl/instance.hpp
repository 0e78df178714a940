#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "grl/relational.hpp"

namespace grl {

/// One problem instance: domain, objects, topology, initial fluents and the
/// simulator constants.
struct InstanceSpec {
    std::string name;
    Domain domain;
    ObjectUniverse universe;
    std::set<GroundFact> initial_facts;
    std::set<GroundFact> static_facts;
    int horizon = 40;
    std::uint64_t seed = 0;
    /// Domain defaults merged with the file's overrides.
    std::map<std::string, double> params;
    /// True when the registered domain had no nop() and one was added.
    bool nop_injected = false;

    double param(std::string_view key) const;
};

/// Parses the line-oriented instance format (see docs/instance_format.md).
/// Every error is a ParseError carrying the offending line and column.
InstanceSpec parse_instance(std::string_view text);

InstanceSpec load_instance(const std::filesystem::path& path);

/// Canonical text form; parse_instance(format_instance(s)) reproduces s.
std::string format_instance(const InstanceSpec& spec);

/// Checks facts, horizon and params against the domain's registered dynamics.
void validate_instance(const InstanceSpec& spec);

} // namespace grl
