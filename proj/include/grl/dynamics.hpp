#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "grl/relational.hpp"
#include "grl/rng.hpp"

namespace grl {

struct InstanceSpec;

/// Transition and reward model of one domain. Implementations are stateless;
/// all randomness comes from the Rng argument. `nop()` is always passed
/// through and means no intervention.
class Dynamics {
public:
    virtual ~Dynamics() = default;

    virtual const Domain& domain() const = 0;

    /// Predicates that describe fixed topology (links, neighbors, prerequisites).
    /// They may only appear in `static:` and are never changed by a step.
    virtual std::vector<std::string> static_predicates() const = 0;

    /// Probability and reward constants; instance files may override them.
    virtual std::map<std::string, double> default_params() const { return {}; }

    /// Initial fluents used when an instance file has no `init:` section.
    virtual std::set<GroundFact> default_init(const ObjectUniverse& universe,
                                              const std::set<GroundFact>& static_facts) const;

    virtual double reward(const InstanceSpec& spec, const RelationalState& state,
                          const GroundAction& action) const = 0;

    virtual RelationalState sample_next(const InstanceSpec& spec, const RelationalState& state,
                                        const GroundAction& action, Rng& rng) const = 0;
};

/// Registers (or replaces) the dynamics for `dynamics->domain().name()`.
void register_dynamics(std::shared_ptr<const Dynamics> dynamics);

/// Throws ValidationError for an unregistered domain name.
std::shared_ptr<const Dynamics> find_dynamics(std::string_view domain_name);

std::vector<std::string> registered_domains();

} // namespace grl

namespace grl::domain_names {
inline constexpr std::string_view sysadmin = "sysadmin";
inline constexpr std::string_view academic_advising = "academic_advising";
inline constexpr std::string_view game_of_life = "game_of_life";
inline constexpr std::string_view wildfire = "wildfire";
} // namespace grl::domain_names
