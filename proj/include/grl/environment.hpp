#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "grl/dynamics.hpp"
#include "grl/instance.hpp"
#include "grl/relational.hpp"
#include "grl/rng.hpp"

namespace grl {

struct Transition {
    RelationalState next_state;
    double reward = 0.0;
};

struct StepResult {
    RelationalState next_state;
    double reward = 0.0;
    /// The horizon has been reached.
    bool done = false;
};

/// s0 = initial fluents plus static facts.
RelationalState initial_state(const InstanceSpec& spec);

/// Episode stream derived from (spec.seed, seed).
Rng episode_rng(const InstanceSpec& spec, std::uint64_t seed);

/// Reward for (state, action) and a sampled successor. Throws ValidationError
/// when the action is not a ground action of the instance.
Transition sample_transition(const InstanceSpec& spec, const RelationalState& state,
                             const GroundAction& action, Rng& rng);

/// Episode driver: owns the current state, step counter and episode RNG.
class Environment {
public:
    explicit Environment(InstanceSpec spec);

    const RelationalState& reset(std::uint64_t seed);
    StepResult step(const GroundAction& action);

    const InstanceSpec& spec() const { return spec_; }
    const RelationalState& state() const { return state_; }
    const std::vector<GroundAction>& actions() const { return actions_; }
    int elapsed() const { return elapsed_; }

private:
    InstanceSpec spec_;
    std::vector<GroundAction> actions_;
    RelationalState state_;
    Rng rng_;
    int elapsed_ = 0;
};

} // namespace grl
