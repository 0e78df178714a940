#include "grl/environment.hpp"

#include <cmath>

#include "grl/error.hpp"

namespace grl {

RelationalState initial_state(const InstanceSpec& spec) {
    RelationalState s(RelationalState::FactSet(spec.initial_facts.begin(), spec.initial_facts.end()));
    for (const auto& f : spec.static_facts) s.insert(f);
    return s;
}

Rng episode_rng(const InstanceSpec& spec, std::uint64_t seed) { return Rng{spec.seed, seed}; }

Transition sample_transition(const InstanceSpec& spec, const RelationalState& state,
                             const GroundAction& action, Rng& rng) {
    validate_action(action, spec.domain, spec.universe);
    auto dynamics = find_dynamics(spec.domain.name());
    Transition t;
    t.reward = dynamics->reward(spec, state, action);
    if (!std::isfinite(t.reward)) throw Error("non-finite reward for " + action.str());
    t.next_state = dynamics->sample_next(spec, state, action, rng);
    return t;
}

Environment::Environment(InstanceSpec spec)
    : spec_(std::move(spec)), actions_(ground_actions(spec_.domain, spec_.universe)) {
    reset(0);
}

const RelationalState& Environment::reset(std::uint64_t seed) {
    state_ = initial_state(spec_);
    rng_ = episode_rng(spec_, seed);
    elapsed_ = 0;
    return state_;
}

StepResult Environment::step(const GroundAction& action) {
    Transition t = sample_transition(spec_, state_, action, rng_);
    state_ = t.next_state;
    ++elapsed_;
    return StepResult{std::move(t.next_state), t.reward, elapsed_ >= spec_.horizon};
}

} // namespace grl
