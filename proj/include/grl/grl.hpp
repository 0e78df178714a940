#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grl/encoder.hpp"
#include "grl/instance.hpp"
#include "grl/qnet.hpp"
#include "grl/replay.hpp"
#include "grl/rng.hpp"

namespace grl {

struct GrlHyper {
    double gamma = 0.9;
    double alpha = 0.05;
    double epsilon = 0.1;
    /// Per-episode multiplicative decay of epsilon; 1 keeps it constant.
    double epsilon_decay = 1.0;
    int train_interval = 32;
    int opt_steps = 25;
    int minibatch = 32;
    std::size_t buffer_capacity = 20000;
    int episodes = 1250;
    /// Horizon given to generated instances.
    int horizon = 40;
    int feature_complexity = 5;
    /// Random-walk episodes used to sample the state space for feature enumeration.
    int sample_episodes = 100;
    std::vector<int> hidden{64, 64};
    double learning_rate = 1e-3;
    bool normalize_counts = false;
    bool clear_buffer_per_stage = false;
    /// Greedy episodes run with the frozen network before each curriculum stage.
    int probe_episodes = 1;
    /// Whether the last step of an episode bootstraps from the successor.
    /// Unset means: only when gamma < 1, so undiscounted returns stay capped by the horizon.
    std::optional<bool> bootstrap_at_horizon;

    /// GRL defaults for the domain (discount and step size differ per domain).
    static GrlHyper for_domain(std::string_view domain);
    /// Plain Q-learning defaults: epsilon starts at 1 and decays by 0.997 per episode.
    static GrlHyper baseline_for_domain(std::string_view domain);

    bool bootstraps_at_horizon() const { return bootstrap_at_horizon.value_or(gamma < 1.0); }
    double epsilon_at(int episode) const;

    /// Throws ValidationError for out-of-range values.
    void validate() const;
};

/// (canonical state key, ground action) -> Q.
using QTable = std::map<std::pair<std::string, std::string>, double>;

struct EpisodeRecord {
    int episode = 0;
    double total_reward = 0.0;
    double epsilon = 0.0;
    /// Mean pre-step minibatch loss during the episode; NaN when no training happened.
    double loss = std::numeric_limits<double>::quiet_NaN();
};

/// Tabular Q-learning whose missing entries are filled lazily from a
/// generalized network. Without a network the table starts at zero and no
/// replay data is produced (plain Q-learning).
class GrlSession {
public:
    /// `layout`, `net` and `buffer` are borrowed and must outlive the session;
    /// pass nulls for plain Q-learning.
    GrlSession(const InstanceSpec& spec, const EncodingLayout* layout, QNet* net, ReplayBuffer* buffer,
               GrlHyper hyper, std::uint64_t seed);

    const std::vector<GroundAction>& actions() const { return actions_; }
    const GrlHyper& hyper() const { return hyper_; }

    double lookup_q(const RelationalState& state, const GroundAction& action);
    double lookup_q(const RelationalState& state, std::size_t action);

    /// Q(s,a) += alpha * delta and, with a network, pushes (s̄, ā, new Q) to the buffer.
    /// Returns delta. `bootstrap` = false treats s' as terminal.
    double td_update(const RelationalState& s, const GroundAction& a, double reward, const RelationalState& next,
                     bool bootstrap = true);
    double td_update(const RelationalState& s, std::size_t a, double reward, const RelationalState& next,
                     bool bootstrap = true);

    /// Argmax with uniformly random tie-breaking.
    std::size_t greedy_action(const RelationalState& state);
    std::size_t epsilon_greedy_action(const RelationalState& state, double epsilon);

    /// One epsilon-greedy episode from s0 with learning and periodic network training.
    EpisodeRecord run_episode(int index, double epsilon);

    QTable q_table() const;
    std::size_t table_entries() const { return entries_count_; }
    std::size_t network_initializations() const { return network_inits_; }
    std::size_t env_steps() const { return steps_; }

private:
    struct StateEntry {
        std::vector<double> q;
        std::vector<std::uint8_t> ready;
        AbstractStateVector abstract_state;
        std::vector<AbstractActionVector> abstract_actions;
    };

    StateEntry& entry(const RelationalState& state);
    std::size_t action_index(const GroundAction& a) const;
    double resolve(StateEntry& e, std::size_t a);

    const InstanceSpec* spec_;
    const EncodingLayout* layout_;
    QNet* net_;
    ReplayBuffer* buffer_;
    GrlHyper hyper_;
    std::vector<GroundAction> actions_;
    std::unordered_map<std::string, std::size_t> action_ids_;
    std::unordered_map<std::string, StateEntry> table_;
    Rng env_rng_;
    Rng policy_rng_;
    Rng replay_rng_;
    std::size_t entries_count_ = 0;
    std::size_t network_inits_ = 0;
    std::size_t steps_ = 0;
};

struct GrlResult {
    QTable q_table;
    QNet net;
    std::vector<EpisodeRecord> curve;
    std::size_t network_initializations = 0;
    std::size_t table_entries = 0;
};

/// Runs hyper.episodes GRL episodes on the instance, training `net` from `buffer`.
GrlResult run_grl(const InstanceSpec& spec, QNet net, const EncodingLayout& layout, const GrlHyper& hyper,
                  std::uint64_t seed, ReplayBuffer& buffer);
GrlResult run_grl(const InstanceSpec& spec, QNet net, const EncodingLayout& layout, const GrlHyper& hyper,
                  std::uint64_t seed);

struct QLearningResult {
    QTable q_table;
    std::vector<EpisodeRecord> curve;
};

/// Zero-initialised tabular Q-learning with hyper.epsilon decayed by hyper.epsilon_decay per episode.
QLearningResult run_qlearning_baseline(const InstanceSpec& spec, const GrlHyper& hyper, std::uint64_t seed);

/// Greedy policy over a frozen network, caching Q-values per visited state.
class NetworkPolicy {
public:
    NetworkPolicy(const QNet& net, const EncodingLayout& layout, const InstanceSpec& spec);

    const std::vector<GroundAction>& actions() const { return actions_; }
    const std::vector<double>& q_values(const RelationalState& state);
    /// Ties broken uniformly at random with `rng`.
    std::size_t choose(const RelationalState& state, Rng& rng);

private:
    const QNet* net_;
    const EncodingLayout* layout_;
    const InstanceSpec* spec_;
    std::vector<GroundAction> actions_;
    std::unordered_map<std::string, std::vector<double>> cache_;
};

/// Undiscounted returns of greedy episodes under a frozen network.
std::vector<double> greedy_returns(const QNet& net, const EncodingLayout& layout, const InstanceSpec& spec,
                                   int episodes, std::uint64_t seed);

struct CurriculumStage {
    std::string domain;
    std::vector<int> size_params;
    int episodes = 1250;
};

struct StageReport {
    InstanceSpec instance;
    std::vector<EpisodeRecord> curve;
    /// Mean greedy return of the network handed to this stage, before training on it.
    double initial_greedy_return = 0.0;
    /// The same probe with a freshly initialised network.
    double fresh_greedy_return = 0.0;
    std::size_t network_initializations = 0;
    std::size_t table_entries = 0;
};

struct LeapfrogResult {
    QNet net;
    EncodingLayout layout;
    ReplayBuffer buffer;
    std::vector<StageReport> stages;
};

/// Layout over features enumerated from the sampled state space of `spec`.
EncodingLayout build_layout(const InstanceSpec& spec, const GrlHyper& hyper, std::uint64_t seed);

/// Fresh network sized for the layout.
QNet initial_network(const EncodingLayout& layout, const GrlHyper& hyper, std::uint64_t seed);

/// Generates each stage's instance and threads one network (and replay buffer)
/// through successive GRL runs. Features come from the first stage.
LeapfrogResult run_leapfrog(const std::vector<CurriculumStage>& stages, const GrlHyper& hyper, std::uint64_t seed);

} // namespace grl
