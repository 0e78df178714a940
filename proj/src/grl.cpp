#include "grl/grl.hpp"

#include <algorithm>
#include <cmath>

#include "grl/dl_enumerate.hpp"
#include "grl/environment.hpp"
#include "grl/error.hpp"
#include "grl/generator.hpp"

namespace grl {

GrlHyper GrlHyper::for_domain(std::string_view domain) {
    GrlHyper h;
    if (domain == domain_names::academic_advising || domain == domain_names::wildfire || domain == "aa" ||
        domain == "wf") {
        h.gamma = 1.0;
        h.alpha = 0.3;
    }
    return h;
}

GrlHyper GrlHyper::baseline_for_domain(std::string_view domain) {
    GrlHyper h = for_domain(domain);
    h.epsilon = 1.0;
    h.epsilon_decay = 0.997;
    return h;
}

double GrlHyper::epsilon_at(int episode) const { return epsilon * std::pow(epsilon_decay, episode); }

void GrlHyper::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ValidationError(std::string("hyperparameter out of range: ") + what);
    };
    require(gamma > 0.0 && gamma <= 1.0, "gamma must be in (0, 1]");
    require(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0, 1]");
    require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must be in [0, 1]");
    require(epsilon_decay > 0.0 && epsilon_decay <= 1.0, "epsilon_decay must be in (0, 1]");
    require(train_interval > 0, "train_interval must be positive");
    require(opt_steps >= 0, "opt_steps must be non-negative");
    require(minibatch > 0, "minibatch must be positive");
    require(buffer_capacity > 0, "buffer_capacity must be positive");
    require(episodes >= 0, "episodes must be non-negative");
    require(horizon > 0, "horizon must be positive");
    require(feature_complexity >= 1, "feature_complexity must be at least 1");
    require(sample_episodes >= 0, "sample_episodes must be non-negative");
    require(learning_rate > 0.0, "learning_rate must be positive");
    require(probe_episodes >= 1, "probe_episodes must be positive");
    for (int h : hidden) require(h > 0, "hidden layer sizes must be positive");
}

GrlSession::GrlSession(const InstanceSpec& spec, const EncodingLayout* layout, QNet* net, ReplayBuffer* buffer,
                       GrlHyper hyper, std::uint64_t seed)
    : spec_(&spec),
      layout_(layout),
      net_(net),
      buffer_(buffer),
      hyper_(std::move(hyper)),
      actions_(ground_actions(spec.domain, spec.universe)),
      env_rng_({seed, 1}),
      policy_rng_({seed, 2}),
      replay_rng_({seed, 3}) {
    hyper_.validate();
    if (net_ && !layout_) throw ValidationError("a network-backed session needs an encoding layout");
    if (layout_) layout_->check_compatible(spec.domain);
    if (net_ && net_->input_size() != layout_->input_size())
        throw DimensionError("network input " + std::to_string(net_->input_size()) + " does not match layout size " +
                             std::to_string(layout_->input_size()));
    for (std::size_t i = 0; i < actions_.size(); ++i) action_ids_.emplace(actions_[i].str(), i);
}

GrlSession::StateEntry& GrlSession::entry(const RelationalState& state) {
    auto key = canonical_state_key(state);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    StateEntry e;
    e.q.assign(actions_.size(), 0.0);
    e.ready.assign(actions_.size(), 0);
    if (layout_) {
        StateEncoder enc(*layout_, spec_->universe, state);
        e.abstract_state = enc.state_vector();
        e.abstract_actions.reserve(actions_.size());
        for (const auto& a : actions_) e.abstract_actions.push_back(enc.encode_action(a));
    }
    return table_.emplace(std::move(key), std::move(e)).first->second;
}

std::size_t GrlSession::action_index(const GroundAction& a) const {
    auto it = action_ids_.find(a.str());
    if (it == action_ids_.end()) throw ValidationError("'" + a.str() + "' is not a ground action of the instance");
    return it->second;
}

double GrlSession::resolve(StateEntry& e, std::size_t a) {
    if (!e.ready[a]) {
        if (net_) {
            e.q[a] = net_->predict(e.abstract_state, e.abstract_actions[a], layout_->count_scaler());
            ++network_inits_;
        }
        e.ready[a] = 1;
        ++entries_count_;
    }
    return e.q[a];
}

double GrlSession::lookup_q(const RelationalState& state, const GroundAction& action) {
    return lookup_q(state, action_index(action));
}

double GrlSession::lookup_q(const RelationalState& state, std::size_t action) {
    if (action >= actions_.size()) throw ValidationError("action index out of range");
    return resolve(entry(state), action);
}

double GrlSession::td_update(const RelationalState& s, const GroundAction& a, double reward,
                             const RelationalState& next, bool bootstrap) {
    return td_update(s, action_index(a), reward, next, bootstrap);
}

double GrlSession::td_update(const RelationalState& s, std::size_t a, double reward, const RelationalState& next,
                             bool bootstrap) {
    StateEntry& current = entry(s);
    const double q_sa = resolve(current, a);
    double best_next = 0.0;
    if (bootstrap) {
        StateEntry& succ = entry(next);
        best_next = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < actions_.size(); ++b) best_next = std::max(best_next, resolve(succ, b));
    }
    const double delta = reward + hyper_.gamma * best_next - q_sa;
    current.q[a] = q_sa + hyper_.alpha * delta;
    if (net_ && buffer_) buffer_->push({current.abstract_state, current.abstract_actions[a], current.q[a]});
    return delta;
}

std::size_t GrlSession::greedy_action(const RelationalState& state) {
    StateEntry& e = entry(state);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> ties;
    for (std::size_t b = 0; b < actions_.size(); ++b) {
        const double q = resolve(e, b);
        if (q > best) {
            best = q;
            ties.assign(1, b);
        } else if (q == best) {
            ties.push_back(b);
        }
    }
    return ties.size() == 1 ? ties.front() : ties[policy_rng_.index(ties.size())];
}

std::size_t GrlSession::epsilon_greedy_action(const RelationalState& state, double epsilon) {
    if (policy_rng_.bernoulli(epsilon)) return policy_rng_.index(actions_.size());
    return greedy_action(state);
}

EpisodeRecord GrlSession::run_episode(int index, double epsilon) {
    EpisodeRecord record;
    record.episode = index;
    record.epsilon = epsilon;
    double loss_sum = 0.0;
    int loss_count = 0;
    RelationalState s = initial_state(*spec_);
    const bool bootstrap_last = hyper_.bootstraps_at_horizon();
    for (int t = 0; t < spec_->horizon; ++t) {
        const std::size_t a = epsilon_greedy_action(s, epsilon);
        Transition tr = sample_transition(*spec_, s, actions_[a], env_rng_);
        td_update(s, a, tr.reward, tr.next_state, t + 1 < spec_->horizon || bootstrap_last);
        record.total_reward += tr.reward;
        ++steps_;
        if (net_ && buffer_ && !buffer_->empty() && steps_ % static_cast<std::size_t>(hyper_.train_interval) == 0) {
            for (int k = 0; k < hyper_.opt_steps; ++k) {
                loss_sum += train_from_buffer(*net_, *buffer_, static_cast<std::size_t>(hyper_.minibatch),
                                              replay_rng_, layout_->count_scaler());
                ++loss_count;
            }
        }
        s = std::move(tr.next_state);
    }
    if (loss_count > 0) record.loss = loss_sum / loss_count;
    return record;
}

QTable GrlSession::q_table() const {
    QTable out;
    for (const auto& [key, e] : table_)
        for (std::size_t a = 0; a < actions_.size(); ++a)
            if (e.ready[a]) out.emplace(std::make_pair(key, actions_[a].str()), e.q[a]);
    return out;
}

GrlResult run_grl(const InstanceSpec& spec, QNet net, const EncodingLayout& layout, const GrlHyper& hyper,
                  std::uint64_t seed, ReplayBuffer& buffer) {
    GrlResult result{{}, std::move(net), {}, 0, 0};
    GrlSession session(spec, &layout, &result.net, &buffer, hyper, seed);
    for (int ep = 0; ep < hyper.episodes; ++ep) result.curve.push_back(session.run_episode(ep, hyper.epsilon_at(ep)));
    result.q_table = session.q_table();
    result.network_initializations = session.network_initializations();
    result.table_entries = session.table_entries();
    return result;
}

GrlResult run_grl(const InstanceSpec& spec, QNet net, const EncodingLayout& layout, const GrlHyper& hyper,
                  std::uint64_t seed) {
    ReplayBuffer buffer(hyper.buffer_capacity);
    return run_grl(spec, std::move(net), layout, hyper, seed, buffer);
}

QLearningResult run_qlearning_baseline(const InstanceSpec& spec, const GrlHyper& hyper, std::uint64_t seed) {
    QLearningResult result;
    GrlSession session(spec, nullptr, nullptr, nullptr, hyper, seed);
    for (int ep = 0; ep < hyper.episodes; ++ep) result.curve.push_back(session.run_episode(ep, hyper.epsilon_at(ep)));
    result.q_table = session.q_table();
    return result;
}

NetworkPolicy::NetworkPolicy(const QNet& net, const EncodingLayout& layout, const InstanceSpec& spec)
    : net_(&net), layout_(&layout), spec_(&spec), actions_(ground_actions(spec.domain, spec.universe)) {
    layout.check_compatible(spec.domain);
    if (net.input_size() != layout.input_size())
        throw LayoutError("network input " + std::to_string(net.input_size()) + " does not match layout size " +
                          std::to_string(layout.input_size()));
}

const std::vector<double>& NetworkPolicy::q_values(const RelationalState& state) {
    auto key = canonical_state_key(state);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    StateEncoder enc(*layout_, spec_->universe, state);
    std::vector<double> q;
    q.reserve(actions_.size());
    for (const auto& a : actions_)
        q.push_back(net_->predict(enc.state_vector(), enc.encode_action(a), layout_->count_scaler()));
    return cache_.emplace(std::move(key), std::move(q)).first->second;
}

std::size_t NetworkPolicy::choose(const RelationalState& state, Rng& rng) {
    const auto& q = q_values(state);
    const double best = *std::max_element(q.begin(), q.end());
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] == best) ties.push_back(i);
    return ties.size() == 1 ? ties.front() : ties[rng.index(ties.size())];
}

std::vector<double> greedy_returns(const QNet& net, const EncodingLayout& layout, const InstanceSpec& spec,
                                   int episodes, std::uint64_t seed) {
    NetworkPolicy policy(net, layout, spec);
    Environment env(spec);
    Rng tie_rng({seed, 0x7157});
    std::vector<double> out;
    for (int ep = 0; ep < episodes; ++ep) {
        env.reset(derive_seed(seed, {static_cast<std::uint64_t>(ep)}));
        double total = 0.0;
        while (true) {
            StepResult r = env.step(policy.actions()[policy.choose(env.state(), tie_rng)]);
            total += r.reward;
            if (r.done) break;
        }
        out.push_back(total);
    }
    return out;
}

EncodingLayout build_layout(const InstanceSpec& spec, const GrlHyper& hyper, std::uint64_t seed) {
    auto sampled = sample_state_space(spec, hyper.sample_episodes, seed);
    std::vector<RelationalState> samples(sampled.begin(), sampled.end());
    auto features = dl::enumerate_features(spec.domain, spec.universe, samples, hyper.feature_complexity);
    EncodingLayout layout = EncodingLayout::build(spec.domain, std::move(features));
    if (hyper.normalize_counts) {
        CountScaler scaler(layout.feature_count());
        for (const auto& s : samples) scaler.observe(encode_state(layout, s, spec.universe));
        layout.scaler = std::move(scaler);
    }
    return layout;
}

QNet initial_network(const EncodingLayout& layout, const GrlHyper& hyper, std::uint64_t seed) {
    AdamConfig adam;
    adam.learning_rate = hyper.learning_rate;
    return QNet(QNet::standard_dims(layout.input_size(), hyper.hidden), seed, adam);
}

namespace {

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

} // namespace

LeapfrogResult run_leapfrog(const std::vector<CurriculumStage>& stages, const GrlHyper& hyper, std::uint64_t seed) {
    if (stages.empty()) throw ValidationError("a curriculum needs at least one stage");
    hyper.validate();

    std::vector<InstanceSpec> instances;
    for (std::size_t i = 0; i < stages.size(); ++i)
        instances.push_back(generate_instance(stages[i].domain, stages[i].size_params,
                                              derive_seed(seed, {1, i}), hyper.horizon));
    EncodingLayout layout = build_layout(instances.front(), hyper, derive_seed(seed, {2}));
    const std::uint64_t net_seed = derive_seed(seed, {3});
    LeapfrogResult result{initial_network(layout, hyper, net_seed), layout, ReplayBuffer(hyper.buffer_capacity), {}};

    for (std::size_t i = 0; i < stages.size(); ++i) {
        const InstanceSpec& spec = instances[i];
        StageReport report;
        report.instance = spec;
        const std::uint64_t probe_seed = derive_seed(seed, {5, i});
        report.initial_greedy_return =
            mean_of(greedy_returns(result.net, layout, spec, hyper.probe_episodes, probe_seed));
        report.fresh_greedy_return = mean_of(
            greedy_returns(initial_network(layout, hyper, net_seed), layout, spec, hyper.probe_episodes, probe_seed));

        if (hyper.clear_buffer_per_stage) result.buffer.clear();
        GrlHyper stage_hyper = hyper;
        stage_hyper.episodes = stages[i].episodes;
        GrlResult run = run_grl(spec, std::move(result.net), layout, stage_hyper, derive_seed(seed, {4, i}),
                                result.buffer);
        result.net = std::move(run.net);
        report.curve = std::move(run.curve);
        report.network_initializations = run.network_initializations;
        report.table_entries = run.table_entries;
        result.stages.push_back(std::move(report));
    }
    return result;
}

} // namespace grl
