#include "domains/builtin.hpp"

namespace grl::domains {

namespace {

/// A running computer stays up with probability
///   base + weight * (1 + running in-neighbors) / (1 + in-neighbors);
/// a down computer stays down unless rebooted; reboot(c) brings c up.
class Sysadmin final : public Dynamics {
public:
    Sysadmin()
        : domain_(std::string(domain_names::sysadmin), {{"running", 1}, {"link", 2}},
                  {{"nop", 0}, {"reboot", 1}}) {}

    const Domain& domain() const override { return domain_; }
    std::vector<std::string> static_predicates() const override { return {"link"}; }

    std::map<std::string, double> default_params() const override {
        return {{"reboot_cost", 0.75}, {"stay_base", 0.45}, {"stay_neighbor_weight", 0.5}};
    }

    std::set<GroundFact> default_init(const ObjectUniverse& universe,
                                      const std::set<GroundFact>&) const override {
        std::set<GroundFact> out;
        for (const auto& c : universe.objects()) out.insert(make_fact("running", {c}));
        return out;
    }

    double reward(const InstanceSpec& spec, const RelationalState& state,
                  const GroundAction& action) const override {
        double up = static_cast<double>(holding(state, "running").size());
        return up - (action.schema == "reboot" ? spec.param("reboot_cost") : 0.0);
    }

    RelationalState sample_next(const InstanceSpec& spec, const RelationalState& state,
                                const GroundAction& action, Rng& rng) const override {
        const double base = spec.param("stay_base");
        const double weight = spec.param("stay_neighbor_weight");
        const auto running = holding(state, "running");
        const auto incoming = predecessors(spec.static_facts, "link");

        RelationalState next;
        for (const auto& f : state)
            if (f.predicate != "running") next.insert(f);
        for (const auto& c : spec.universe.objects()) {
            bool up;
            if (acts_on(action, "reboot", c)) {
                up = true;
            } else if (running.count(c)) {
                std::size_t total = 0, alive = 0;
                if (auto it = incoming.find(c); it != incoming.end()) {
                    total = it->second.size();
                    for (const auto& d : it->second) alive += running.count(d);
                }
                double p = base + weight * static_cast<double>(1 + alive) / static_cast<double>(1 + total);
                up = rng.bernoulli(p);
            } else {
                up = false;
            }
            if (up) next.insert(make_fact("running", {c}));
        }
        return next;
    }

private:
    Domain domain_;
};

} // namespace

std::shared_ptr<const Dynamics> make_sysadmin() { return std::make_shared<Sysadmin>(); }

} // namespace grl::domains
