#include "domains/builtin.hpp"

#include <cmath>

namespace grl::domains {

namespace {

/// An unburned fueled cell ignites with probability 1 - exp(-rate * burning
/// neighbors). Burning cells keep burning (and use up their fuel) until
/// put_out; cut_out removes fuel so the cell cannot ignite.
class Wildfire final : public Dynamics {
public:
    Wildfire()
        : domain_(std::string(domain_names::wildfire), {{"burning", 1}, {"out_of_fuel", 1}, {"neighbor", 2}},
                  {{"cut_out", 1}, {"nop", 0}, {"put_out", 1}}) {}

    const Domain& domain() const override { return domain_; }
    std::vector<std::string> static_predicates() const override { return {"neighbor"}; }

    std::map<std::string, double> default_params() const override {
        return {{"ignite_rate", 0.4}, {"burn_penalty", 5.0}, {"action_cost", 1.0}};
    }

    double reward(const InstanceSpec& spec, const RelationalState& state,
                  const GroundAction& action) const override {
        double burning = static_cast<double>(holding(state, "burning").size());
        return -spec.param("burn_penalty") * burning - (action.schema != "nop" ? spec.param("action_cost") : 0.0);
    }

    RelationalState sample_next(const InstanceSpec& spec, const RelationalState& state,
                                const GroundAction& action, Rng& rng) const override {
        const double rate = spec.param("ignite_rate");
        const auto burning = holding(state, "burning");
        const auto no_fuel = holding(state, "out_of_fuel");
        const auto adj = successors(spec.static_facts, "neighbor");

        RelationalState next;
        for (const auto& f : state)
            if (f.predicate != "burning" && f.predicate != "out_of_fuel") next.insert(f);
        for (const auto& cell : spec.universe.objects()) {
            const bool is_burning = burning.count(cell) != 0;
            const bool cut = acts_on(action, "cut_out", cell);
            const bool fueled = !no_fuel.count(cell) && !cut;
            bool burns;
            if (acts_on(action, "put_out", cell)) {
                burns = false;
            } else if (is_burning) {
                burns = true;
            } else if (!fueled) {
                burns = false;
            } else {
                std::size_t n = 0;
                if (auto it = adj.find(cell); it != adj.end())
                    for (const auto& m : it->second) n += burning.count(m);
                burns = rng.bernoulli(1.0 - std::exp(-rate * static_cast<double>(n)));
            }
            if (burns) next.insert(make_fact("burning", {cell}));
            if (!fueled || is_burning) next.insert(make_fact("out_of_fuel", {cell}));
        }
        return next;
    }

private:
    Domain domain_;
};

} // namespace

std::shared_ptr<const Dynamics> make_wildfire() { return std::make_shared<Wildfire>(); }

} // namespace grl::domains
