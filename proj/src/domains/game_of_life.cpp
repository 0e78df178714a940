#include "domains/builtin.hpp"

namespace grl::domains {

namespace {

/// Conway's rule over the neighbor graph, then every cell's value flips with
/// probability `noise`; set_alive(l) forces l alive.
class GameOfLife final : public Dynamics {
public:
    GameOfLife()
        : domain_(std::string(domain_names::game_of_life), {{"alive", 1}, {"neighbor", 2}},
                  {{"nop", 0}, {"set_alive", 1}}) {}

    const Domain& domain() const override { return domain_; }
    std::vector<std::string> static_predicates() const override { return {"neighbor"}; }

    std::map<std::string, double> default_params() const override {
        return {{"noise", 0.1}, {"set_cost", 1.0}};
    }

    double reward(const InstanceSpec& spec, const RelationalState& state,
                  const GroundAction& action) const override {
        double alive = static_cast<double>(holding(state, "alive").size());
        return alive - (action.schema == "set_alive" ? spec.param("set_cost") : 0.0);
    }

    RelationalState sample_next(const InstanceSpec& spec, const RelationalState& state,
                                const GroundAction& action, Rng& rng) const override {
        const double noise = spec.param("noise");
        const auto alive = holding(state, "alive");
        const auto adj = successors(spec.static_facts, "neighbor");

        RelationalState next;
        for (const auto& f : state)
            if (f.predicate != "alive") next.insert(f);
        for (const auto& cell : spec.universe.objects()) {
            std::size_t n = 0;
            if (auto it = adj.find(cell); it != adj.end())
                for (const auto& m : it->second) n += alive.count(m);
            bool was = alive.count(cell) != 0;
            bool value = was ? (n == 2 || n == 3) : (n == 3);
            if (rng.bernoulli(noise)) value = !value;
            if (acts_on(action, "set_alive", cell)) value = true;
            if (value) next.insert(make_fact("alive", {cell}));
        }
        return next;
    }

private:
    Domain domain_;
};

} // namespace

std::shared_ptr<const Dynamics> make_game_of_life() { return std::make_shared<GameOfLife>(); }

} // namespace grl::domains
