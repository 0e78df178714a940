#include "domains/builtin.hpp"

#include <algorithm>

namespace grl::domains {

namespace {

/// take_course(c) marks c taken and passes it with probability
///   pass_base * (1 + passed prerequisites) / (1 + prerequisites).
/// Each step costs step_cost until every required course is passed; retaking a
/// taken-but-unpassed course costs retake_penalty on top.
class AcademicAdvising final : public Dynamics {
public:
    AcademicAdvising()
        : domain_(std::string(domain_names::academic_advising),
                  {{"passed", 1}, {"taken", 1}, {"prereq", 2}, {"required", 1}},
                  {{"nop", 0}, {"take_course", 1}}) {}

    const Domain& domain() const override { return domain_; }
    std::vector<std::string> static_predicates() const override { return {"prereq", "required"}; }

    std::map<std::string, double> default_params() const override {
        return {{"pass_base", 0.8}, {"step_cost", 1.0}, {"retake_penalty", 5.0}};
    }

    double reward(const InstanceSpec& spec, const RelationalState& state,
                  const GroundAction& action) const override {
        const auto passed = holding(state, "passed");
        bool done = true;
        for (const auto& f : spec.static_facts)
            if (f.predicate == "required" && !passed.count(f.args[0])) done = false;
        if (done) return 0.0;
        double r = -spec.param("step_cost");
        if (action.schema == "take_course") {
            const auto& c = action.args[0];
            if (state.contains(make_fact("taken", {c})) && !passed.count(c)) r -= spec.param("retake_penalty");
        }
        return r;
    }

    RelationalState sample_next(const InstanceSpec& spec, const RelationalState& state,
                                const GroundAction& action, Rng& rng) const override {
        RelationalState next = state;
        if (action.schema != "take_course") return next;
        const auto& c = action.args[0];
        next.insert(make_fact("taken", {c}));
        if (state.contains(make_fact("passed", {c}))) return next;

        const auto passed = holding(state, "passed");
        const auto pre = predecessors(spec.static_facts, "prereq");
        std::size_t total = 0, done = 0;
        if (auto it = pre.find(c); it != pre.end()) {
            total = it->second.size();
            for (const auto& p : it->second) done += passed.count(p);
        }
        double p = spec.param("pass_base") * static_cast<double>(1 + done) / static_cast<double>(1 + total);
        if (rng.bernoulli(p)) next.insert(make_fact("passed", {c}));
        return next;
    }

private:
    Domain domain_;
};

} // namespace

std::shared_ptr<const Dynamics> make_academic_advising() { return std::make_shared<AcademicAdvising>(); }

} // namespace grl::domains
