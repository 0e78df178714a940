#include "grl/dl_eval.hpp"

#include "grl/error.hpp"

namespace grl::dl {

Interpretation::Interpretation(std::span<const PredicateSignature> vocabulary, const ObjectUniverse& universe,
                               const RelationalState& state)
    : universe_(&universe) {
    const std::size_t n = universe.size();
    for (const auto& p : vocabulary) {
        if (p.arity == 1) unary_.emplace(p.name, ObjectSet(n));
        if (p.arity == 2) {
            forward_.emplace(p.name, std::vector<ObjectSet>(n, ObjectSet(n)));
            backward_.emplace(p.name, std::vector<ObjectSet>(n, ObjectSet(n)));
        }
    }
    auto index = [&](const std::string& o) {
        auto i = universe.index_of(o);
        if (!i) throw ValidationError("object '" + o + "' is not in the universe");
        return *i;
    };
    for (const auto& f : state) {
        if (f.args.size() == 1) {
            if (auto it = unary_.find(f.predicate); it != unary_.end()) it->second.set(index(f.args[0]));
        } else if (f.args.size() == 2) {
            if (auto it = forward_.find(f.predicate); it != forward_.end()) {
                std::size_t x = index(f.args[0]), y = index(f.args[1]);
                it->second[x].set(y);
                backward_.find(f.predicate)->second[y].set(x);
            }
        }
    }
}

const ObjectSet& Interpretation::unary(std::string_view predicate) const {
    auto it = unary_.find(predicate);
    if (it == unary_.end()) throw ValidationError("unknown unary predicate '" + std::string(predicate) + "'");
    return it->second;
}

const std::vector<ObjectSet>& Interpretation::relation(const Role& role) const {
    const auto& table = role.is_inverse() ? backward_ : forward_;
    auto it = table.find(role.predicate());
    if (it == table.end()) throw ValidationError("unknown binary predicate '" + role.predicate() + "'");
    return it->second;
}

namespace {

class Evaluator {
public:
    explicit Evaluator(const Interpretation& interp) : interp_(interp) {}

    const ObjectSet& eval(const Concept& c) {
        if (auto it = memo_.find(c.node_id()); it != memo_.end()) return it->second;
        ObjectSet out = compute(c);
        return memo_.emplace(c.node_id(), std::move(out)).first->second;
    }

private:
    ObjectSet compute(const Concept& c) {
        const std::size_t n = interp_.size();
        switch (c.kind()) {
        case ConceptKind::Primitive: return interp_.unary(c.predicate());
        case ConceptKind::Top: return ObjectSet(n).set();
        case ConceptKind::Not: return ~eval(c.child());
        case ConceptKind::And: {
            ObjectSet out = eval(c.child());
            return out &= eval(c.second());
        }
        case ConceptKind::Exists:
        case ConceptKind::Forall: {
            const auto& rows = interp_.relation(c.role());
            const ObjectSet& inner = eval(c.child());
            ObjectSet out(n);
            for (std::size_t x = 0; x < n; ++x) {
                // Forall: every R-successor of x is in C.
                bool member = c.kind() == ConceptKind::Exists ? rows[x].intersects(inner) : rows[x].is_subset_of(inner);
                out[x] = member;
            }
            return out;
        }
        case ConceptKind::RoleEq: {
            const auto& r = interp_.relation(c.role());
            const auto& s = interp_.relation(c.second_role());
            ObjectSet out(n);
            for (std::size_t x = 0; x < n; ++x) out[x] = r[x] == s[x];
            return out;
        }
        }
        return ObjectSet(n);
    }

    const Interpretation& interp_;
    std::unordered_map<const void*, ObjectSet> memo_;
};

} // namespace

int shortest_distance(const ObjectSet& from, const std::vector<ObjectSet>& rows, const ObjectSet& to) {
    const int unreachable = static_cast<int>(from.size());
    if (from.none() || to.none()) return unreachable;
    if (from.intersects(to)) return 0;
    ObjectSet visited = from, frontier = from;
    for (int d = 1;; ++d) {
        ObjectSet next(from.size());
        for (auto x = frontier.find_first(); x != ObjectSet::npos; x = frontier.find_next(x)) next |= rows[x];
        next -= visited;
        if (next.none()) return unreachable;
        if (next.intersects(to)) return d;
        visited |= next;
        frontier = std::move(next);
    }
}

namespace {

int distance_with(Evaluator& ev, const DistanceFeature& d, const Interpretation& interp) {
    const auto& rows = interp.relation(d.role);
    ObjectSet from = ev.eval(d.source);
    return shortest_distance(from, rows, ev.eval(d.target));
}

} // namespace

ObjectSet denotation(const Concept& concept_expr, const Interpretation& interp) {
    Evaluator ev(interp);
    return ev.eval(concept_expr);
}

int distance(const DistanceFeature& feature, const Interpretation& interp) {
    Evaluator ev(interp);
    return distance_with(ev, feature, interp);
}

int feature_value(const Feature& feature, const Interpretation& interp) {
    if (feature.is_distance()) return distance(feature.as_distance(), interp);
    return static_cast<int>(denotation(feature.as_concept(), interp).count());
}

int object_membership(const Feature& feature, std::size_t object_index, const Interpretation& interp) {
    if (feature.is_distance()) return 0;
    return denotation(feature.as_concept(), interp).test(object_index) ? 1 : 0;
}

std::set<std::string> eval_concept(const Concept& concept_expr, const RelationalState& state,
                                   const ObjectUniverse& universe, const Domain& domain) {
    Interpretation interp(domain, universe, state);
    ObjectSet d = denotation(concept_expr, interp);
    std::set<std::string> out;
    for (auto i = d.find_first(); i != ObjectSet::npos; i = d.find_next(i)) out.insert(universe[i]);
    return out;
}

int eval_distance(const Concept& source, const Role& role, const Concept& target, const RelationalState& state,
                  const ObjectUniverse& universe, const Domain& domain) {
    Interpretation interp(domain, universe, state);
    return distance(DistanceFeature{source, role, target}, interp);
}

int object_membership(const Feature& feature, std::string_view object, const RelationalState& state,
                      const ObjectUniverse& universe, const Domain& domain) {
    auto idx = universe.index_of(object);
    if (!idx) throw ValidationError("object '" + std::string(object) + "' is not in the universe");
    Interpretation interp(domain, universe, state);
    return object_membership(feature, *idx, interp);
}

FeatureEvaluation::FeatureEvaluation(std::span<const Feature> features, const Interpretation& interp) {
    Evaluator ev(interp);
    values_.reserve(features.size());
    members_.reserve(features.size());
    for (const auto& f : features) {
        if (f.is_distance()) {
            values_.push_back(distance_with(ev, f.as_distance(), interp));
            members_.emplace_back(interp.size());
        } else {
            const ObjectSet& d = ev.eval(f.as_concept());
            values_.push_back(static_cast<int>(d.count()));
            members_.push_back(d);
        }
    }
}

} // namespace grl::dl
