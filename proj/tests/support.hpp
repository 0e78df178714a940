#pragma once
// Independent oracles shared by the unit tests and the acceptance binary.
// Nothing here reuses the library's evaluation code paths.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "grl/dl.hpp"
#include "grl/dynamics.hpp"
#include "grl/environment.hpp"
#include "grl/instance.hpp"
#include "grl/qnet.hpp"
#include "grl/relational.hpp"
#include "grl/rng.hpp"

namespace grl::oracle {

inline Domain sysadmin_domain() { return find_dynamics("sysadmin")->domain(); }

/// running(c0), link(c0,c1), link(c1,c0); c1 is down.
inline RelationalState example_state() {
    return RelationalState{make_fact("running", {"c0"}), make_fact("link", {"c0", "c1"}),
                           make_fact("link", {"c1", "c0"})};
}

inline ObjectUniverse example_universe() { return ObjectUniverse({"c0", "c1"}); }

// ---------------------------------------------------------------------------
// Brute-force description-logic model checker: direct quantifier expansion
// over object names and fact lookups.

inline bool role_holds(const RelationalState& s, const dl::Role& r, const std::string& x, const std::string& y) {
    return r.is_inverse() ? s.contains(make_fact(r.predicate(), {y, x})) : s.contains(make_fact(r.predicate(), {x, y}));
}

inline std::set<std::string> brute_concept(const dl::Concept& c, const RelationalState& s, const ObjectUniverse& u) {
    std::set<std::string> out;
    const auto& objs = u.objects();
    switch (c.kind()) {
    case dl::ConceptKind::Top:
        out.insert(objs.begin(), objs.end());
        break;
    case dl::ConceptKind::Primitive:
        for (const auto& x : objs)
            if (s.contains(make_fact(c.predicate(), {x}))) out.insert(x);
        break;
    case dl::ConceptKind::Not: {
        auto inner = brute_concept(c.child(), s, u);
        for (const auto& x : objs)
            if (!inner.count(x)) out.insert(x);
        break;
    }
    case dl::ConceptKind::And: {
        auto a = brute_concept(c.child(), s, u);
        auto b = brute_concept(c.second(), s, u);
        for (const auto& x : a)
            if (b.count(x)) out.insert(x);
        break;
    }
    case dl::ConceptKind::Exists: {
        auto inner = brute_concept(c.child(), s, u);
        for (const auto& x : objs)
            for (const auto& y : objs)
                if (role_holds(s, c.role(), x, y) && inner.count(y)) out.insert(x);
        break;
    }
    case dl::ConceptKind::Forall: {
        auto inner = brute_concept(c.child(), s, u);
        for (const auto& x : objs) {
            bool all = true;
            for (const auto& y : objs)
                if (role_holds(s, c.role(), x, y) && !inner.count(y)) all = false;
            if (all) out.insert(x);
        }
        break;
    }
    case dl::ConceptKind::RoleEq:
        for (const auto& x : objs) {
            bool same = true;
            for (const auto& y : objs)
                if (role_holds(s, c.role(), x, y) != role_holds(s, c.second_role(), x, y)) same = false;
            if (same) out.insert(x);
        }
        break;
    }
    return out;
}

/// Floyd-Warshall over the r-edge graph; |O| when unreachable or either side empty.
inline int brute_distance(const dl::DistanceFeature& d, const RelationalState& s, const ObjectUniverse& u) {
    const int n = static_cast<int>(u.size());
    const int inf = 1 << 20;
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) {
        dist[i][i] = 0;
        for (int j = 0; j < n; ++j)
            if (i != j && role_holds(s, d.role, u[i], u[j])) dist[i][j] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
    auto a = brute_concept(d.source, s, u);
    auto b = brute_concept(d.target, s, u);
    int best = inf;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a.count(u[i]) && b.count(u[j])) best = std::min(best, dist[i][j]);
    return best >= inf ? n : best;
}

inline int brute_value(const dl::Feature& f, const RelationalState& s, const ObjectUniverse& u) {
    return f.is_distance() ? brute_distance(f.as_distance(), s, u)
                           : static_cast<int>(brute_concept(f.as_concept(), s, u).size());
}

// ---------------------------------------------------------------------------
// Exhaustive feature grammar: every concept of exactly complexity c, built
// without any pruning or reuse of the library enumerator.

inline std::vector<dl::Role> all_roles(const Domain& d) {
    std::vector<dl::Role> out;
    for (const auto& p : d.predicates())
        if (p.arity == 2) {
            out.emplace_back(p.name);
            out.push_back(dl::Role(p.name).inverse());
        }
    return out;
}

inline std::vector<std::vector<dl::Concept>> all_concepts(const Domain& d, int k) {
    std::vector<std::vector<dl::Concept>> by(k + 1);
    const auto roles = all_roles(d);
    for (int c = 1; c <= k; ++c) {
        if (c == 1) {
            by[1].push_back(dl::Concept::top());
            for (const auto& p : d.predicates())
                if (p.arity == 1) by[1].push_back(dl::Concept::primitive(p.name));
            continue;
        }
        for (const auto& x : by[c - 1]) by[c].push_back(dl::Concept::negation(x));
        for (int i = 1; i + 1 < c; ++i)
            for (const auto& a : by[i])
                for (const auto& b : by[c - 1 - i]) by[c].push_back(dl::Concept::conjunction(a, b));
        for (const auto& r : roles) {
            const int rest = c - 1 - r.complexity();
            if (rest < 1) continue;
            for (const auto& x : by[rest]) {
                by[c].push_back(dl::Concept::exists(r, x));
                by[c].push_back(dl::Concept::forall(r, x));
            }
        }
        for (const auto& r : roles)
            for (const auto& q : roles)
                if (1 + r.complexity() + q.complexity() == c) by[c].push_back(dl::Concept::role_equality(r, q));
    }
    return by;
}

/// Number of distinct value/denotation classes over the samples among all
/// grammar features up to complexity k.
inline std::size_t exhaustive_class_count(const Domain& d, const ObjectUniverse& u,
                                          const std::vector<RelationalState>& samples, int k) {
    auto by = all_concepts(d, k);
    std::set<std::vector<std::set<std::string>>> concept_classes;
    for (int c = 1; c <= k; ++c)
        for (const auto& x : by[c]) {
            std::vector<std::set<std::string>> sig;
            for (const auto& s : samples) sig.push_back(brute_concept(x, s, u));
            concept_classes.insert(sig);
        }
    std::set<std::vector<int>> distance_classes;
    for (const auto& r : all_roles(d))
        for (int c1 = 1; c1 <= k; ++c1)
            for (int c2 = 1; 1 + c1 + r.complexity() + c2 <= k; ++c2)
                for (const auto& a : by[c1])
                    for (const auto& b : by[c2]) {
                        std::vector<int> sig;
                        for (const auto& s : samples) sig.push_back(brute_distance({a, r, b}, s, u));
                        distance_classes.insert(sig);
                    }
    return concept_classes.size() + distance_classes.size();
}

// ---------------------------------------------------------------------------
// Object renaming.

using Renaming = std::map<std::string, std::string>;

inline Renaming random_permutation(const ObjectUniverse& u, Rng& rng) {
    std::vector<std::string> names = u.objects();
    for (std::size_t i = names.size(); i > 1; --i) std::swap(names[i - 1], names[rng.index(i)]);
    Renaming out;
    for (std::size_t i = 0; i < names.size(); ++i) out[u[i]] = names[i];
    return out;
}

inline RelationalState rename(const RelationalState& s, const Renaming& m) {
    RelationalState out;
    for (const auto& f : s) {
        GroundFact g = f;
        for (auto& a : g.args) a = m.at(a);
        out.insert(g);
    }
    return out;
}

inline GroundAction rename(const GroundAction& a, const Renaming& m) {
    GroundAction out = a;
    for (auto& x : out.args) x = m.at(x);
    return out;
}

// ---------------------------------------------------------------------------
// A deterministic chain domain used for value-iteration checks. Positions
// p0..p{n-1} with two-way adjacency; move(x) goes to x when adjacent and stays
// otherwise; being at the last position pays 1 per step.

class ChainDynamics final : public Dynamics {
public:
    ChainDynamics() : domain_("chain_test", {{"at", 1}, {"adjacent", 2}}, {{"move", 1}, {"nop", 0}}) {}

    const Domain& domain() const override { return domain_; }
    std::vector<std::string> static_predicates() const override { return {"adjacent"}; }
    std::map<std::string, double> default_params() const override { return {{"goal_reward", 1.0}}; }

    double reward(const InstanceSpec& spec, const RelationalState& s, const GroundAction&) const override {
        const auto& last = spec.universe.objects().back();
        return s.contains(make_fact("at", {last})) ? spec.param("goal_reward") : 0.0;
    }

    RelationalState sample_next(const InstanceSpec& spec, const RelationalState& s, const GroundAction& a,
                                Rng&) const override {
        if (a.schema != "move") return s;
        for (const auto& f : s)
            if (f.predicate == "at" && spec.static_facts.count(make_fact("adjacent", {f.args[0], a.args[0]}))) {
                RelationalState next = s;
                next.erase(f);
                next.insert(make_fact("at", {a.args[0]}));
                return next;
            }
        return s;
    }

private:
    Domain domain_;
};

inline void ensure_chain_registered() {
    static const bool once = [] {
        register_dynamics(std::make_shared<ChainDynamics>());
        return true;
    }();
    (void)once;
}

inline InstanceSpec chain_instance(int n, int horizon = 40) {
    ensure_chain_registered();
    std::string text = "domain: chain_test\nobjects:";
    for (int i = 0; i < n; ++i) text += " p" + std::to_string(i);
    text += "\nstatic:\n";
    for (int i = 0; i + 1 < n; ++i) {
        text += "  adjacent(p" + std::to_string(i) + ",p" + std::to_string(i + 1) + ")\n";
        text += "  adjacent(p" + std::to_string(i + 1) + ",p" + std::to_string(i) + ")\n";
    }
    text += "init:\n  at(p0)\nhorizon: " + std::to_string(horizon) + "\n";
    auto spec = parse_instance(text);
    spec.name = "chain_" + std::to_string(n);
    return spec;
}

/// Chain MDP in integer form: state = position, actions = nop, move(0..n-1).
struct ChainModel {
    int n;
    double gamma;

    int actions() const { return n + 1; }
    /// Action 0 is nop, action 1 + j is move(p_j); matches the alphabetical
    /// ground-action order only through the action strings used by callers.
    int next(int s, int a) const {
        if (a == 0) return s;
        const int target = a - 1;
        return std::abs(target - s) == 1 ? target : s;
    }
    double reward(int s) const { return s == n - 1 ? 1.0 : 0.0; }

    /// Q* by value iteration until the update is below 1e-13.
    std::vector<std::vector<double>> optimal_q() const {
        std::vector<std::vector<double>> q(n, std::vector<double>(actions(), 0.0));
        for (int it = 0; it < 100000; ++it) {
            double change = 0.0;
            auto nq = q;
            for (int s = 0; s < n; ++s)
                for (int a = 0; a < actions(); ++a) {
                    const auto& row = q[next(s, a)];
                    nq[s][a] = reward(s) + gamma * *std::max_element(row.begin(), row.end());
                    change = std::max(change, std::abs(nq[s][a] - q[s][a]));
                }
            q = nq;
            if (change < 1e-13) break;
        }
        return q;
    }

    /// Value of a deterministic policy (policy[s] = action) by iterating its Bellman operator.
    std::vector<double> policy_value(const std::vector<int>& policy) const {
        std::vector<double> v(n, 0.0);
        for (int it = 0; it < 100000; ++it) {
            double change = 0.0;
            auto nv = v;
            for (int s = 0; s < n; ++s) {
                nv[s] = reward(s) + gamma * v[next(s, policy[s])];
                change = std::max(change, std::abs(nv[s] - v[s]));
            }
            v = nv;
            if (change < 1e-13) break;
        }
        return v;
    }

    static int action_of(const std::string& action_str) {
        if (action_str == "nop()") return 0;
        // "move(pK)"
        return 1 + std::stoi(action_str.substr(6, action_str.size() - 7));
    }

    static int state_of(const std::string& key) {
        // "at(pK)" is the only fluent; statics start with "adjacent".
        auto pos = key.find("at(p");
        return std::stoi(key.substr(pos + 4));
    }
};

// ---------------------------------------------------------------------------
// Central finite differences on a random tiny network.

/// |analytic - numeric| / max(|analytic| + |numeric|, 1e-6); the floor keeps
/// parameters with (near) zero gradient from dividing round-off by zero.
inline double gradient_relative_error(double analytic, double numeric) {
    return std::abs(analytic - numeric) / std::max(std::abs(analytic) + std::abs(numeric), 1e-6);
}

struct GradientCheck {
    std::vector<int> dims;
    std::size_t parameters = 0;
    double max_relative_error = 0.0;
};

inline GradientCheck check_random_network_gradient(std::uint64_t seed, double h = 1e-5) {
    Rng rng(seed);
    std::vector<int> dims{2 + static_cast<int>(rng.index(4))};
    const int hidden_layers = 1 + static_cast<int>(rng.index(2));
    for (int l = 0; l < hidden_layers; ++l) dims.push_back(2 + static_cast<int>(rng.index(5)));
    dims.push_back(1);
    QNet net(dims, seed * 7 + 1);
    const int batch = 1 + static_cast<int>(rng.index(6));
    Eigen::MatrixXd x(dims.front(), batch);
    Eigen::VectorXd y(batch);
    for (int j = 0; j < batch; ++j) {
        for (int i = 0; i < dims.front(); ++i) x(i, j) = 4.0 * rng.uniform() - 2.0;
        y(j) = 4.0 * rng.uniform() - 2.0;
    }
    std::vector<double> grad;
    net.loss_and_gradient(x, y, grad);
    GradientCheck out{dims, grad.size(), 0.0};
    const auto base = net.parameters();
    for (std::size_t i = 0; i < base.size(); ++i) {
        auto plus = base, minus = base;
        plus[i] += h;
        minus[i] -= h;
        net.set_parameters(plus);
        const double lp = net.loss(x, y);
        net.set_parameters(minus);
        const double lm = net.loss(x, y);
        const double numeric = (lp - lm) / (2.0 * h);
        out.max_relative_error = std::max(out.max_relative_error, gradient_relative_error(grad[i], numeric));
    }
    net.set_parameters(base);
    return out;
}

} // namespace grl::oracle
