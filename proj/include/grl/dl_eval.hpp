#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grl/dl.hpp"
#include "grl/relational.hpp"

namespace grl::dl {

/// Subset of the universe, indexed by universe position.
using ObjectSet = boost::dynamic_bitset<>;

/// A state viewed as a first-order structure over a universe: one object set
/// per unary predicate and successor rows per binary predicate (both directions).
class Interpretation {
public:
    Interpretation(std::span<const PredicateSignature> vocabulary, const ObjectUniverse& universe,
                   const RelationalState& state);
    Interpretation(const Domain& domain, const ObjectUniverse& universe, const RelationalState& state)
        : Interpretation(domain.predicates(), universe, state) {}

    std::size_t size() const { return universe_->size(); }
    const ObjectUniverse& universe() const { return *universe_; }

    /// Throws ValidationError when the predicate is unknown or not unary.
    const ObjectSet& unary(std::string_view predicate) const;

    /// rows[x] = { y | R(x, y) }. Throws ValidationError for unknown or non-binary predicates.
    const std::vector<ObjectSet>& relation(const Role& role) const;

private:
    const ObjectUniverse* universe_;
    std::map<std::string, ObjectSet, std::less<>> unary_;
    std::map<std::string, std::vector<ObjectSet>, std::less<>> forward_;
    std::map<std::string, std::vector<ObjectSet>, std::less<>> backward_;
};

ObjectSet denotation(const Concept& concept_expr, const Interpretation& interp);

/// Multi-source BFS over successor rows; 0 when the sets intersect, |O| when
/// either set is empty or `to` is unreachable.
int shortest_distance(const ObjectSet& from, const std::vector<ObjectSet>& rows, const ObjectSet& to);

/// Shortest r-path length from denotation(source) to denotation(target); 0
/// when they intersect; |O| when either is empty or no path exists.
int distance(const DistanceFeature& feature, const Interpretation& interp);

/// |denotation| for concept features; the distance for distance features.
int feature_value(const Feature& feature, const Interpretation& interp);

/// 1 iff `feature` is a concept feature whose denotation contains the object.
int object_membership(const Feature& feature, std::size_t object_index, const Interpretation& interp);

/// Name-level entry points.
std::set<std::string> eval_concept(const Concept& concept_expr, const RelationalState& state,
                                   const ObjectUniverse& universe, const Domain& domain);
int eval_distance(const Concept& source, const Role& role, const Concept& target, const RelationalState& state,
                  const ObjectUniverse& universe, const Domain& domain);
int object_membership(const Feature& feature, std::string_view object, const RelationalState& state,
                      const ObjectUniverse& universe, const Domain& domain);

/// Evaluates a feature list on one interpretation, sharing sub-concept
/// denotations between features.
class FeatureEvaluation {
public:
    FeatureEvaluation(std::span<const Feature> features, const Interpretation& interp);

    std::size_t size() const { return values_.size(); }
    int value(std::size_t i) const { return values_[i]; }
    const std::vector<int>& values() const { return values_; }
    /// Denotation of concept feature i; empty set (all zeros) for distance features.
    const ObjectSet& members(std::size_t i) const { return members_[i]; }

private:
    std::vector<int> values_;
    std::vector<ObjectSet> members_;
};

} // namespace grl::dl
