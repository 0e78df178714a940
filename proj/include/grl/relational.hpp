#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace grl {

struct PredicateSignature {
    std::string name;
    int arity = 0;

    auto operator<=>(const PredicateSignature&) const = default;
};

struct ActionSchema {
    std::string name;
    int arity = 0;

    auto operator<=>(const ActionSchema&) const = default;
};

/// Predicates of arity at most 2 and parameterized action names.
/// Action schemas are kept in alphabetical order, which fixes their one-hot index.
class Domain {
public:
    Domain() = default;
    Domain(std::string name, std::vector<PredicateSignature> predicates,
           std::vector<ActionSchema> action_schemas);

    const std::string& name() const { return name_; }
    const std::vector<PredicateSignature>& predicates() const { return predicates_; }
    const std::vector<ActionSchema>& action_schemas() const { return schemas_; }

    std::optional<int> predicate_arity(std::string_view predicate) const;
    std::optional<std::size_t> schema_index(std::string_view schema) const;
    const ActionSchema* find_schema(std::string_view schema) const;
    int max_action_arity() const;

    /// Copy of this domain with a `nop()` schema added when none exists.
    Domain with_nop() const;

    bool operator==(const Domain&) const = default;

private:
    std::string name_;
    std::vector<PredicateSignature> predicates_;
    std::vector<ActionSchema> schemas_;
};

/// Object names are opaque identifiers: [A-Za-z0-9_.-]+.
bool is_valid_name(std::string_view name);

/// Distinct object names in canonical (insertion) order.
class ObjectUniverse {
public:
    ObjectUniverse() = default;
    explicit ObjectUniverse(std::vector<std::string> objects);

    std::size_t size() const { return objects_.size(); }
    const std::string& operator[](std::size_t i) const { return objects_[i]; }
    const std::vector<std::string>& objects() const { return objects_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    bool contains(std::string_view name) const { return index_of(name).has_value(); }

    bool operator==(const ObjectUniverse& other) const { return objects_ == other.objects_; }

private:
    std::vector<std::string> objects_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct GroundFact {
    std::string predicate;
    std::vector<std::string> args;

    auto operator<=>(const GroundFact&) const = default;
    std::string str() const;
};

struct GroundAction {
    std::string schema;
    std::vector<std::string> args;

    auto operator<=>(const GroundAction&) const = default;
    std::string str() const;
};

/// Throws ValidationError on unknown predicate, arity mismatch or undeclared object.
void validate_fact(const GroundFact& fact, const Domain& domain, const ObjectUniverse& universe);
void validate_action(const GroundAction& action, const Domain& domain, const ObjectUniverse& universe);

/// A set of true facts. Iteration order is the lexicographic fact order.
class RelationalState {
public:
    using FactSet = std::set<GroundFact>;

    RelationalState() = default;
    explicit RelationalState(FactSet facts) : facts_(std::move(facts)) {}
    RelationalState(std::initializer_list<GroundFact> facts) : facts_(facts) {}

    const FactSet& facts() const { return facts_; }
    bool contains(const GroundFact& fact) const { return facts_.count(fact) != 0; }
    bool empty() const { return facts_.empty(); }
    std::size_t size() const { return facts_.size(); }

    void insert(GroundFact fact) { facts_.insert(std::move(fact)); }
    void erase(const GroundFact& fact) { facts_.erase(fact); }

    FactSet::const_iterator begin() const { return facts_.begin(); }
    FactSet::const_iterator end() const { return facts_.end(); }

    bool operator==(const RelationalState&) const = default;
    auto operator<=>(const RelationalState&) const = default;

private:
    FactSet facts_;
};

inline bool state_contains(const RelationalState& state, const GroundFact& fact) {
    return state.contains(fact);
}

inline constexpr std::string_view kEmptyStateKey = "{}";

/// Sorted, ';'-joined fact strings; kEmptyStateKey for the empty state.
std::string canonical_state_key(const RelationalState& state);

/// Every instantiation of every schema: schemas alphabetically, then argument
/// tuples in lexicographic order of object names. Repeated arguments are kept.
std::vector<GroundAction> ground_actions(const Domain& domain, const ObjectUniverse& universe);

GroundFact make_fact(std::string predicate, std::vector<std::string> args = {});

} // namespace grl
