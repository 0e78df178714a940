#include "grl/relational.hpp"

#include <algorithm>
#include <unordered_set>

#include "grl/error.hpp"

namespace grl {

namespace {

std::string call_string(const std::string& head, const std::vector<std::string>& args) {
    std::string out = head;
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += args[i];
    }
    out += ')';
    return out;
}

} // namespace

Domain::Domain(std::string name, std::vector<PredicateSignature> predicates,
               std::vector<ActionSchema> action_schemas)
    : name_(std::move(name)), predicates_(std::move(predicates)), schemas_(std::move(action_schemas)) {
    std::unordered_set<std::string> seen;
    for (const auto& p : predicates_) {
        if (!is_valid_name(p.name)) throw ValidationError("invalid predicate name '" + p.name + "'");
        if (p.arity < 0 || p.arity > 2)
            throw ValidationError("predicate '" + p.name + "' has arity " + std::to_string(p.arity) +
                                  "; at most 2 is supported");
        if (!seen.insert(p.name).second) throw ValidationError("duplicate predicate '" + p.name + "'");
    }
    seen.clear();
    for (const auto& a : schemas_) {
        if (!is_valid_name(a.name)) throw ValidationError("invalid action name '" + a.name + "'");
        if (a.arity < 0) throw ValidationError("action '" + a.name + "' has negative arity");
        if (!seen.insert(a.name).second) throw ValidationError("duplicate action schema '" + a.name + "'");
    }
    std::sort(schemas_.begin(), schemas_.end(),
              [](const ActionSchema& l, const ActionSchema& r) { return l.name < r.name; });
}

std::optional<int> Domain::predicate_arity(std::string_view predicate) const {
    for (const auto& p : predicates_)
        if (p.name == predicate) return p.arity;
    return std::nullopt;
}

std::optional<std::size_t> Domain::schema_index(std::string_view schema) const {
    for (std::size_t i = 0; i < schemas_.size(); ++i)
        if (schemas_[i].name == schema) return i;
    return std::nullopt;
}

const ActionSchema* Domain::find_schema(std::string_view schema) const {
    auto idx = schema_index(schema);
    return idx ? &schemas_[*idx] : nullptr;
}

int Domain::max_action_arity() const {
    int n = 0;
    for (const auto& a : schemas_) n = std::max(n, a.arity);
    return n;
}

Domain Domain::with_nop() const {
    if (find_schema("nop")) return *this;
    auto schemas = schemas_;
    schemas.push_back({"nop", 0});
    return Domain(name_, predicates_, std::move(schemas));
}

bool is_valid_name(std::string_view name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-' || c == '.';
    });
}

ObjectUniverse::ObjectUniverse(std::vector<std::string> objects) : objects_(std::move(objects)) {
    if (objects_.empty()) throw ValidationError("universe must be non-empty");
    for (std::size_t i = 0; i < objects_.size(); ++i) {
        if (!is_valid_name(objects_[i])) throw ValidationError("invalid object name '" + objects_[i] + "'");
        if (!index_.emplace(objects_[i], i).second)
            throw ValidationError("duplicate object '" + objects_[i] + "'");
    }
}

std::optional<std::size_t> ObjectUniverse::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string GroundFact::str() const { return call_string(predicate, args); }

std::string GroundAction::str() const { return call_string(schema, args); }

void validate_fact(const GroundFact& fact, const Domain& domain, const ObjectUniverse& universe) {
    auto arity = domain.predicate_arity(fact.predicate);
    if (!arity) throw ValidationError("unknown predicate '" + fact.predicate + "'");
    if (static_cast<std::size_t>(*arity) != fact.args.size())
        throw ValidationError("predicate '" + fact.predicate + "' expects " + std::to_string(*arity) +
                              " argument(s), got " + std::to_string(fact.args.size()));
    for (const auto& o : fact.args)
        if (!universe.contains(o)) throw ValidationError("object '" + o + "' is not declared");
}

void validate_action(const GroundAction& action, const Domain& domain, const ObjectUniverse& universe) {
    const ActionSchema* schema = domain.find_schema(action.schema);
    if (!schema) throw ValidationError("unknown action '" + action.schema + "'");
    if (static_cast<std::size_t>(schema->arity) != action.args.size())
        throw ValidationError("action '" + action.schema + "' expects " + std::to_string(schema->arity) +
                              " argument(s), got " + std::to_string(action.args.size()));
    for (const auto& o : action.args)
        if (!universe.contains(o)) throw ValidationError("object '" + o + "' is not declared");
}

std::string canonical_state_key(const RelationalState& state) {
    if (state.empty()) return std::string(kEmptyStateKey);
    std::string key;
    for (const auto& f : state) {
        if (!key.empty()) key += ';';
        key += f.str();
    }
    return key;
}

std::vector<GroundAction> ground_actions(const Domain& domain, const ObjectUniverse& universe) {
    std::vector<std::string> names = universe.objects();
    std::sort(names.begin(), names.end());

    std::vector<GroundAction> out;
    for (const auto& schema : domain.action_schemas()) {
        std::vector<std::size_t> odometer(static_cast<std::size_t>(schema.arity), 0);
        while (true) {
            GroundAction a{schema.name, {}};
            for (auto i : odometer) a.args.push_back(names[i]);
            out.push_back(std::move(a));
            // Rightmost argument varies fastest, giving lexicographic tuples.
            int pos = schema.arity - 1;
            while (pos >= 0 && ++odometer[pos] == names.size()) odometer[pos--] = 0;
            if (pos < 0) break;
        }
    }
    return out;
}

GroundFact make_fact(std::string predicate, std::vector<std::string> args) {
    return GroundFact{std::move(predicate), std::move(args)};
}

} // namespace grl
