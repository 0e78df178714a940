#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace grl::dl {

/// A binary predicate or its inverse. Inverse(Inverse(R)) is R by construction.
class Role {
public:
    Role() = default;
    explicit Role(std::string predicate, bool inverse = false)
        : predicate_(std::move(predicate)), inverse_(inverse) {}

    const std::string& predicate() const { return predicate_; }
    bool is_inverse() const { return inverse_; }
    Role inverse() const { return Role(predicate_, !inverse_); }

    int complexity() const { return inverse_ ? 2 : 1; }
    std::string str() const { return inverse_ ? "Inverse(" + predicate_ + ")" : predicate_; }

    auto operator<=>(const Role&) const = default;

private:
    std::string predicate_;
    bool inverse_ = false;
};

enum class ConceptKind { Primitive, Top, Not, And, Forall, Exists, RoleEq };

/// Immutable concept AST. Nodes are shared, so copies are cheap. The
/// serialized form is the identity: conjunction and role-equality arguments
/// are stored in lexicographic order of their serialization.
class Concept {
public:
    static Concept primitive(std::string predicate);
    static Concept top();
    static Concept negation(Concept c);
    static Concept conjunction(Concept a, Concept b);
    static Concept forall(Role r, Concept c);
    static Concept exists(Role r, Concept c);
    static Concept role_equality(Role r, Role s);

    ConceptKind kind() const;
    /// Primitive only.
    const std::string& predicate() const;
    /// Not, Forall, Exists: the operand. And: the first conjunct.
    const Concept& child() const;
    /// And: the second conjunct.
    const Concept& second() const;
    /// Forall, Exists, RoleEq.
    const Role& role() const;
    /// RoleEq: the second role.
    const Role& second_role() const;

    int complexity() const;
    const std::string& str() const;

    /// Stable address of the shared node, usable as a memo key.
    const void* node_id() const { return node_.get(); }

    bool operator==(const Concept& other) const { return str() == other.str(); }

private:
    struct Node;
    explicit Concept(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Minimum number of role steps from an object in `source` to one in `target`.
struct DistanceFeature {
    Concept source;
    Role role;
    Concept target;
};

class Feature {
public:
    Feature(Concept c);           // NOLINT(google-explicit-constructor)
    Feature(DistanceFeature d);   // NOLINT(google-explicit-constructor)

    bool is_distance() const { return std::holds_alternative<DistanceFeature>(kind_); }
    const Concept& as_concept() const { return std::get<Concept>(kind_); }
    const DistanceFeature& as_distance() const { return std::get<DistanceFeature>(kind_); }

    int complexity() const { return complexity_; }
    const std::string& str() const { return str_; }

    /// Position in the canonical feature ordering.
    std::size_t id = 0;

    bool operator==(const Feature& other) const { return str_ == other.str_; }

private:
    std::variant<Concept, DistanceFeature> kind_;
    int complexity_ = 0;
    std::string str_;
};

/// Canonical order: complexity ascending, then serialized form.
bool canonical_less(const Feature& a, const Feature& b);

Role parse_role(std::string_view text);
Concept parse_concept(std::string_view text);
Feature parse_feature(std::string_view text);

/// One "<complexity> <feature>" line per feature, preceded by a header comment.
std::string serialize_features(const std::vector<Feature>& features);

/// Inverse of serialize_features; checks each stated complexity and assigns ids
/// in file order.
std::vector<Feature> parse_features(std::string_view text);

} // namespace grl::dl
