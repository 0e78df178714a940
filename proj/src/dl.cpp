#include "grl/dl.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

#include "grl/error.hpp"
#include "grl/relational.hpp"

namespace grl::dl {

struct Concept::Node {
    ConceptKind kind;
    std::string predicate;
    std::vector<Concept> children;
    std::vector<Role> roles;
    int complexity = 1;
    std::string str;
};

namespace {

const std::string kTop = "Top";

std::string call(std::string_view head, std::initializer_list<std::string> args) {
    std::string out(head);
    out += '(';
    bool first = true;
    for (const auto& a : args) {
        if (!first) out += ',';
        out += a;
        first = false;
    }
    out += ')';
    return out;
}

} // namespace

Concept Concept::primitive(std::string predicate) {
    if (!is_valid_name(predicate)) throw ValidationError("invalid predicate name '" + predicate + "'");
    auto n = std::make_shared<Node>();
    n->kind = ConceptKind::Primitive;
    n->str = predicate;
    n->predicate = std::move(predicate);
    return Concept(std::move(n));
}

Concept Concept::top() {
    auto n = std::make_shared<Node>();
    n->kind = ConceptKind::Top;
    n->str = kTop;
    return Concept(std::move(n));
}

Concept Concept::negation(Concept c) {
    auto n = std::make_shared<Node>();
    n->kind = ConceptKind::Not;
    n->complexity = 1 + c.complexity();
    n->str = call("Not", {c.str()});
    n->children = {std::move(c)};
    return Concept(std::move(n));
}

Concept Concept::conjunction(Concept a, Concept b) {
    if (b.str() < a.str()) std::swap(a, b);
    auto n = std::make_shared<Node>();
    n->kind = ConceptKind::And;
    n->complexity = 1 + a.complexity() + b.complexity();
    n->str = call("And", {a.str(), b.str()});
    n->children = {std::move(a), std::move(b)};
    return Concept(std::move(n));
}

Concept Concept::forall(Role r, Concept c) {
    auto n = std::make_shared<Node>();
    n->kind = ConceptKind::Forall;
    n->complexity = 1 + r.complexity() + c.complexity();
    n->str = call("Forall", {r.str(), c.str()});
    n->roles = {std::move(r)};
    n->children = {std::move(c)};
    return Concept(std::move(n));
}

Concept Concept::exists(Role r, Concept c) {
    auto n = std::make_shared<Node>();
    n->kind = ConceptKind::Exists;
    n->complexity = 1 + r.complexity() + c.complexity();
    n->str = call("Exists", {r.str(), c.str()});
    n->roles = {std::move(r)};
    n->children = {std::move(c)};
    return Concept(std::move(n));
}

Concept Concept::role_equality(Role r, Role s) {
    if (s.str() < r.str()) std::swap(r, s);
    auto n = std::make_shared<Node>();
    n->kind = ConceptKind::RoleEq;
    n->complexity = 1 + r.complexity() + s.complexity();
    n->str = call("Equal", {r.str(), s.str()});
    n->roles = {std::move(r), std::move(s)};
    return Concept(std::move(n));
}

ConceptKind Concept::kind() const { return node_->kind; }
const std::string& Concept::predicate() const { return node_->predicate; }
const Concept& Concept::child() const { return node_->children.at(0); }
const Concept& Concept::second() const { return node_->children.at(1); }
const Role& Concept::role() const { return node_->roles.at(0); }
const Role& Concept::second_role() const { return node_->roles.at(1); }
int Concept::complexity() const { return node_->complexity; }
const std::string& Concept::str() const { return node_->str; }

Feature::Feature(Concept c) : kind_(c), complexity_(c.complexity()), str_(c.str()) {}

Feature::Feature(DistanceFeature d)
    : kind_(d),
      complexity_(1 + d.source.complexity() + d.role.complexity() + d.target.complexity()),
      str_(call("Distance", {d.source.str(), d.role.str(), d.target.str()})) {}

bool canonical_less(const Feature& a, const Feature& b) {
    if (a.complexity() != b.complexity()) return a.complexity() < b.complexity();
    return a.str() < b.str();
}

namespace {

/// Recursive-descent reader for serialized concepts, roles and features.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::string name() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                       text_[pos_] == '-' || text_[pos_] == '.'))
            ++pos_;
        if (start == pos_) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    Role role() {
        std::string head = name();
        if (head == "Inverse" && peek('(')) {
            expect('(');
            Role inner = role();
            expect(')');
            return inner.inverse();
        }
        return Role(head);
    }

    Concept concept_() {
        std::string head = name();
        if (!peek('(')) return head == kTop ? Concept::top() : Concept::primitive(head);
        expect('(');
        Concept out = Concept::top();
        if (head == "Not") {
            out = Concept::negation(concept_());
        } else if (head == "And") {
            Concept a = concept_();
            expect(',');
            out = Concept::conjunction(a, concept_());
        } else if (head == "Forall" || head == "Exists") {
            Role r = role();
            expect(',');
            Concept c = concept_();
            out = head == "Forall" ? Concept::forall(r, c) : Concept::exists(r, c);
        } else if (head == "Equal") {
            Role r = role();
            expect(',');
            out = Concept::role_equality(r, role());
        } else {
            fail("unknown constructor '" + head + "'");
        }
        expect(')');
        return out;
    }

    Feature feature() {
        skip_space();
        if (text_.substr(pos_).starts_with("Distance(")) {
            name();
            expect('(');
            Concept a = concept_();
            expect(',');
            Role r = role();
            expect(',');
            Concept b = concept_();
            expect(')');
            return Feature(DistanceFeature{a, r, b});
        }
        return Feature(concept_());
    }

    void finish() {
        skip_space();
        if (pos_ != text_.size()) fail("trailing input");
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(1, pos_ + 1, message); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Role parse_role(std::string_view text) {
    Reader r(text);
    Role out = r.role();
    r.finish();
    return out;
}

Concept parse_concept(std::string_view text) {
    Reader r(text);
    Concept out = r.concept_();
    r.finish();
    return out;
}

Feature parse_feature(std::string_view text) {
    Reader r(text);
    Feature out = r.feature();
    r.finish();
    return out;
}

std::string serialize_features(const std::vector<Feature>& features) {
    std::ostringstream out;
    out << "# features: " << features.size() << "\n";
    for (const auto& f : features) out << f.complexity() << ' ' << f.str() << '\n';
    return out.str();
}

std::vector<Feature> parse_features(std::string_view text) {
    std::vector<Feature> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        line = line.substr(first);

        int complexity = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), complexity);
        if (ec != std::errc()) throw ParseError(line_no, first + 1, "expected feature complexity");
        std::size_t offset = static_cast<std::size_t>(ptr - line.data());
        std::string_view body = line.substr(offset);
        while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.remove_suffix(1);
        std::optional<Feature> parsed;
        try {
            parsed = parse_feature(body);
        } catch (const ParseError& e) {
            throw ParseError(line_no, first + offset + e.column(), "malformed feature '" + std::string(body) + "'");
        }
        if (parsed->complexity() != complexity)
            throw ParseError(line_no, first + 1,
                             "stated complexity " + std::to_string(complexity) + " but '" + parsed->str() +
                                 "' has " + std::to_string(parsed->complexity()));
        parsed->id = out.size();
        out.push_back(std::move(*parsed));
    }
    return out;
}

} // namespace grl::dl
