#include "grl/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "grl/dynamics.hpp"
#include "grl/error.hpp"

namespace grl {

double InstanceSpec::param(std::string_view key) const {
    auto it = params.find(std::string(key));
    if (it == params.end()) throw ValidationError("instance has no parameter '" + std::string(key) + "'");
    return it->second;
}

namespace {

struct Token {
    enum Kind { Ident, Number, LParen, RParen, Comma, Equals } kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

/// Text of one section, kept as (line, column, text) fragments so tokens keep
/// their source position.
struct Fragment {
    std::size_t line;
    std::size_t column;
    std::string text;
};

struct Section {
    std::string name;
    std::size_t line = 0;
    std::size_t column = 0;
    std::vector<Fragment> fragments;
};

std::vector<Token> tokenize(const Section& section) {
    std::vector<Token> out;
    for (const auto& frag : section.fragments) {
        const std::string& s = frag.text;
        std::size_t i = 0;
        while (i < s.size()) {
            char c = s[i];
            std::size_t col = frag.column + i;
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            switch (c) {
            case '(': out.push_back({Token::LParen, "(", frag.line, col}); ++i; continue;
            case ')': out.push_back({Token::RParen, ")", frag.line, col}); ++i; continue;
            case ',': out.push_back({Token::Comma, ",", frag.line, col}); ++i; continue;
            case '=': out.push_back({Token::Equals, "=", frag.line, col}); ++i; continue;
            default: break;
            }
            if (!is_name_char(c) && c != '+')
                throw ParseError(frag.line, col, std::string("unexpected character '") + c + "'");
            std::size_t j = i;
            while (j < s.size() && (is_name_char(s[j]) || s[j] == '+')) ++j;
            std::string word = s.substr(i, j - i);
            bool numeric = std::isdigit(static_cast<unsigned char>(word[0])) || word[0] == '-' ||
                           word[0] == '+' || word[0] == '.';
            out.push_back({numeric ? Token::Number : Token::Ident, word, frag.line, col});
            i = j;
        }
    }
    return out;
}

struct PositionedFact {
    GroundFact fact;
    std::size_t line;
    std::size_t column;
};

std::vector<PositionedFact> parse_facts(const Section& section) {
    auto toks = tokenize(section);
    std::vector<PositionedFact> out;
    std::size_t i = 0;
    auto expect = [&](Token::Kind kind, const char* what) -> const Token& {
        if (i >= toks.size()) {
            const Token& last = toks.back();
            throw ParseError(last.line, last.column + last.text.size(), std::string("expected ") + what);
        }
        if (toks[i].kind != kind)
            throw ParseError(toks[i].line, toks[i].column,
                             std::string("expected ") + what + ", found '" + toks[i].text + "'");
        return toks[i++];
    };
    while (i < toks.size()) {
        const Token& head = expect(Token::Ident, "predicate name");
        PositionedFact pf{{head.text, {}}, head.line, head.column};
        // A bare name is a nullary fact.
        if (i < toks.size() && toks[i].kind == Token::LParen) {
            ++i;
            if (i < toks.size() && toks[i].kind == Token::RParen) {
                ++i;
            } else {
                while (true) {
                    const Token& arg = i < toks.size() && toks[i].kind == Token::Number
                                           ? toks[i++]
                                           : expect(Token::Ident, "object name");
                    pf.fact.args.push_back(arg.text);
                    if (i < toks.size() && toks[i].kind == Token::Comma) {
                        ++i;
                        continue;
                    }
                    expect(Token::RParen, "')'");
                    break;
                }
            }
        }
        out.push_back(std::move(pf));
    }
    return out;
}

std::optional<double> to_number(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<long long> to_integer(const std::string& s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

Token single_token(const Section& section) {
    auto toks = tokenize(section);
    if (toks.empty()) throw ParseError(section.line, section.column, "section '" + section.name + "' is empty");
    if (toks.size() > 1)
        throw ParseError(toks[1].line, toks[1].column,
                         "section '" + section.name + "' takes a single value");
    return toks[0];
}

constexpr std::string_view kSections[] = {"name", "domain", "objects", "static", "init", "horizon", "seed", "params"};

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

InstanceSpec parse_instance(std::string_view text) {
    std::vector<Section> sections;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);

        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;

        std::size_t colon = line.find(':');
        if (colon != std::string::npos) {
            std::string header = line.substr(first, colon - first);
            while (!header.empty() && std::isspace(static_cast<unsigned char>(header.back()))) header.pop_back();
            bool ident = !header.empty() && std::all_of(header.begin(), header.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
            });
            if (!ident) throw ParseError(line_no, colon + 1, "malformed section header");
            if (std::find(std::begin(kSections), std::end(kSections), header) == std::end(kSections))
                throw ParseError(line_no, first + 1, "unknown section '" + header + "'");
            for (const auto& s : sections)
                if (s.name == header) throw ParseError(line_no, first + 1, "duplicate section '" + header + "'");
            sections.push_back({header, line_no, first + 1, {}});
            sections.back().fragments.push_back({line_no, colon + 2, line.substr(colon + 1)});
        } else {
            if (sections.empty()) throw ParseError(line_no, first + 1, "content outside of any section");
            sections.back().fragments.push_back({line_no, 1, line});
        }
        if (eol == text.size()) break;
    }

    auto find = [&](std::string_view name) -> const Section* {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    };

    InstanceSpec spec;

    const Section* domain_sec = find("domain");
    if (!domain_sec) throw ParseError(line_no, 1, "missing 'domain:' section");
    const Token dom_tok = single_token(*domain_sec);
    const std::string& dom_name = dom_tok.text;
    std::shared_ptr<const Dynamics> dynamics;
    try {
        dynamics = find_dynamics(dom_name);
    } catch (const ValidationError& e) {
        throw ParseError(dom_tok.line, dom_tok.column, e.what());
    }
    spec.domain = dynamics->domain().with_nop();
    spec.nop_injected = !dynamics->domain().find_schema("nop");

    const Section* obj_sec = find("objects");
    if (!obj_sec) throw ParseError(line_no, 1, "missing 'objects:' section");
    {
        auto toks = tokenize(*obj_sec);
        std::vector<std::string> names;
        for (const auto& t : toks) {
            if (t.kind == Token::Comma) continue;
            if (t.kind != Token::Ident && t.kind != Token::Number)
                throw ParseError(t.line, t.column, "expected object name, found '" + t.text + "'");
            if (std::find(names.begin(), names.end(), t.text) != names.end())
                throw ParseError(t.line, t.column, "duplicate object '" + t.text + "'");
            names.push_back(t.text);
        }
        if (names.empty()) throw ParseError(obj_sec->line, obj_sec->column, "universe must be non-empty");
        spec.universe = ObjectUniverse(std::move(names));
    }

    spec.params = dynamics->default_params();
    if (const Section* sec = find("params")) {
        auto toks = tokenize(*sec);
        std::size_t i = 0;
        while (i < toks.size()) {
            const Token& key = toks[i];
            if (key.kind != Token::Ident) throw ParseError(key.line, key.column, "expected parameter name");
            if (!spec.params.count(key.text))
                throw ParseError(key.line, key.column,
                                 "unknown parameter '" + key.text + "' for domain '" + dom_name + "'");
            if (i + 1 >= toks.size() || toks[i + 1].kind != Token::Equals)
                throw ParseError(key.line, key.column + key.text.size(), "expected '=' after parameter name");
            if (i + 2 >= toks.size() || toks[i + 2].kind != Token::Number)
                throw ParseError(toks[i + 1].line, toks[i + 1].column + 1, "expected numeric value");
            auto v = to_number(toks[i + 2].text);
            if (!v || !std::isfinite(*v))
                throw ParseError(toks[i + 2].line, toks[i + 2].column, "invalid number '" + toks[i + 2].text + "'");
            spec.params[key.text] = *v;
            i += 3;
        }
    }

    const auto statics = dynamics->static_predicates();
    auto is_static = [&](const std::string& p) {
        return std::find(statics.begin(), statics.end(), p) != statics.end();
    };
    auto read_facts = [&](const Section& sec, bool want_static) {
        std::set<GroundFact> out;
        for (auto& pf : parse_facts(sec)) {
            try {
                validate_fact(pf.fact, spec.domain, spec.universe);
            } catch (const ValidationError& e) {
                throw ParseError(pf.line, pf.column, e.what());
            }
            if (is_static(pf.fact.predicate) != want_static)
                throw ParseError(pf.line, pf.column,
                                 "predicate '" + pf.fact.predicate + "' belongs in '" +
                                     (want_static ? "init" : "static") + ":'");
            out.insert(std::move(pf.fact));
        }
        return out;
    };
    if (const Section* sec = find("static")) spec.static_facts = read_facts(*sec, true);
    if (const Section* sec = find("init"))
        spec.initial_facts = read_facts(*sec, false);
    else
        spec.initial_facts = dynamics->default_init(spec.universe, spec.static_facts);

    if (const Section* sec = find("horizon")) {
        const Token t = single_token(*sec);
        auto v = to_integer(t.text);
        if (!v || *v < 1) throw ParseError(t.line, t.column, "horizon must be a positive integer");
        spec.horizon = static_cast<int>(*v);
    }
    if (const Section* sec = find("seed")) {
        const Token t = single_token(*sec);
        auto v = to_integer(t.text);
        if (!v || *v < 0) throw ParseError(t.line, t.column, "seed must be a non-negative integer");
        spec.seed = static_cast<std::uint64_t>(*v);
    }
    if (const Section* sec = find("name")) spec.name = single_token(*sec).text;
    return spec;
}

InstanceSpec load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open instance file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    InstanceSpec spec = parse_instance(ss.str());
    if (spec.name.empty()) spec.name = path.stem().string();
    return spec;
}

std::string format_instance(const InstanceSpec& spec) {
    std::ostringstream out;
    if (!spec.name.empty()) out << "name: " << spec.name << '\n';
    out << "domain: " << spec.domain.name() << '\n';
    out << "objects:";
    for (const auto& o : spec.universe.objects()) out << ' ' << o;
    out << '\n';
    out << "static:\n";
    for (const auto& f : spec.static_facts) out << "  " << f.str() << '\n';
    out << "init:\n";
    for (const auto& f : spec.initial_facts) out << "  " << f.str() << '\n';
    out << "horizon: " << spec.horizon << '\n';
    out << "seed: " << spec.seed << '\n';
    if (!spec.params.empty()) {
        out << "params:\n";
        for (const auto& [k, v] : spec.params) out << "  " << k << " = " << format_number(v) << '\n';
    }
    return out.str();
}

void validate_instance(const InstanceSpec& spec) {
    auto dynamics = find_dynamics(spec.domain.name());
    if (spec.domain != dynamics->domain().with_nop())
        throw ValidationError("instance domain does not match registered domain '" + spec.domain.name() + "'");
    if (spec.universe.size() == 0) throw ValidationError("universe must be non-empty");
    if (spec.horizon < 1) throw ValidationError("horizon must be at least 1");
    const auto statics = dynamics->static_predicates();
    for (const auto& f : spec.static_facts) {
        validate_fact(f, spec.domain, spec.universe);
        if (std::find(statics.begin(), statics.end(), f.predicate) == statics.end())
            throw ValidationError("fluent '" + f.str() + "' listed as static");
    }
    for (const auto& f : spec.initial_facts) {
        validate_fact(f, spec.domain, spec.universe);
        if (std::find(statics.begin(), statics.end(), f.predicate) != statics.end())
            throw ValidationError("static fact '" + f.str() + "' listed as initial fluent");
    }
    for (const auto& [k, v] : dynamics->default_params())
        if (!spec.params.count(k)) throw ValidationError("missing parameter '" + k + "'");
}

} // namespace grl
