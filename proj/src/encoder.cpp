#include "grl/encoder.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "grl/error.hpp"

namespace grl {

EncodingLayout EncodingLayout::build(const Domain& domain, std::vector<dl::Feature> features) {
    EncodingLayout layout;
    layout.vocabulary = domain.predicates();
    std::sort(features.begin(), features.end(), dl::canonical_less);
    for (std::size_t i = 0; i < features.size(); ++i) features[i].id = i;
    layout.features = std::move(features);
    layout.actions = domain.action_schemas();
    layout.max_params = static_cast<std::size_t>(domain.max_action_arity());
    return layout;
}

void EncodingLayout::check_compatible(const Domain& domain) const {
    if (domain.action_schemas() != actions)
        throw LayoutError("layout actions do not match domain '" + domain.name() + "'");
    for (const auto& p : vocabulary) {
        auto arity = domain.predicate_arity(p.name);
        if (!arity || *arity != p.arity)
            throw LayoutError("layout predicate '" + p.name + "' is not part of domain '" + domain.name() + "'");
    }
}

std::string EncodingLayout::serialize() const {
    std::ostringstream out;
    out << "layout 1\n";
    out << "predicates";
    for (const auto& p : vocabulary) out << ' ' << p.name << '/' << p.arity;
    out << "\nactions";
    for (const auto& a : actions) out << ' ' << a.name << '/' << a.arity;
    out << "\nmax_params " << max_params << '\n';
    out << "scale";
    if (!scaler) out << " none";
    else
        for (int m : scaler->maxima()) out << ' ' << m;
    out << '\n';
    out << dl::serialize_features(features);
    return out.str();
}

namespace {

std::vector<std::pair<std::string, int>> parse_signatures(const std::string& line, std::string_view keyword) {
    std::istringstream in(line);
    std::string word;
    in >> word;
    if (word != keyword) throw LayoutError("layout: expected '" + std::string(keyword) + "' line");
    std::vector<std::pair<std::string, int>> out;
    while (in >> word) {
        auto slash = word.rfind('/');
        int arity = -1;
        if (slash == std::string::npos ||
            std::from_chars(word.data() + slash + 1, word.data() + word.size(), arity).ec != std::errc())
            throw LayoutError("layout: malformed signature '" + word + "'");
        out.emplace_back(word.substr(0, slash), arity);
    }
    return out;
}

} // namespace

EncodingLayout EncodingLayout::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header, preds, acts, maxp, scale;
    if (!std::getline(in, header) || header != "layout 1") throw LayoutError("layout: unsupported header");
    if (!std::getline(in, preds) || !std::getline(in, acts) || !std::getline(in, maxp) ||
        !std::getline(in, scale))
        throw LayoutError("layout: truncated");
    EncodingLayout layout;
    for (auto& [name, arity] : parse_signatures(preds, "predicates")) layout.vocabulary.push_back({name, arity});
    for (auto& [name, arity] : parse_signatures(acts, "actions")) layout.actions.push_back({name, arity});
    std::istringstream mp(maxp);
    std::string kw;
    if (!(mp >> kw >> layout.max_params) || kw != "max_params") throw LayoutError("layout: expected max_params");
    std::istringstream sc(scale);
    if (!(sc >> kw) || kw != "scale") throw LayoutError("layout: expected scale");
    std::vector<int> maxima;
    std::string word;
    while (sc >> word) {
        if (word == "none" && maxima.empty()) break;
        int m = 0;
        if (std::from_chars(word.data(), word.data() + word.size(), m).ec != std::errc() || m <= 0)
            throw LayoutError("layout: malformed scale '" + word + "'");
        maxima.push_back(m);
    }
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        layout.features = dl::parse_features(rest);
    } catch (const ParseError& e) {
        throw LayoutError(std::string("layout features: ") + e.what());
    }
    if (!maxima.empty()) {
        if (maxima.size() != layout.features.size()) throw LayoutError("layout: scale has the wrong length");
        layout.scaler = CountScaler(std::move(maxima));
    }
    return layout;
}

bool EncodingLayout::operator==(const EncodingLayout& other) const {
    const bool same_scale = scaler.has_value() == other.scaler.has_value() &&
                            (!scaler || scaler->maxima() == other.scaler->maxima());
    if (!same_scale || vocabulary != other.vocabulary || actions != other.actions || max_params != other.max_params ||
        features.size() != other.features.size())
        return false;
    for (std::size_t i = 0; i < features.size(); ++i)
        if (features[i].str() != other.features[i].str()) return false;
    return true;
}

StateEncoder::StateEncoder(const EncodingLayout& layout, const ObjectUniverse& universe,
                           const RelationalState& state)
    : layout_(&layout),
      universe_(&universe),
      interp_(layout.vocabulary, universe, state),
      eval_(layout.features, interp_) {
    state_.values = eval_.values();
}

AbstractActionVector StateEncoder::encode_action(const GroundAction& action) const {
    const auto& acts = layout_->actions;
    auto it = std::find_if(acts.begin(), acts.end(), [&](const ActionSchema& a) { return a.name == action.schema; });
    if (it == acts.end()) throw LayoutError("action schema '" + action.schema + "' is not in the layout");
    if (action.args.size() > layout_->max_params)
        throw LayoutError("action '" + action.str() + "' has more arguments than the layout allows");

    const std::size_t nf = layout_->feature_count();
    AbstractActionVector out;
    out.name_onehot.assign(acts.size(), 0);
    out.name_onehot[static_cast<std::size_t>(it - acts.begin())] = 1;
    out.param_blocks.assign(layout_->max_params * nf, 0);
    for (std::size_t j = 0; j < action.args.size(); ++j) {
        auto obj = universe_->index_of(action.args[j]);
        if (!obj) throw ValidationError("object '" + action.args[j] + "' is not in the universe");
        for (std::size_t f = 0; f < nf; ++f) out.param_blocks[j * nf + f] = eval_.members(f).test(*obj) ? 1 : 0;
    }
    return out;
}

AbstractStateVector encode_state(const EncodingLayout& layout, const RelationalState& state,
                                 const ObjectUniverse& universe) {
    return StateEncoder(layout, universe, state).state_vector();
}

AbstractActionVector encode_action(const EncodingLayout& layout, const GroundAction& action,
                                   const RelationalState& state, const ObjectUniverse& universe) {
    return StateEncoder(layout, universe, state).encode_action(action);
}

void CountScaler::observe(const AbstractStateVector& s) {
    for (std::size_t i = 0; i < maxima_.size() && i < s.values.size(); ++i)
        maxima_[i] = std::max(maxima_[i], s.values[i]);
}

void write_network_input(const AbstractStateVector& s, const AbstractActionVector& a, std::span<double> out,
                         const CountScaler* scaler) {
    const std::size_t need = s.values.size() + a.name_onehot.size() + a.param_blocks.size();
    if (out.size() != need)
        throw DimensionError("network input has " + std::to_string(out.size()) + " slots, encoding needs " +
                             std::to_string(need));
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        out[k++] = scaler ? scaler->scale(i, s.values[i]) : static_cast<double>(s.values[i]);
    for (auto b : a.name_onehot) out[k++] = b;
    for (auto b : a.param_blocks) out[k++] = b;
}

std::vector<double> network_input(const AbstractStateVector& s, const AbstractActionVector& a,
                                  const CountScaler* scaler) {
    std::vector<double> out(s.values.size() + a.name_onehot.size() + a.param_blocks.size());
    write_network_input(s, a, out, scaler);
    return out;
}

} // namespace grl
