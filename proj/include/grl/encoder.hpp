#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grl/dl.hpp"
#include "grl/dl_eval.hpp"
#include "grl/relational.hpp"

namespace grl {

struct AbstractStateVector {
    std::vector<int> values;

    bool operator==(const AbstractStateVector&) const = default;
};

struct AbstractActionVector {
    std::vector<std::uint8_t> name_onehot;
    /// max_params consecutive blocks of |F| bits; unused blocks are zero.
    std::vector<std::uint8_t> param_blocks;

    bool operator==(const AbstractActionVector&) const = default;
};

/// Per-feature maximum used to rescale counts to roughly [0, 1]. Off by default.
class CountScaler {
public:
    CountScaler() = default;
    explicit CountScaler(std::size_t features) : maxima_(features, 1) {}
    explicit CountScaler(std::vector<int> maxima) : maxima_(std::move(maxima)) {}

    void observe(const AbstractStateVector& s);
    double scale(std::size_t feature, int value) const {
        return static_cast<double>(value) / static_cast<double>(maxima_[feature]);
    }
    const std::vector<int>& maxima() const { return maxima_; }

private:
    std::vector<int> maxima_;
};

/// Fixed input layout of the Q-network for one domain:
///   [ |F| feature values | |A| one-hot action name | N blocks of |F| membership bits ]
/// The layout does not depend on the instance, so one network serves every
/// instance of the domain.
struct EncodingLayout {
    std::vector<PredicateSignature> vocabulary;
    std::vector<dl::Feature> features;
    /// Alphabetical, as in Domain::action_schemas().
    std::vector<ActionSchema> actions;
    std::size_t max_params = 0;
    /// Set when counts are normalised; part of the layout so checkpoints stay self-describing.
    std::optional<CountScaler> scaler;

    static EncodingLayout build(const Domain& domain, std::vector<dl::Feature> features);

    std::size_t feature_count() const { return features.size(); }
    std::size_t input_size() const { return features.size() + actions.size() + max_params * features.size(); }

    const CountScaler* count_scaler() const { return scaler ? &*scaler : nullptr; }

    /// Throws LayoutError when the domain's actions or predicates differ.
    void check_compatible(const Domain& domain) const;

    std::string serialize() const;
    static EncodingLayout parse(std::string_view text);

    bool operator==(const EncodingLayout& other) const;
};

/// Evaluates the layout's features on one state once, then encodes the state
/// and any number of actions in it.
class StateEncoder {
public:
    StateEncoder(const EncodingLayout& layout, const ObjectUniverse& universe, const RelationalState& state);

    const AbstractStateVector& state_vector() const { return state_; }

    /// Throws LayoutError for a schema outside the layout or too many arguments,
    /// ValidationError for an object outside the universe.
    AbstractActionVector encode_action(const GroundAction& action) const;

private:
    const EncodingLayout* layout_;
    const ObjectUniverse* universe_;
    dl::Interpretation interp_;
    dl::FeatureEvaluation eval_;
    AbstractStateVector state_;
};

AbstractStateVector encode_state(const EncodingLayout& layout, const RelationalState& state,
                                 const ObjectUniverse& universe);

AbstractActionVector encode_action(const EncodingLayout& layout, const GroundAction& action,
                                   const RelationalState& state, const ObjectUniverse& universe);

/// Concatenates (s̄, ā) into `out`, which must have layout.input_size() entries.
void write_network_input(const AbstractStateVector& s, const AbstractActionVector& a, std::span<double> out,
                         const CountScaler* scaler = nullptr);

std::vector<double> network_input(const AbstractStateVector& s, const AbstractActionVector& a,
                                  const CountScaler* scaler = nullptr);

} // namespace grl
