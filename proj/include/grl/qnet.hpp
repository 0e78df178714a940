#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "grl/encoder.hpp"

namespace grl {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    bool operator==(const AdamConfig&) const = default;
};

/// Fully connected ReLU network with a scalar linear output, trained with
/// mean-squared error and Adam. All parameters live in one flat vector
/// (per layer: weight matrix column-major, then bias), which is also the
/// order used by gradients, Adam moments and checkpoints.
class QNet {
public:
    /// Uniform fan-in initialisation: every weight and bias of a layer with
    /// fan-in n is drawn from U(-1/sqrt(n), 1/sqrt(n)).
    QNet(std::vector<int> dims, std::uint64_t seed, AdamConfig adam = {});

    static QNet zeros(std::vector<int> dims, AdamConfig adam = {});

    /// dims = {input, hidden..., 1}.
    static std::vector<int> standard_dims(std::size_t input_size, const std::vector<int>& hidden = {64, 64});

    const std::vector<int>& dims() const { return dims_; }
    std::size_t input_size() const { return static_cast<std::size_t>(dims_.front()); }
    std::size_t parameter_count() const { return params_.size(); }

    /// Throws DimensionError when x has the wrong length.
    double predict(std::span<const double> x) const;
    double predict(const AbstractStateVector& s, const AbstractActionVector& a,
                   const CountScaler* scaler = nullptr) const;

    /// One column per sample.
    Eigen::RowVectorXd predict_batch(const Eigen::MatrixXd& inputs) const;

    /// Mean squared error over the batch and its gradient w.r.t. the flat parameters.
    double loss_and_gradient(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                             std::vector<double>& gradient) const;
    double loss(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) const;

    /// One Adam step on the batch; returns the loss before the step.
    double train_minibatch(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets);

    const std::vector<double>& parameters() const { return params_; }
    void set_parameters(std::vector<double> params);

    const AdamConfig& adam() const { return adam_; }
    void set_learning_rate(double lr) { adam_.learning_rate = lr; }
    std::uint64_t adam_steps() const { return step_; }
    const std::vector<double>& adam_first_moment() const { return m_; }
    const std::vector<double>& adam_second_moment() const { return v_; }
    void set_adam_state(std::uint64_t steps, std::vector<double> m, std::vector<double> v);

    /// Order-sensitive hash of parameters and optimizer state.
    std::uint64_t fingerprint() const;

private:
    QNet(std::vector<int> dims, AdamConfig adam);

    struct LayerView {
        std::size_t weight_offset;
        std::size_t bias_offset;
        int in;
        int out;
    };

    std::vector<int> dims_;
    std::vector<LayerView> layers_;
    std::vector<double> params_;
    AdamConfig adam_;
    std::uint64_t step_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

} // namespace grl
