#include "grl/qnet.hpp"

#include <cmath>

#include "grl/error.hpp"
#include "grl/hash.hpp"
#include "grl/rng.hpp"

namespace grl {

namespace {

using MatMap = Eigen::Map<Eigen::MatrixXd>;
using ConstMatMap = Eigen::Map<const Eigen::MatrixXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

} // namespace

QNet::QNet(std::vector<int> dims, AdamConfig adam) : dims_(std::move(dims)), adam_(adam) {
    if (dims_.size() < 2) throw ValidationError("network needs at least an input and an output layer");
    for (int d : dims_)
        if (d <= 0) throw ValidationError("layer sizes must be positive");
    if (dims_.back() != 1) throw ValidationError("network output must be a single Q-value");
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        LayerView view{offset, 0, dims_[l], dims_[l + 1]};
        offset += static_cast<std::size_t>(view.in) * static_cast<std::size_t>(view.out);
        view.bias_offset = offset;
        offset += static_cast<std::size_t>(view.out);
        layers_.push_back(view);
    }
    params_.assign(offset, 0.0);
    m_.assign(offset, 0.0);
    v_.assign(offset, 0.0);
}

QNet::QNet(std::vector<int> dims, std::uint64_t seed, AdamConfig adam) : QNet(std::move(dims), adam) {
    Rng rng(seed);
    for (const auto& layer : layers_) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        const std::size_t end = layer.bias_offset + static_cast<std::size_t>(layer.out);
        for (std::size_t i = layer.weight_offset; i < end; ++i) params_[i] = (2.0 * rng.uniform() - 1.0) * bound;
    }
}

QNet QNet::zeros(std::vector<int> dims, AdamConfig adam) { return QNet(std::move(dims), adam); }

std::vector<int> QNet::standard_dims(std::size_t input_size, const std::vector<int>& hidden) {
    std::vector<int> dims{static_cast<int>(input_size)};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(1);
    return dims;
}

double QNet::predict(std::span<const double> x) const {
    if (x.size() != input_size())
        throw DimensionError("network expects " + std::to_string(input_size()) + " inputs, got " +
                             std::to_string(x.size()));
    Eigen::VectorXd a = ConstVecMap(x.data(), static_cast<Eigen::Index>(x.size()));
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& L = layers_[l];
        ConstMatMap W(params_.data() + L.weight_offset, L.out, L.in);
        ConstVecMap b(params_.data() + L.bias_offset, L.out);
        Eigen::VectorXd z = W * a + b;
        if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
        a = std::move(z);
    }
    return a(0);
}

double QNet::predict(const AbstractStateVector& s, const AbstractActionVector& a, const CountScaler* scaler) const {
    std::vector<double> x(s.values.size() + a.name_onehot.size() + a.param_blocks.size());
    if (x.size() != input_size())
        throw DimensionError("network expects " + std::to_string(input_size()) + " inputs, encoding has " +
                             std::to_string(x.size()));
    write_network_input(s, a, x, scaler);
    return predict(x);
}

Eigen::RowVectorXd QNet::predict_batch(const Eigen::MatrixXd& inputs) const {
    if (static_cast<std::size_t>(inputs.rows()) != input_size())
        throw DimensionError("network expects " + std::to_string(input_size()) + " inputs, got " +
                             std::to_string(inputs.rows()));
    Eigen::MatrixXd a = inputs;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& L = layers_[l];
        ConstMatMap W(params_.data() + L.weight_offset, L.out, L.in);
        ConstVecMap b(params_.data() + L.bias_offset, L.out);
        Eigen::MatrixXd z = (W * a).colwise() + b;
        if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
        a = std::move(z);
    }
    return a.row(0);
}

double QNet::loss(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) const {
    Eigen::RowVectorXd diff = predict_batch(inputs) - targets.transpose();
    return diff.squaredNorm() / static_cast<double>(diff.size());
}

double QNet::loss_and_gradient(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                               std::vector<double>& gradient) const {
    if (static_cast<std::size_t>(inputs.rows()) != input_size())
        throw DimensionError("network expects " + std::to_string(input_size()) + " inputs, got " +
                             std::to_string(inputs.rows()));
    if (inputs.cols() == 0 || inputs.cols() != targets.size())
        throw DimensionError("batch needs one target per input column");
    const double batch = static_cast<double>(inputs.cols());

    // Forward pass, keeping pre-activations for the ReLU masks.
    std::vector<Eigen::MatrixXd> acts{inputs};
    std::vector<Eigen::MatrixXd> pre;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& L = layers_[l];
        ConstMatMap W(params_.data() + L.weight_offset, L.out, L.in);
        ConstVecMap b(params_.data() + L.bias_offset, L.out);
        pre.push_back((W * acts.back()).colwise() + b);
        acts.push_back(l + 1 < layers_.size() ? Eigen::MatrixXd(pre.back().cwiseMax(0.0)) : pre.back());
    }
    Eigen::MatrixXd delta = acts.back() - targets.transpose();
    const double loss_value = delta.squaredNorm() / batch;

    gradient.assign(params_.size(), 0.0);
    delta *= 2.0 / batch;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const auto& L = layers_[l];
        MatMap gW(gradient.data() + L.weight_offset, L.out, L.in);
        Eigen::Map<Eigen::VectorXd> gb(gradient.data() + L.bias_offset, L.out);
        gW.noalias() = delta * acts[l].transpose();
        gb = delta.rowwise().sum();
        if (l == 0) break;
        ConstMatMap W(params_.data() + L.weight_offset, L.out, L.in);
        Eigen::MatrixXd back = W.transpose() * delta;
        delta = back.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
    return loss_value;
}

double QNet::train_minibatch(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
    std::vector<double> g;
    const double before = loss_and_gradient(inputs, targets, g);
    ++step_;
    const double t = static_cast<double>(step_);
    const double c1 = 1.0 - std::pow(adam_.beta1, t);
    const double c2 = 1.0 - std::pow(adam_.beta2, t);
    for (std::size_t i = 0; i < params_.size(); ++i) {
        m_[i] = adam_.beta1 * m_[i] + (1.0 - adam_.beta1) * g[i];
        v_[i] = adam_.beta2 * v_[i] + (1.0 - adam_.beta2) * g[i] * g[i];
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        params_[i] -= adam_.learning_rate * m_hat / (std::sqrt(v_hat) + adam_.epsilon);
    }
    return before;
}

void QNet::set_parameters(std::vector<double> params) {
    if (params.size() != params_.size())
        throw DimensionError("expected " + std::to_string(params_.size()) + " parameters, got " +
                             std::to_string(params.size()));
    for (double p : params)
        if (!std::isfinite(p)) throw ValidationError("network parameters must be finite");
    params_ = std::move(params);
}

void QNet::set_adam_state(std::uint64_t steps, std::vector<double> m, std::vector<double> v) {
    if (m.size() != params_.size() || v.size() != params_.size())
        throw DimensionError("optimizer state does not match the parameter count");
    step_ = steps;
    m_ = std::move(m);
    v_ = std::move(v);
}

std::uint64_t QNet::fingerprint() const {
    Fnv1a h;
    for (int d : dims_) h.update(&d, sizeof d);
    h.update(params_.data(), params_.size() * sizeof(double));
    h.update(&step_, sizeof step_);
    h.update(m_.data(), m_.size() * sizeof(double));
    h.update(v_.data(), v_.size() * sizeof(double));
    return h.digest();
}

} // namespace grl
