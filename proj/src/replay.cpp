#include "grl/replay.hpp"

#include <algorithm>

#include "grl/error.hpp"
#include "grl/qnet.hpp"

namespace grl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ValidationError("replay buffer capacity must be positive");
}

void ReplayBuffer::clear() {
    entries_.clear();
    head_ = 0;
}

void ReplayBuffer::push(ReplayEntry entry) {
    if (entries_.size() < capacity_) {
        entries_.push_back(std::move(entry));
        return;
    }
    entries_[head_] = std::move(entry);
    head_ = (head_ + 1) % capacity_;
}

const ReplayEntry& ReplayBuffer::at(std::size_t i) const {
    if (i >= entries_.size()) throw ValidationError("replay index out of range");
    return entries_[(head_ + i) % entries_.size()];
}

std::vector<const ReplayEntry*> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
    if (entries_.empty()) throw ValidationError("cannot sample from an empty replay buffer");
    const std::size_t n = entries_.size();
    std::vector<const ReplayEntry*> out;
    out.reserve(count);
    if (n < count) {
        for (std::size_t i = 0; i < count; ++i) out.push_back(&at(rng.index(n)));
        return out;
    }
    // Floyd's algorithm: a uniform count-subset without touching all n entries.
    std::vector<std::size_t> chosen;
    chosen.reserve(count);
    for (std::size_t j = n - count; j < n; ++j) {
        std::size_t t = rng.index(j + 1);
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) t = j;
        chosen.push_back(t);
    }
    for (auto i : chosen) out.push_back(&at(i));
    return out;
}

void batch_matrix(const std::vector<const ReplayEntry*>& batch, Eigen::MatrixXd& inputs, Eigen::VectorXd& targets,
                  const CountScaler* scaler) {
    if (batch.empty()) throw ValidationError("empty minibatch");
    const auto& first = *batch.front();
    const std::size_t dim = first.state.values.size() + first.action.name_onehot.size() +
                            first.action.param_blocks.size();
    inputs.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(batch.size()));
    targets.resize(static_cast<Eigen::Index>(batch.size()));
    for (std::size_t j = 0; j < batch.size(); ++j) {
        write_network_input(batch[j]->state, batch[j]->action,
                            std::span<double>(inputs.col(static_cast<Eigen::Index>(j)).data(), dim), scaler);
        targets(static_cast<Eigen::Index>(j)) = batch[j]->target;
    }
}

double train_from_buffer(QNet& net, const ReplayBuffer& buffer, std::size_t batch_size, Rng& rng,
                         const CountScaler* scaler) {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd targets;
    batch_matrix(buffer.sample(batch_size, rng), inputs, targets, scaler);
    return net.train_minibatch(inputs, targets);
}

} // namespace grl
