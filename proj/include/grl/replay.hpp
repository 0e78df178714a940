#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "grl/encoder.hpp"
#include "grl/rng.hpp"

namespace grl {

class QNet;

struct ReplayEntry {
    AbstractStateVector state;
    AbstractActionVector action;
    double target = 0.0;
};

/// Fixed-capacity ring of training examples; the oldest entry is evicted first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 20000);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    void clear();

    void push(ReplayEntry entry);

    /// i = 0 is the oldest entry.
    const ReplayEntry& at(std::size_t i) const;

    /// Uniform sample; with replacement when fewer than `count` entries are
    /// stored, without replacement otherwise. Throws ValidationError when empty.
    std::vector<const ReplayEntry*> sample(std::size_t count, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<ReplayEntry> entries_;
};

/// Packs a batch into one input column per entry plus the target vector.
void batch_matrix(const std::vector<const ReplayEntry*>& batch, Eigen::MatrixXd& inputs, Eigen::VectorXd& targets,
                  const CountScaler* scaler = nullptr);

/// Samples a minibatch and takes one optimizer step; returns the pre-step loss.
double train_from_buffer(QNet& net, const ReplayBuffer& buffer, std::size_t batch_size, Rng& rng,
                         const CountScaler* scaler = nullptr);

} // namespace grl
