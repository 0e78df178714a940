#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grl/encoder.hpp"
#include "grl/instance.hpp"
#include "grl/qnet.hpp"

namespace grl {

struct ResultRecord {
    std::string instance;
    std::uint64_t run_seed = 0;
    std::vector<double> returns;
    double mean = 0.0;
    /// Population standard deviation.
    double stddev = 0.0;
};

double mean(std::span<const double> xs);
double population_stddev(std::span<const double> xs);

ResultRecord make_record(std::string instance, std::uint64_t run_seed, std::vector<double> returns);

/// Greedy episodes with a frozen network (ties broken at random). Throws
/// LayoutError when the layout or network does not fit the instance's domain.
ResultRecord evaluate_zero_shot(const QNet& net, const EncodingLayout& layout, const InstanceSpec& spec,
                                int episodes, std::uint64_t seed);

/// Uniform-random policy on the same episode streams.
ResultRecord evaluate_random(const InstanceSpec& spec, int episodes, std::uint64_t seed);

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    /// One-sided p-value for mean(a) > mean(b).
    double p_greater = 1.0;
};

/// Welch's unequal-variance t-test; each sample needs at least two values.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

} // namespace grl
