#include "grl/evaluation.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <limits>

#include "grl/environment.hpp"
#include "grl/error.hpp"
#include "grl/grl.hpp"

namespace grl {

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double population_stddev(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

ResultRecord make_record(std::string instance, std::uint64_t run_seed, std::vector<double> returns) {
    ResultRecord r;
    r.instance = std::move(instance);
    r.run_seed = run_seed;
    r.mean = mean(returns);
    r.stddev = population_stddev(returns);
    r.returns = std::move(returns);
    return r;
}

ResultRecord evaluate_zero_shot(const QNet& net, const EncodingLayout& layout, const InstanceSpec& spec,
                                int episodes, std::uint64_t seed) {
    if (episodes < 1) throw ValidationError("evaluation needs at least one episode");
    return make_record(spec.name, seed, greedy_returns(net, layout, spec, episodes, seed));
}

ResultRecord evaluate_random(const InstanceSpec& spec, int episodes, std::uint64_t seed) {
    if (episodes < 1) throw ValidationError("evaluation needs at least one episode");
    Environment env(spec);
    Rng pick({seed, 0x7157});
    std::vector<double> out;
    for (int ep = 0; ep < episodes; ++ep) {
        env.reset(derive_seed(seed, {static_cast<std::uint64_t>(ep)}));
        double total = 0.0;
        while (true) {
            StepResult r = env.step(env.actions()[pick.index(env.actions().size())]);
            total += r.reward;
            if (r.done) break;
        }
        out.push_back(total);
    }
    return make_record(spec.name, seed, std::move(out));
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw ValidationError("Welch's t-test needs at least two values per sample");
    auto sample_var = [](std::span<const double> xs) {
        const double m = mean(xs);
        double ss = 0.0;
        for (double x : xs) ss += (x - m) * (x - m);
        return ss / static_cast<double>(xs.size() - 1);
    };
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double va = sample_var(a) / na;
    const double vb = sample_var(b) / nb;
    const double diff = mean(a) - mean(b);
    WelchResult out;
    if (va + vb == 0.0) {
        out.t = diff > 0 ? std::numeric_limits<double>::infinity()
                         : (diff < 0 ? -std::numeric_limits<double>::infinity() : 0.0);
        out.dof = na + nb - 2.0;
        out.p_greater = diff > 0 ? 0.0 : (diff < 0 ? 1.0 : 0.5);
        return out;
    }
    out.t = diff / std::sqrt(va + vb);
    out.dof = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    boost::math::students_t dist(out.dof);
    out.p_greater = boost::math::cdf(boost::math::complement(dist, out.t));
    return out;
}

} // namespace grl
