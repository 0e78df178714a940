#include "grl/generator.hpp"

#include <algorithm>
#include <numeric>

#include "grl/dynamics.hpp"
#include "grl/environment.hpp"
#include "grl/error.hpp"

namespace grl {

namespace {

constexpr double kExtraEdgeProbability = 0.3;

void require_params(std::string_view domain, std::span<const int> p, std::size_t count, int minimum) {
    if (p.size() != count)
        throw ValidationError(std::string(domain) + " expects " + std::to_string(count) + " size parameter(s), got " +
                              std::to_string(p.size()));
    for (int v : p)
        if (v < minimum)
            throw ValidationError(std::string(domain) + " size parameters must be >= " + std::to_string(minimum));
}

std::string instance_name(std::string_view domain, std::span<const int> p, std::uint64_t seed) {
    std::string out(domain);
    for (int v : p) out += "_" + std::to_string(v);
    return out + "_seed" + std::to_string(seed);
}

std::string cell_name(int row, int col) { return "l_" + std::to_string(row) + "_" + std::to_string(col); }

/// Cells of an x*y grid and directed neighbor facts for the 8-neighborhood.
void build_grid(InstanceSpec& spec, int x, int y) {
    std::vector<std::string> cells;
    for (int i = 1; i <= x; ++i)
        for (int j = 1; j <= y; ++j) cells.push_back(cell_name(i, j));
    spec.universe = ObjectUniverse(cells);
    for (int i = 1; i <= x; ++i)
        for (int j = 1; j <= y; ++j)
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    int ni = i + di, nj = j + dj;
                    if (ni < 1 || ni > x || nj < 1 || nj > y) continue;
                    spec.static_facts.insert(make_fact("neighbor", {cell_name(i, j), cell_name(ni, nj)}));
                }
}

void generate_sysadmin(InstanceSpec& spec, std::span<const int> p, Rng& rng) {
    const int n = p[0];
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("c" + std::to_string(i));
    spec.universe = ObjectUniverse(names);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(static_cast<std::size_t>(i) + 1)]);

    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    for (int i = 1; i < n; ++i) {
        int a = order[i], b = order[rng.index(static_cast<std::size_t>(i))];
        edge[a][b] = edge[b][a] = true;
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!edge[a][b] && rng.bernoulli(kExtraEdgeProbability)) edge[a][b] = edge[b][a] = true;

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (edge[a][b]) spec.static_facts.insert(make_fact("link", {names[a], names[b]}));
    for (const auto& c : names) spec.initial_facts.insert(make_fact("running", {c}));
}

void generate_academic_advising(InstanceSpec& spec, std::span<const int> p, Rng& rng) {
    const int levels = p[0], per_level = p[1], prereqs = p[2];
    std::vector<std::string> names;
    for (int l = 1; l <= levels; ++l)
        for (int c = 0; c < per_level; ++c) names.push_back("c" + std::to_string(l) + "_" + std::to_string(c));
    spec.universe = ObjectUniverse(names);

    for (int l = 2; l <= levels; ++l) {
        const std::size_t lower = static_cast<std::size_t>((l - 1) * per_level);
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(prereqs), lower);
        for (int c = 0; c < per_level; ++c) {
            std::vector<std::size_t> pool(lower);
            std::iota(pool.begin(), pool.end(), 0);
            for (std::size_t k = 0; k < take; ++k) {
                std::size_t pick = k + rng.index(lower - k);
                std::swap(pool[k], pool[pick]);
                spec.static_facts.insert(
                    make_fact("prereq", {names[pool[k]], names[static_cast<std::size_t>((l - 1) * per_level + c)]}));
            }
        }
    }
    for (const auto& c : names) spec.static_facts.insert(make_fact("required", {c}));
}

void generate_game_of_life(InstanceSpec& spec, std::span<const int> p, Rng& rng) {
    build_grid(spec, p[0], p[1]);
    for (const auto& cell : spec.universe.objects())
        if (rng.bernoulli(0.5)) spec.initial_facts.insert(make_fact("alive", {cell}));
}

void generate_wildfire(InstanceSpec& spec, std::span<const int> p, Rng& rng) {
    build_grid(spec, p[0], p[1]);
    const auto& cells = spec.universe.objects();
    spec.initial_facts.insert(make_fact("burning", {cells[rng.index(cells.size())]}));
}

} // namespace

std::string canonical_domain_name(std::string_view name) {
    if (name == "sys" || name == domain_names::sysadmin) return std::string(domain_names::sysadmin);
    if (name == "aa" || name == domain_names::academic_advising) return std::string(domain_names::academic_advising);
    if (name == "gol" || name == domain_names::game_of_life) return std::string(domain_names::game_of_life);
    if (name == "wf" || name == domain_names::wildfire) return std::string(domain_names::wildfire);
    throw ValidationError("unsupported domain '" + std::string(name) + "'");
}

InstanceSpec generate_instance(std::string_view domain_name, std::span<const int> size_params, std::uint64_t seed,
                               int horizon) {
    const std::string name = canonical_domain_name(domain_name);
    if (horizon < 1) throw ValidationError("horizon must be at least 1");
    auto dynamics = find_dynamics(name);

    InstanceSpec spec;
    spec.name = instance_name(name, size_params, seed);
    spec.domain = dynamics->domain().with_nop();
    spec.horizon = horizon;
    spec.seed = seed;
    spec.params = dynamics->default_params();

    Rng rng{seed, 0x67656e6572617465ULL};
    if (name == domain_names::sysadmin) {
        require_params(name, size_params, 1, 1);
        generate_sysadmin(spec, size_params, rng);
    } else if (name == domain_names::academic_advising) {
        require_params(name, size_params, 3, 1);
        generate_academic_advising(spec, size_params, rng);
    } else if (name == domain_names::game_of_life) {
        require_params(name, size_params, 2, 1);
        generate_game_of_life(spec, size_params, rng);
    } else {
        require_params(name, size_params, 2, 1);
        generate_wildfire(spec, size_params, rng);
    }
    validate_instance(spec);
    return spec;
}

std::set<RelationalState> sample_state_space(const InstanceSpec& spec, int episodes, std::uint64_t seed) {
    Environment env(spec);
    Rng rng{spec.seed, seed, 0x73616d706c65ULL};
    std::set<RelationalState> out;
    out.insert(initial_state(spec));
    const auto& actions = env.actions();
    for (int e = 0; e < episodes; ++e) {
        env.reset(rng.split());
        for (int t = 0; t < spec.horizon; ++t) {
            StepResult r = env.step(actions[rng.index(actions.size())]);
            out.insert(std::move(r.next_state));
        }
    }
    return out;
}

} // namespace grl
