#include "grl/dynamics.hpp"

#include <mutex>

#include "domains/builtin.hpp"
#include "grl/error.hpp"

namespace grl {

std::set<GroundFact> Dynamics::default_init(const ObjectUniverse&, const std::set<GroundFact>&) const {
    return {};
}

namespace {

struct Registry {
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<const Dynamics>, std::less<>> by_name;

    Registry() {
        for (auto& d : domains::builtin_dynamics()) by_name.emplace(d->domain().name(), d);
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

} // namespace

void register_dynamics(std::shared_ptr<const Dynamics> dynamics) {
    if (!dynamics) throw ValidationError("null dynamics");
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    r.by_name[dynamics->domain().name()] = std::move(dynamics);
}

std::shared_ptr<const Dynamics> find_dynamics(std::string_view domain_name) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.by_name.find(domain_name);
    if (it == r.by_name.end()) throw ValidationError("unknown domain '" + std::string(domain_name) + "'");
    return it->second;
}

std::vector<std::string> registered_domains() {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    std::vector<std::string> out;
    for (const auto& [name, d] : r.by_name) out.push_back(name);
    return out;
}

} // namespace grl
