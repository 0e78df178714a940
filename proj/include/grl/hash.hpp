#pragma once

#include <cstddef>
#include <cstdint>

namespace grl {

/// Incremental 64-bit FNV-1a.
class Fnv1a {
public:
    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            hash_ ^= p[i];
            hash_ *= 1099511628211ULL;
        }
    }
    std::uint64_t digest() const { return hash_; }

private:
    std::uint64_t hash_ = 1469598103934665603ULL;
};

} // namespace grl
