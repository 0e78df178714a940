#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "grl/encoder.hpp"
#include "grl/qnet.hpp"

namespace grl {

struct Checkpoint {
    QNet net;
    EncodingLayout layout;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary image: magic, version, layout text, layer sizes, Adam settings and
/// state, little-endian f64 parameter arrays, trailing FNV-1a checksum.
std::string save_checkpoint(const QNet& net, const EncodingLayout& layout);

/// Throws ChecksumError on corruption, LayoutError on version or layout
/// mismatch (including against `expected` when given).
Checkpoint load_checkpoint(std::string_view bytes, const EncodingLayout* expected = nullptr);

void write_checkpoint(const std::filesystem::path& path, const QNet& net, const EncodingLayout& layout);
Checkpoint read_checkpoint(const std::filesystem::path& path, const EncodingLayout* expected = nullptr);

} // namespace grl
