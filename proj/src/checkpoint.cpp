#include "grl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "grl/error.hpp"
#include "grl/hash.hpp"

namespace grl {

namespace {

constexpr char kMagic[8] = {'G', 'R', 'L', 'Q', 'N', 'E', 'T', '\0'};

class Writer {
public:
    void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }

    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void f64(double d) { u64(std::bit_cast<std::uint64_t>(d)); }
    void f64s(const std::vector<double>& v) {
        for (double d : v) f64(d);
    }

    std::string& str() { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    std::string_view bytes(std::size_t n) {
        if (in_.size() - pos_ < n) throw LayoutError("checkpoint is truncated");
        auto out = in_.substr(pos_, n);
        pos_ += n;
        return out;
    }
    std::uint64_t uint(int width) {
        auto b = bytes(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    }
    std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
    std::uint64_t u64() { return uint(8); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::vector<double> f64s(std::size_t n) {
        std::vector<double> v(n);
        for (auto& d : v) d = f64();
        return v;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

} // namespace

std::string save_checkpoint(const QNet& net, const EncodingLayout& layout) {
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kCheckpointVersion);
    std::string text = layout.serialize();
    w.u64(text.size());
    w.bytes(text.data(), text.size());
    w.u32(static_cast<std::uint32_t>(net.dims().size()));
    for (int d : net.dims()) w.u32(static_cast<std::uint32_t>(d));
    const auto& adam = net.adam();
    w.f64(adam.learning_rate);
    w.f64(adam.beta1);
    w.f64(adam.beta2);
    w.f64(adam.epsilon);
    w.u64(net.adam_steps());
    w.u64(net.parameter_count());
    w.f64s(net.parameters());
    w.f64s(net.adam_first_moment());
    w.f64s(net.adam_second_moment());
    Fnv1a h;
    h.update(w.str().data(), w.str().size());
    w.u64(h.digest());
    return std::move(w.str());
}

Checkpoint load_checkpoint(std::string_view bytes, const EncodingLayout* expected) {
    if (bytes.size() < sizeof kMagic + 12 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw LayoutError("not a checkpoint file");
    Fnv1a h;
    h.update(bytes.data(), bytes.size() - 8);
    Reader tail(bytes.substr(bytes.size() - 8));
    if (tail.u64() != h.digest()) throw ChecksumError("checkpoint checksum mismatch");

    Reader r(bytes.substr(0, bytes.size() - 8));
    r.bytes(sizeof kMagic);
    const auto version = r.u32();
    if (version != kCheckpointVersion)
        throw LayoutError("unsupported checkpoint version " + std::to_string(version));
    const auto text_len = r.u64();
    EncodingLayout layout = EncodingLayout::parse(r.bytes(text_len));
    std::vector<int> dims(r.u32());
    for (auto& d : dims) d = static_cast<int>(r.u32());
    if (dims.empty() || static_cast<std::size_t>(dims.front()) != layout.input_size())
        throw LayoutError("checkpoint network input does not match its layout");
    AdamConfig adam;
    adam.learning_rate = r.f64();
    adam.beta1 = r.f64();
    adam.beta2 = r.f64();
    adam.epsilon = r.f64();
    const auto steps = r.u64();
    const auto count = r.u64();
    QNet net = QNet::zeros(dims, adam);
    if (count != net.parameter_count()) throw LayoutError("checkpoint parameter count does not match layer sizes");
    net.set_parameters(r.f64s(count));
    auto m = r.f64s(count);
    auto v = r.f64s(count);
    net.set_adam_state(steps, std::move(m), std::move(v));
    if (!r.done()) throw LayoutError("trailing bytes in checkpoint");

    if (expected && !(*expected == layout)) {
        std::ostringstream msg;
        msg << "checkpoint layout (" << layout.feature_count() << " features, " << layout.actions.size()
            << " actions) does not match the expected layout (" << expected->feature_count() << " features, "
            << expected->actions.size() << " actions)";
        throw LayoutError(msg.str());
    }
    return Checkpoint{std::move(net), std::move(layout)};
}

void write_checkpoint(const std::filesystem::path& path, const QNet& net, const EncodingLayout& layout) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    auto bytes = save_checkpoint(net, layout);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint read_checkpoint(const std::filesystem::path& path, const EncodingLayout* expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_checkpoint(bytes, expected);
}

} // namespace grl
