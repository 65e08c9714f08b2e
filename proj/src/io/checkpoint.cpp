#include "uagan/io/checkpoint.hpp"

#include <openssl/sha.h>
#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "uagan/errors.hpp"

namespace uagan {

namespace {

constexpr char kMagic[4] = {'U', 'A', 'G', 'C'};

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    template <typename T>
    void uint(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
    void f64s(const std::vector<double>& v) {
        for (double d : v) f64(d);
    }
    std::vector<std::uint8_t>& buffer() { return out_; }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    template <typename T>
    T uint() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(in_[pos_ + i]) << (8 * i);
        pos_ += sizeof(T);
        return v;
    }
    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
    void f64s(std::vector<double>& v) {
        need(v.size() * 8);
        for (double& d : v) d = f64();
    }
    void need(std::size_t n) const {
        if (pos_ + n > in_.size()) throw FormatError(FormatErrorCode::truncated, "checkpoint ends early");
    }
    [[nodiscard]] std::size_t position() const { return pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; checkpoints stay far below 4 GiB but chunk anyway.
    std::size_t done = 0;
    while (done < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
        crc = crc32(crc, bytes.data() + done, chunk);
        done += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<const Network*> networks_of(const Checkpoint& c) {
    std::vector<const Network*> nets;
    if (c.generator) nets.push_back(&*c.generator);
    if (c.discriminator) nets.push_back(&*c.discriminator);
    return nets;
}

void write_spec(Writer& w, const Network& net) {
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(net.layers.size()));
    for (const auto& l : net.layers) {
        w.uint<std::uint32_t>(static_cast<std::uint32_t>(l.in_dim()));
        w.uint<std::uint32_t>(static_cast<std::uint32_t>(l.out_dim()));
        w.uint<std::uint8_t>(static_cast<std::uint8_t>(l.activation));
    }
}

void write_params(Writer& w, const Network& net) {
    for (const auto& l : net.layers) {
        w.f64s(l.weight.values);
        w.f64s(l.bias.values);
    }
}

void write_adam(Writer& w, const AdamState& s) {
    w.uint<std::uint64_t>(s.t);
    w.f64(s.hyper.lr);
    w.f64(s.hyper.beta1);
    w.f64(s.hyper.beta2);
    w.f64(s.hyper.eps);
    for (const auto& m : s.m) w.f64s(m);
    for (const auto& v : s.v) w.f64s(v);
}

NetSpec read_spec(Reader& r) {
    const auto count = r.uint<std::uint32_t>();
    // Each layer descriptor is 9 bytes; refuse counts the file cannot hold.
    r.need(static_cast<std::size_t>(count) * 9);
    NetSpec spec;
    for (std::uint32_t k = 0; k < count; ++k) {
        LayerSpec l;
        l.in = r.uint<std::uint32_t>();
        l.out = r.uint<std::uint32_t>();
        l.activation = activation_from_code(r.uint<std::uint8_t>());
        spec.push_back(l);
    }
    try {
        validate_spec(spec);
    } catch (const ConfigError& e) {
        throw FormatError(FormatErrorCode::malformed, e.what());
    }
    return spec;
}

// Saturates instead of wrapping so absurd descriptors read as truncation.
std::size_t payload_doubles(const NetSpec& spec) {
    constexpr unsigned __int128 cap = std::size_t{1} << 56;
    unsigned __int128 n = 0;
    for (const auto& l : spec) n += static_cast<unsigned __int128>(l.in) * l.out + l.out;
    return static_cast<std::size_t>(n < cap ? n : cap);
}

}  // namespace

Role Checkpoint::role() const {
    if (generator && discriminator) return Role::pair;
    if (generator) return Role::generator;
    if (discriminator) return Role::discriminator;
    throw ConfigError("checkpoint holds no network");
}

std::vector<std::uint8_t> serialize(const Checkpoint& ckpt) {
    const Role role = ckpt.role();
    const auto nets = networks_of(ckpt);
    std::vector<const AdamState*> adams;
    if (ckpt.generator && ckpt.adam_generator) adams.push_back(&*ckpt.adam_generator);
    if (ckpt.discriminator && ckpt.adam_discriminator) adams.push_back(&*ckpt.adam_discriminator);
    if (!adams.empty() && adams.size() != nets.size()) {
        throw ConfigError("optimizer state must be present for every network or none");
    }
    for (std::size_t i = 0; i < adams.size(); ++i) {
        const auto params = nets[i]->parameters();
        bool ok = adams[i]->m.size() == params.size() && adams[i]->v.size() == params.size();
        for (std::size_t k = 0; ok && k < params.size(); ++k) {
            ok = adams[i]->m[k].size() == params[k]->size() && adams[i]->v[k].size() == params[k]->size();
        }
        if (!ok) throw ConfigError("optimizer state does not match network shape");
    }

    Writer w;
    w.bytes(kMagic, 4);
    w.uint<std::uint32_t>(kCheckpointVersion);
    w.uint<std::uint8_t>(static_cast<std::uint8_t>(role));
    for (const auto* n : nets) write_spec(w, *n);
    w.uint<std::uint64_t>(ckpt.seed);
    w.uint<std::uint64_t>(ckpt.iteration);
    w.uint<std::uint8_t>(adams.empty() ? 0 : 1);
    for (const auto* n : nets) write_params(w, *n);
    for (const auto* a : adams) write_adam(w, *a);
    w.uint<std::uint32_t>(crc32_of(w.buffer()));
    return std::move(w.buffer());
}

Checkpoint deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw FormatError(FormatErrorCode::truncated, "file shorter than the magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError(FormatErrorCode::bad_magic, "expected UAGC");
    Reader r(bytes.subspan(4));
    const auto version = r.uint<std::uint32_t>();
    if (version != kCheckpointVersion) {
        throw FormatError(FormatErrorCode::version_mismatch,
                          "file version " + std::to_string(version) + ", reader version " +
                              std::to_string(kCheckpointVersion));
    }
    const auto role_code = r.uint<std::uint8_t>();
    if (role_code > 2) throw FormatError(FormatErrorCode::malformed, "unknown role " + std::to_string(role_code));
    const auto role = static_cast<Role>(role_code);
    const std::size_t net_count = role == Role::pair ? 2 : 1;

    std::vector<NetSpec> specs;
    for (std::size_t i = 0; i < net_count; ++i) specs.push_back(read_spec(r));
    Checkpoint c;
    c.seed = r.uint<std::uint64_t>();
    c.iteration = r.uint<std::uint64_t>();
    const auto opt_flag = r.uint<std::uint8_t>();
    if (opt_flag > 1) throw FormatError(FormatErrorCode::malformed, "bad optimizer flag");

    // Size check before the checksum so a short file reports as truncated.
    std::size_t doubles = 0;
    for (const auto& s : specs) doubles += payload_doubles(s) * (opt_flag ? 3 : 1);
    const std::size_t expected =
        4 + r.position() + doubles * 8 + (opt_flag ? net_count * 40 : 0) + sizeof(std::uint32_t);
    if (bytes.size() < expected) throw FormatError(FormatErrorCode::truncated, "payload shorter than declared");
    if (bytes.size() > expected) throw FormatError(FormatErrorCode::malformed, "trailing bytes after checksum");

    const auto body = bytes.first(expected - 4);
    Reader tail(bytes.subspan(expected - 4));
    if (tail.uint<std::uint32_t>() != crc32_of(body)) {
        throw FormatError(FormatErrorCode::checksum_mismatch, "CRC-32 does not match contents");
    }

    std::vector<Network> nets;
    for (const auto& s : specs) {
        Network n(s);
        for (auto& l : n.layers) {
            r.f64s(l.weight.values);
            r.f64s(l.bias.values);
        }
        nets.push_back(std::move(n));
    }
    std::vector<AdamState> adams;
    if (opt_flag) {
        for (const auto& n : nets) {
            AdamState s = make_adam_state(n);
            s.t = r.uint<std::uint64_t>();
            s.hyper.lr = r.f64();
            s.hyper.beta1 = r.f64();
            s.hyper.beta2 = r.f64();
            s.hyper.eps = r.f64();
            for (auto& m : s.m) r.f64s(m);
            for (auto& v : s.v) r.f64s(v);
            adams.push_back(std::move(s));
        }
    }

    std::size_t idx = 0;
    if (role != Role::discriminator) {
        c.generator = std::move(nets[idx]);
        if (opt_flag) c.adam_generator = std::move(adams[idx]);
        ++idx;
    }
    if (role != Role::generator) {
        c.discriminator = std::move(nets[idx]);
        if (opt_flag) c.adam_discriminator = std::move(adams[idx]);
    }
    return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    const auto bytes = serialize(ckpt);
    write_file(path, bytes);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return deserialize(read_file(path)); }

std::vector<std::uint8_t> network_bytes(const Network& net) {
    Writer w;
    write_spec(w, net);
    write_params(w, net);
    return std::move(w.buffer());
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(bytes.data(), bytes.size(), digest);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * SHA256_DIGEST_LENGTH);
    for (unsigned char b : digest) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xF]);
    }
    return out;
}

std::string sha256_hex(std::string_view text) {
    return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(FormatErrorCode::io, "cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(FormatErrorCode::io, "cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError(FormatErrorCode::io, "short write to '" + path.string() + "'");
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace uagan
