#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "mlnt/error.hpp"
#include "mlnt/mlp.hpp"

namespace mlnt {

enum class Role { Student, Teacher };

inline const char* role_name(Role r) { return r == Role::Student ? "student" : "teacher"; }

/// Persisted model state. Binary layout (all integers and float bit patterns
/// little-endian):
///   magic "MLNTCKPT" | u32 version | u32 activation | u32 num_sizes |
///   u32 layer_size... | u32 epoch | u32 role | f64 val_accuracy |
///   u64 param_count | f64 params... (layer order: W1 row-major, b1, W2, ...)
struct Checkpoint {
    std::uint32_t format_version = 1;
    MlpSpec spec;
    std::vector<double> flat_params;
    int epoch = 0;
    Role role = Role::Student;
    double val_accuracy = 0.0;

    ParamSet params() const { return ParamSet::unflatten(spec, flat_params); }
};

inline constexpr char kCheckpointMagic[8] = {'M', 'L', 'N', 'T', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

inline void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

inline std::uint32_t read_u32(std::istream& in, const char* what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw ParseError(std::string("load_checkpoint: truncated file while reading ") + what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& in, const char* what) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8))
        throw ParseError(std::string("load_checkpoint: truncated file while reading ") + what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline double read_f64(std::istream& in, const char* what) {
    const std::uint64_t bits = read_u64(in, what);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

} // namespace detail

inline void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    ckpt.spec.validate();
    if (ckpt.flat_params.size() != ckpt.spec.param_count())
        throw DimensionError("save_checkpoint: param count does not match spec");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_checkpoint: cannot open " + path);
    out.write(kCheckpointMagic, 8);
    detail::write_u32(out, ckpt.format_version);
    detail::write_u32(out, ckpt.spec.hidden_activation == Activation::ReLU ? 0u : 1u);
    detail::write_u32(out, static_cast<std::uint32_t>(ckpt.spec.layer_sizes.size()));
    for (int s : ckpt.spec.layer_sizes) detail::write_u32(out, static_cast<std::uint32_t>(s));
    detail::write_u32(out, static_cast<std::uint32_t>(ckpt.epoch));
    detail::write_u32(out, ckpt.role == Role::Student ? 0u : 1u);
    detail::write_f64(out, ckpt.val_accuracy);
    detail::write_u64(out, ckpt.flat_params.size());
    for (double v : ckpt.flat_params) detail::write_f64(out, v);
    if (!out) throw IoError("save_checkpoint: write failed for " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_checkpoint: cannot open " + path);
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw ParseError("load_checkpoint: not a checkpoint file: " + path);

    Checkpoint ckpt;
    ckpt.format_version = detail::read_u32(in, "version");
    if (ckpt.format_version != kCheckpointVersion)
        throw ParseError("load_checkpoint: unsupported format version " + std::to_string(ckpt.format_version));
    const std::uint32_t act = detail::read_u32(in, "activation");
    if (act > 1) throw ParseError("load_checkpoint: unknown activation code");
    ckpt.spec.hidden_activation = act == 0 ? Activation::ReLU : Activation::Tanh;
    const std::uint32_t num_sizes = detail::read_u32(in, "layer count");
    if (num_sizes < 2 || num_sizes > 64) throw ParseError("load_checkpoint: implausible layer count");
    for (std::uint32_t i = 0; i < num_sizes; ++i)
        ckpt.spec.layer_sizes.push_back(static_cast<int>(detail::read_u32(in, "layer size")));
    ckpt.spec.validate();
    ckpt.epoch = static_cast<int>(detail::read_u32(in, "epoch"));
    const std::uint32_t role = detail::read_u32(in, "role");
    if (role > 1) throw ParseError("load_checkpoint: unknown role code");
    ckpt.role = role == 0 ? Role::Student : Role::Teacher;
    ckpt.val_accuracy = detail::read_f64(in, "val accuracy");
    const std::uint64_t count = detail::read_u64(in, "param count");
    if (count != ckpt.spec.param_count())
        throw ParseError("load_checkpoint: param count " + std::to_string(count) + " does not match spec (" +
                         std::to_string(ckpt.spec.param_count()) + ")");
    ckpt.flat_params.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) ckpt.flat_params.push_back(detail::read_f64(in, "params"));
    return ckpt;
}

} // namespace mlnt
