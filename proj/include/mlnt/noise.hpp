#pragma once

#include <map>
#include <string>
#include <vector>

#include "mlnt/error.hpp"
#include "mlnt/rng.hpp"

namespace mlnt {

enum class NoiseKind { None, Symmetric, Asymmetric };

/// How to corrupt training labels. Symmetric noise replaces a label with a
/// uniform class draw (which may coincide with the original); asymmetric
/// noise flips specific source classes to their mapped target class.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::None;
    double ratio = 0.0;
    std::map<int, int> class_map; // asymmetric only; unmapped classes are identity

    void validate(int num_classes) const {
        if (ratio < 0.0 || ratio > 1.0) throw InputError("NoiseSpec: ratio must be in [0,1]");
        if (kind == NoiseKind::Asymmetric) {
            for (const auto& [src, dst] : class_map) {
                if (src < 0 || src >= num_classes || dst < 0 || dst >= num_classes)
                    throw InputError("NoiseSpec: class_map entry out of range");
            }
        }
    }
};

/// Each label is independently replaced, with probability r, by a uniform
/// draw over all c classes.
inline std::vector<int> inject_symmetric(const std::vector<int>& labels, int c, double r, RngStream& rng) {
    if (r < 0.0 || r > 1.0) throw InputError("inject_symmetric: r must be in [0,1]");
    if (c <= 0) throw InputError("inject_symmetric: c must be positive");
    std::vector<int> out = labels;
    for (int& y : out) {
        if (y < 0 || y >= c) throw InputError("inject_symmetric: label out of range");
        if (rng.uniform() < r) y = rng.uniform_int(0, c - 1);
    }
    return out;
}

/// Labels in class_map's domain flip to class_map[label] with probability r;
/// all other labels are untouched.
inline std::vector<int> inject_asymmetric(const std::vector<int>& labels, const std::map<int, int>& class_map,
                                          double r, RngStream& rng) {
    if (r < 0.0 || r > 1.0) throw InputError("inject_asymmetric: r must be in [0,1]");
    std::vector<int> out = labels;
    for (int& y : out) {
        const auto it = class_map.find(y);
        if (it != class_map.end() && rng.uniform() < r) y = it->second;
    }
    return out;
}

inline std::vector<int> apply_noise(const std::vector<int>& labels, int c, const NoiseSpec& spec, RngStream& rng) {
    spec.validate(c);
    switch (spec.kind) {
        case NoiseKind::None: return labels;
        case NoiseKind::Symmetric: return inject_symmetric(labels, c, spec.ratio, rng);
        case NoiseKind::Asymmetric: return inject_asymmetric(labels, spec.class_map, spec.ratio, rng);
    }
    throw InputError("apply_noise: unknown noise kind");
}

} // namespace mlnt
