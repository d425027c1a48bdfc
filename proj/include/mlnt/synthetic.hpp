#pragma once

#include <vector>

#include "mlnt/error.hpp"
#include "mlnt/matrix.hpp"
#include "mlnt/rng.hpp"

namespace mlnt {

/// M synthetic noisy-label variants of one mini-batch, produced by random
/// neighbor label transfer. Each variant replaces the labels of rho distinct
/// positions with the original label of a randomly chosen top-K neighbor;
/// all other rows are carried over unchanged.
struct SyntheticLabelSet {
    std::vector<Matrix> variants;                  // M matrices, each [k x c] one-hot
    std::vector<std::vector<int>> replaced_indices; // per variant, the rho selected positions
};

inline SyntheticLabelSet generate_synthetic_labels(const Matrix& Y, const std::vector<std::vector<int>>& neighbors,
                                                   int rho, int M, RngStream& rng) {
    const int k = Y.rows;
    if (static_cast<int>(neighbors.size()) != k)
        throw DimensionError("generate_synthetic_labels: neighbor list count != batch size");
    if (rho < 0 || rho > k) throw InputError("generate_synthetic_labels: rho out of [0, k]");
    if (M < 0) throw InputError("generate_synthetic_labels: M must be >= 0");
    if (rho > 0) {
        for (const auto& nbr : neighbors)
            if (nbr.empty())
                throw ConfigError("generate_synthetic_labels: rho > 0 requires a nonempty neighbor list "
                                  "for every sample");
    }

    SyntheticLabelSet set;
    set.variants.reserve(static_cast<std::size_t>(M));
    set.replaced_indices.reserve(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        Matrix variant = Y;
        std::vector<int> selected = rng.sample_without_replacement(k, rho);
        for (int pos : selected) {
            const std::vector<int>& nbr = neighbors[static_cast<std::size_t>(pos)];
            const int pick = nbr[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(nbr.size()) - 1))];
            // copy the neighbor's original label row from Y
            for (int j = 0; j < Y.cols; ++j) variant(pos, j) = Y(pick, j);
        }
        set.variants.push_back(std::move(variant));
        set.replaced_indices.push_back(std::move(selected));
    }
    return set;
}

} // namespace mlnt
