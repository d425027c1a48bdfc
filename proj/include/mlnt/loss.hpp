#pragma once

#include <algorithm>
#include <cmath>

#include "mlnt/error.hpp"
#include "mlnt/matrix.hpp"
#include "mlnt/mlp.hpp"

namespace mlnt {

/// Floor for log arguments in both losses.
inline constexpr double kLogClamp = 1e-12;

namespace detail {

inline int one_hot_index(const Matrix& Y, int row, const char* where) {
    int idx = -1;
    for (int j = 0; j < Y.cols; ++j) {
        const double v = Y(row, j);
        if (v == 1.0) {
            if (idx >= 0) throw InputError(std::string(where) + ": row has multiple ones");
            idx = j;
        } else if (v != 0.0) {
            throw InputError(std::string(where) + ": row is not one-hot");
        }
    }
    if (idx < 0) throw InputError(std::string(where) + ": row has no one");
    return idx;
}

} // namespace detail

/// Mean cross entropy, -(1/k) sum_i y_i . log(p_i), with one-hot labels.
inline double cross_entropy(const SoftmaxOutput& out, const Matrix& Y) {
    require_same_shape(out.probs, Y, "cross_entropy");
    double total = 0.0;
    for (int i = 0; i < Y.rows; ++i) {
        const int truth = detail::one_hot_index(Y, i, "cross_entropy");
        total -= std::log(std::max(out.probs(i, truth), kLogClamp));
    }
    const double loss = total / Y.rows;
    if (!std::isfinite(loss)) throw NumericError("cross_entropy: non-finite loss");
    return loss;
}

/// Mean row-wise KL divergence D_KL(P || Q) with P the target distribution.
/// Terms with P_ij == 0 contribute zero.
inline double kl_divergence(const SoftmaxOutput& P, const SoftmaxOutput& Q) {
    require_same_shape(P.probs, Q.probs, "kl_divergence");
    double total = 0.0;
    for (std::size_t i = 0; i < P.probs.values.size(); ++i) {
        const double p = P.probs.values[i];
        if (p > 0.0) {
            const double q = Q.probs.values[i];
            total += p * (std::log(std::max(p, kLogClamp)) - std::log(std::max(q, kLogClamp)));
        }
    }
    const double kl = total / P.probs.rows;
    if (!std::isfinite(kl)) throw NumericError("kl_divergence: non-finite result");
    return std::max(kl, 0.0);
}

} // namespace mlnt
