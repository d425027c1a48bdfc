#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlnt/error.hpp"
#include "mlnt/matrix.hpp"
#include "mlnt/rng.hpp"

namespace mlnt {

enum class Activation { ReLU, Tanh };

/// Architecture of a fully connected softmax classifier:
/// layer_sizes = [d_in, h_1, ..., h_L, c].
struct MlpSpec {
    std::vector<int> layer_sizes;
    Activation hidden_activation = Activation::ReLU;

    void validate() const {
        if (layer_sizes.size() < 2)
            throw InputError("MlpSpec: need at least input and output sizes");
        for (int s : layer_sizes)
            if (s <= 0) throw InputError("MlpSpec: layer sizes must be positive");
    }

    int input_dim() const { return layer_sizes.front(); }
    int num_classes() const { return layer_sizes.back(); }
    int num_weight_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }

    std::size_t param_count() const {
        std::size_t n = 0;
        for (int l = 0; l < num_weight_layers(); ++l)
            n += static_cast<std::size_t>(layer_sizes[l + 1]) * (static_cast<std::size_t>(layer_sizes[l]) + 1);
        return n;
    }

    bool operator==(const MlpSpec& other) const {
        return layer_sizes == other.layer_sizes && hidden_activation == other.hidden_activation;
    }
};

struct LayerParams {
    Matrix weight;            // [h_l x h_{l-1}]
    std::vector<double> bias; // [h_l]
};

/// Flat, ordered collection of layer weights and biases. The same structure
/// holds parameters, their gradients, and optimizer velocity.
struct ParamSet {
    std::vector<LayerParams> layers;

    static ParamSet zeros(const MlpSpec& spec) {
        spec.validate();
        ParamSet p;
        p.layers.reserve(static_cast<std::size_t>(spec.num_weight_layers()));
        for (int l = 0; l < spec.num_weight_layers(); ++l) {
            LayerParams lp;
            lp.weight = Matrix(spec.layer_sizes[l + 1], spec.layer_sizes[l]);
            lp.bias.assign(static_cast<std::size_t>(spec.layer_sizes[l + 1]), 0.0);
            p.layers.push_back(std::move(lp));
        }
        return p;
    }

    bool shape_matches(const MlpSpec& spec) const {
        if (static_cast<int>(layers.size()) != spec.num_weight_layers()) return false;
        for (int l = 0; l < spec.num_weight_layers(); ++l) {
            const LayerParams& lp = layers[static_cast<std::size_t>(l)];
            if (lp.weight.rows != spec.layer_sizes[l + 1] || lp.weight.cols != spec.layer_sizes[l]) return false;
            if (static_cast<int>(lp.bias.size()) != spec.layer_sizes[l + 1]) return false;
        }
        return true;
    }

    bool shape_matches(const ParamSet& other) const {
        if (layers.size() != other.layers.size()) return false;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            if (!layers[l].weight.same_shape(other.layers[l].weight)) return false;
            if (layers[l].bias.size() != other.layers[l].bias.size()) return false;
        }
        return true;
    }

    std::size_t param_count() const {
        std::size_t n = 0;
        for (const LayerParams& lp : layers) n += lp.weight.values.size() + lp.bias.size();
        return n;
    }

    std::vector<double> flatten() const {
        std::vector<double> flat;
        flat.reserve(param_count());
        for (const LayerParams& lp : layers) {
            flat.insert(flat.end(), lp.weight.values.begin(), lp.weight.values.end());
            flat.insert(flat.end(), lp.bias.begin(), lp.bias.end());
        }
        return flat;
    }

    static ParamSet unflatten(const MlpSpec& spec, std::span<const double> flat) {
        ParamSet p = zeros(spec);
        if (flat.size() != p.param_count())
            throw DimensionError("ParamSet::unflatten: length mismatch");
        std::size_t off = 0;
        for (LayerParams& lp : p.layers) {
            for (double& v : lp.weight.values) v = flat[off++];
            for (double& v : lp.bias) v = flat[off++];
        }
        return p;
    }

    bool all_finite() const {
        for (const LayerParams& lp : layers) {
            if (!lp.weight.all_finite()) return false;
            for (double v : lp.bias)
                if (!std::isfinite(v)) return false;
        }
        return true;
    }
};

using GradSet = ParamSet;

inline ParamSet zeros_like(const ParamSet& p) {
    ParamSet out;
    out.layers.reserve(p.layers.size());
    for (const LayerParams& lp : p.layers) {
        LayerParams z;
        z.weight = Matrix(lp.weight.rows, lp.weight.cols);
        z.bias.assign(lp.bias.size(), 0.0);
        out.layers.push_back(std::move(z));
    }
    return out;
}

/// dst += scale * src, element-wise.
inline void add_scaled(ParamSet& dst, const ParamSet& src, double scale) {
    if (!dst.shape_matches(src)) throw DimensionError("add_scaled: shape mismatch");
    for (std::size_t l = 0; l < dst.layers.size(); ++l) {
        LayerParams& d = dst.layers[l];
        const LayerParams& s = src.layers[l];
        for (std::size_t i = 0; i < d.weight.values.size(); ++i) d.weight.values[i] += scale * s.weight.values[i];
        for (std::size_t i = 0; i < d.bias.size(); ++i) d.bias[i] += scale * s.bias[i];
    }
}

inline void scale_params(ParamSet& p, double s) {
    for (LayerParams& lp : p.layers) {
        for (double& v : lp.weight.values) v *= s;
        for (double& v : lp.bias) v *= s;
    }
}

inline double max_abs_diff(const ParamSet& a, const ParamSet& b) {
    if (!a.shape_matches(b)) throw DimensionError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        for (std::size_t i = 0; i < a.layers[l].weight.values.size(); ++i)
            m = std::max(m, std::abs(a.layers[l].weight.values[i] - b.layers[l].weight.values[i]));
        for (std::size_t i = 0; i < a.layers[l].bias.size(); ++i)
            m = std::max(m, std::abs(a.layers[l].bias[i] - b.layers[l].bias[i]));
    }
    return m;
}

inline double dot(const ParamSet& a, const ParamSet& b) {
    if (!a.shape_matches(b)) throw DimensionError("dot: shape mismatch");
    double acc = 0.0;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        for (std::size_t i = 0; i < a.layers[l].weight.values.size(); ++i)
            acc += a.layers[l].weight.values[i] * b.layers[l].weight.values[i];
        for (std::size_t i = 0; i < a.layers[l].bias.size(); ++i)
            acc += a.layers[l].bias[i] * b.layers[l].bias[i];
    }
    return acc;
}

inline double norm(const ParamSet& a) { return std::sqrt(dot(a, a)); }

inline bool bitwise_equal(const ParamSet& a, const ParamSet& b) {
    if (!a.shape_matches(b)) return false;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        if (a.layers[l].weight.values != b.layers[l].weight.values) return false;
        if (a.layers[l].bias != b.layers[l].bias) return false;
    }
    return true;
}

/// He-normal init for ReLU, Glorot-uniform for Tanh; biases start at zero.
inline ParamSet init_params(const MlpSpec& spec, RngStream& rng) {
    ParamSet p = ParamSet::zeros(spec);
    for (int l = 0; l < spec.num_weight_layers(); ++l) {
        const int fan_in = spec.layer_sizes[l];
        const int fan_out = spec.layer_sizes[l + 1];
        Matrix& w = p.layers[static_cast<std::size_t>(l)].weight;
        if (spec.hidden_activation == Activation::ReLU) {
            const double sigma = std::sqrt(2.0 / fan_in);
            for (double& v : w.values) v = sigma * rng.normal();
        } else {
            const double bound = std::sqrt(6.0 / (fan_in + fan_out));
            for (double& v : w.values) v = bound * (2.0 * rng.uniform() - 1.0);
        }
    }
    return p;
}

/// Softmax predictions, one distribution per row.
struct SoftmaxOutput {
    Matrix probs; // [k x c], rows sum to 1
};

/// Everything the backward pass needs from a forward pass: the input and
/// hidden activations, pre-activations, output probabilities, and a copy of
/// the parameters the pass was run with.
struct ActivationCache {
    MlpSpec spec;
    ParamSet params;
    std::vector<Matrix> activations; // a_0 = X, then post-activation of each hidden layer
    std::vector<Matrix> preacts;     // z_1 .. z_L
    Matrix probs;
};

namespace detail {

inline Matrix row_softmax(const Matrix& z) {
    Matrix p(z.rows, z.cols);
    for (int i = 0; i < z.rows; ++i) {
        const double* zi = z.row_ptr(i);
        double* pi = p.row_ptr(i);
        double m = zi[0];
        for (int j = 1; j < z.cols; ++j) m = std::max(m, zi[j]);
        double sum = 0.0;
        for (int j = 0; j < z.cols; ++j) {
            pi[j] = std::exp(zi[j] - m);
            sum += pi[j];
        }
        for (int j = 0; j < z.cols; ++j) pi[j] /= sum;
    }
    return p;
}

inline Matrix apply_activation(const Matrix& z, Activation act) {
    Matrix a(z.rows, z.cols);
    if (act == Activation::ReLU) {
        for (std::size_t i = 0; i < z.values.size(); ++i) a.values[i] = z.values[i] > 0.0 ? z.values[i] : 0.0;
    } else {
        for (std::size_t i = 0; i < z.values.size(); ++i) a.values[i] = std::tanh(z.values[i]);
    }
    return a;
}

/// Derivative of the hidden activation, computed from the pre-activation z
/// and the stored post-activation a.
inline double activation_grad(double z, double a, Activation act) {
    if (act == Activation::ReLU) return z > 0.0 ? 1.0 : 0.0;
    return 1.0 - a * a;
}

} // namespace detail

/// Forward pass through the classifier. Softmax uses per-row max subtraction.
inline std::pair<ActivationCache, SoftmaxOutput> forward(const MlpSpec& spec, const ParamSet& params,
                                                         const Matrix& X) {
    spec.validate();
    if (!params.shape_matches(spec)) throw DimensionError("forward: params do not match spec");
    if (X.cols != spec.input_dim())
        throw DimensionError("forward: input has " + std::to_string(X.cols) + " features, spec expects " +
                             std::to_string(spec.input_dim()));

    ActivationCache cache;
    cache.spec = spec;
    cache.params = params;
    cache.activations.push_back(X);

    const int L = spec.num_weight_layers();
    for (int l = 0; l < L; ++l) {
        Matrix z = matmul_nt(cache.activations.back(), params.layers[static_cast<std::size_t>(l)].weight);
        add_row_vector(z, params.layers[static_cast<std::size_t>(l)].bias);
        cache.preacts.push_back(z);
        if (l + 1 < L) {
            cache.activations.push_back(detail::apply_activation(z, spec.hidden_activation));
        } else {
            SoftmaxOutput out{detail::row_softmax(z)};
            require_finite(out.probs, "forward");
            cache.probs = out.probs;
            return {std::move(cache), std::move(out)};
        }
    }
    throw StateError("forward: unreachable"); // validate() guarantees L >= 1
}

namespace detail {

inline void check_cache(const ActivationCache& cache, const Matrix& targets, const char* where) {
    if (cache.activations.empty() || cache.preacts.empty())
        throw StateError(std::string(where) + ": cache not produced by forward()");
    if (!cache.params.shape_matches(cache.spec))
        throw StateError(std::string(where) + ": cache params drifted from spec");
    if (!cache.probs.same_shape(targets))
        throw StateError(std::string(where) + ": cache shape does not match targets");
}

/// Backpropagate a gradient w.r.t. the output logits through the cached pass.
inline GradSet backprop_logits(const ActivationCache& cache, Matrix dz) {
    const MlpSpec& spec = cache.spec;
    const int L = spec.num_weight_layers();
    GradSet grads = ParamSet::zeros(spec);
    for (int l = L - 1; l >= 0; --l) {
        const Matrix& input = cache.activations[static_cast<std::size_t>(l)];
        grads.layers[static_cast<std::size_t>(l)].weight = matmul_tn(dz, input);
        grads.layers[static_cast<std::size_t>(l)].bias = column_sums(dz);
        if (l > 0) {
            Matrix da = matmul_nn(dz, cache.params.layers[static_cast<std::size_t>(l)].weight);
            const Matrix& z = cache.preacts[static_cast<std::size_t>(l - 1)];
            const Matrix& a = cache.activations[static_cast<std::size_t>(l)];
            for (std::size_t i = 0; i < da.values.size(); ++i)
                da.values[i] *= activation_grad(z.values[i], a.values[i], spec.hidden_activation);
            dz = std::move(da);
        }
    }
    if (!grads.all_finite()) throw NumericError("backprop: non-finite gradient");
    return grads;
}

} // namespace detail

/// Analytic gradient of the mean cross entropy loss w.r.t. every parameter.
inline GradSet backward_ce(const ActivationCache& cache, const Matrix& Y) {
    detail::check_cache(cache, Y, "backward_ce");
    const double inv_k = 1.0 / cache.probs.rows;
    Matrix dz(cache.probs.rows, cache.probs.cols);
    for (std::size_t i = 0; i < dz.values.size(); ++i)
        dz.values[i] = (cache.probs.values[i] - Y.values[i]) * inv_k;
    return detail::backprop_logits(cache, std::move(dz));
}

/// Analytic gradient of the mean KL consistency loss w.r.t. the student
/// parameters. The target distribution is treated as a constant.
inline GradSet backward_kl(const ActivationCache& cache_student, const SoftmaxOutput& target) {
    detail::check_cache(cache_student, target.probs, "backward_kl");
    const double inv_k = 1.0 / cache_student.probs.rows;
    Matrix dz(cache_student.probs.rows, cache_student.probs.cols);
    for (std::size_t i = 0; i < dz.values.size(); ++i)
        dz.values[i] = (cache_student.probs.values[i] - target.probs.values[i]) * inv_k;
    return detail::backprop_logits(cache_student, std::move(dz));
}

} // namespace mlnt
