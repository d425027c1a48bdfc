#pragma once

#include <cmath>
#include <functional>

#include "mlnt/error.hpp"
#include "mlnt/mlp.hpp"

namespace mlnt {

/// Vanilla gradient step: params - step * grads. The input set is untouched.
inline ParamSet sgd_step(const ParamSet& params, const GradSet& grads, double step) {
    if (!params.shape_matches(grads)) throw DimensionError("sgd_step: shape mismatch");
    ParamSet out = params;
    add_scaled(out, grads, -step);
    return out;
}

/// State for SGD with momentum and L2 weight decay.
struct MomentumOptState {
    GradSet velocity;
    double momentum = 0.0;
    double weight_decay = 0.0;
    double lr = 0.0;

    static MomentumOptState make(const MlpSpec& spec, double momentum, double weight_decay, double lr) {
        if (momentum < 0.0 || momentum >= 1.0) throw InputError("MomentumOptState: momentum must be in [0,1)");
        if (weight_decay < 0.0) throw InputError("MomentumOptState: weight_decay must be >= 0");
        if (lr <= 0.0) throw InputError("MomentumOptState: lr must be > 0");
        return MomentumOptState{ParamSet::zeros(spec), momentum, weight_decay, lr};
    }
};

/// v <- momentum*v + (g + weight_decay*theta); theta <- theta - lr*v.
/// Returns the updated parameters; the velocity buffer is updated in place.
inline ParamSet momentum_step(MomentumOptState& state, const ParamSet& params, const GradSet& grads) {
    if (!params.shape_matches(grads) || !params.shape_matches(state.velocity))
        throw DimensionError("momentum_step: shape mismatch");
    ParamSet out = params;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto update = [&](double& v, double p, double g, double& o) {
            v = state.momentum * v + (g + state.weight_decay * p);
            o = p - state.lr * v;
        };
        LayerParams& vl = state.velocity.layers[l];
        const LayerParams& pl = params.layers[l];
        const LayerParams& gl = grads.layers[l];
        LayerParams& ol = out.layers[l];
        for (std::size_t i = 0; i < vl.weight.values.size(); ++i)
            update(vl.weight.values[i], pl.weight.values[i], gl.weight.values[i], ol.weight.values[i]);
        for (std::size_t i = 0; i < vl.bias.size(); ++i)
            update(vl.bias[i], pl.bias[i], gl.bias[i], ol.bias[i]);
    }
    if (!out.all_finite()) throw NumericError("momentum_step: non-finite parameters");
    return out;
}

/// Central-difference gradient of an arbitrary scalar loss, one coordinate at
/// a time. Used as the verification oracle for analytic gradients and as the
/// full (second-order-exact) meta-gradient route.
inline GradSet finite_diff_grad(const std::function<double(const ParamSet&)>& loss_fn, const ParamSet& params,
                                double eps) {
    if (eps <= 0.0) throw InputError("finite_diff_grad: eps must be > 0");
    ParamSet probe = params;
    GradSet grad = zeros_like(params);
    const auto diff_at = [&](double& x, double& g) {
        const double orig = x;
        x = orig + eps;
        const double lp = loss_fn(probe);
        x = orig - eps;
        const double lm = loss_fn(probe);
        x = orig;
        if (!std::isfinite(lp) || !std::isfinite(lm)) throw NumericError("finite_diff_grad: non-finite loss");
        g = (lp - lm) / (2.0 * eps);
    };
    for (std::size_t l = 0; l < probe.layers.size(); ++l) {
        for (std::size_t i = 0; i < probe.layers[l].weight.values.size(); ++i)
            diff_at(probe.layers[l].weight.values[i], grad.layers[l].weight.values[i]);
        for (std::size_t i = 0; i < probe.layers[l].bias.size(); ++i)
            diff_at(probe.layers[l].bias[i], grad.layers[l].bias[i]);
    }
    return grad;
}

} // namespace mlnt
