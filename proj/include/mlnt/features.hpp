#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mlnt/data.hpp"
#include "mlnt/error.hpp"
#include "mlnt/matrix.hpp"
#include "mlnt/mlp.hpp"

namespace mlnt {

/// Per-sample feature vectors used for neighbor ranking: the pre-softmax
/// activations of a classifier pre-trained on the full noisy training set.
struct FeatureIndex {
    Matrix features; // [n x d_f]
    std::vector<std::int64_t> sample_ids;
    std::unordered_map<std::int64_t, int> row_of;

    void rebuild_lookup() {
        row_of.clear();
        row_of.reserve(sample_ids.size());
        for (std::size_t i = 0; i < sample_ids.size(); ++i)
            row_of.emplace(sample_ids[i], static_cast<int>(i));
        if (row_of.size() != sample_ids.size()) throw InputError("FeatureIndex: duplicate sample ids");
    }
};

/// Runs the pretrained net over the dataset and records each sample's final
/// pre-softmax activation (logit) vector.
inline FeatureIndex build_feature_index(const Dataset& dataset, const MlpSpec& spec, const ParamSet& pretrained) {
    spec.validate();
    if (!pretrained.shape_matches(spec)) throw DimensionError("build_feature_index: params do not match spec");
    if (dataset.dim() != spec.input_dim()) throw DimensionError("build_feature_index: feature width mismatch");

    FeatureIndex index;
    index.sample_ids = dataset.ids;
    const auto [cache, out] = forward(spec, pretrained, dataset.features);
    index.features = cache.preacts.back(); // logits, before softmax
    require_finite(index.features, "build_feature_index");
    index.rebuild_lookup();
    return index;
}

/// For each batch member, the K other batch members closest in Euclidean
/// feature distance, self excluded. Ties break toward the smaller sample id;
/// if the batch has fewer than K+1 members, all others are returned. A batch
/// of size one yields an empty neighbor list. Returned values are positions
/// within the batch.
inline std::vector<std::vector<int>> topk_neighbors(const FeatureIndex& index,
                                                    const std::vector<std::int64_t>& batch_ids, int K) {
    if (K < 1) throw InputError("topk_neighbors: K must be >= 1");
    const int k = static_cast<int>(batch_ids.size());
    std::vector<int> rows(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const auto it = index.row_of.find(batch_ids[static_cast<std::size_t>(i)]);
        if (it == index.row_of.end())
            throw InputError("topk_neighbors: batch id " + std::to_string(batch_ids[static_cast<std::size_t>(i)]) +
                             " not in feature index");
        rows[static_cast<std::size_t>(i)] = it->second;
    }

    const int d = index.features.cols;
    std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(k));
    std::vector<std::pair<double, std::int64_t>> cand; // (distance, sample id); id doubles as tiebreak
    std::vector<int> cand_pos;
    for (int i = 0; i < k; ++i) {
        cand.clear();
        cand_pos.clear();
        const double* fi = index.features.row_ptr(rows[static_cast<std::size_t>(i)]);
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            const double* fj = index.features.row_ptr(rows[static_cast<std::size_t>(j)]);
            cand.emplace_back(squared_distance(fi, fj, d), batch_ids[static_cast<std::size_t>(j)]);
            cand_pos.push_back(j);
        }
        std::vector<int> order(cand.size());
        for (std::size_t t = 0; t < order.size(); ++t) order[t] = static_cast<int>(t);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return cand[static_cast<std::size_t>(a)] < cand[static_cast<std::size_t>(b)]; });
        const int take = std::min<int>(K, static_cast<int>(order.size()));
        for (int t = 0; t < take; ++t)
            neighbors[static_cast<std::size_t>(i)].push_back(cand_pos[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]);
    }
    return neighbors;
}

} // namespace mlnt
