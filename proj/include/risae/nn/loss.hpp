#pragma once

// Categorical cross-entropy between predicted class probabilities and one-hot
// targets, averaged over all rows. The returned gradient is taken with
// respect to the pre-softmax logits (softmax and loss fused), which is the
// numerically stable form: grad = (probs - onehot) / rows.

#include <cmath>

#include "risae/core/array.hpp"
#include "risae/core/errors.hpp"

namespace risae::nn {

inline constexpr double kCrossEntropyEps = 1e-12;

struct LossResult {
    double loss = 0.0;
    RealArray grad_logits; // same shape as probs
};

inline LossResult cross_entropy(const RealArray& probs, const RealArray& onehot) {
    if (probs.shape() != onehot.shape()) {
        throw DimensionError("cross_entropy: probs shape " + probs.shape_str() +
                             " != targets shape " + onehot.shape_str());
    }
    if (probs.rank() == 0) throw DimensionError("cross_entropy: scalar input");
    const std::size_t classes = probs.dim(probs.rank() - 1);
    const std::size_t rows = probs.size() / classes;
    if (rows == 0) throw DimensionError("cross_entropy: empty batch");

    LossResult r;
    r.grad_logits = RealArray(probs.shape());
    const double inv_rows = 1.0 / static_cast<double>(rows);
    double loss = 0.0;
    for (std::size_t m = 0; m < rows; ++m) {
        const double* p = probs.data() + m * classes;
        const double* t = onehot.data() + m * classes;
        double* g = r.grad_logits.data() + m * classes;
        for (std::size_t c = 0; c < classes; ++c) {
            if (t[c] != 0.0) {
                const double pc = p[c] < kCrossEntropyEps ? kCrossEntropyEps : p[c];
                loss -= t[c] * std::log(pc);
            }
            g[c] = (p[c] - t[c]) * inv_rows;
        }
    }
    r.loss = loss * inv_rows;
    return r;
}

} // namespace risae::nn
