#pragma once

// Central finite-difference verification of analytic gradients. The caller
// supplies a pure scalar loss closure (deterministic: batchnorm in a static
// mode, fixed inputs, fixed RNG) plus the parameter views whose .grad fields
// hold the analytic gradient for that same loss.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "risae/core/array.hpp"
#include "risae/core/rng.hpp"
#include "risae/nn/layers.hpp"

namespace risae::nn {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
    std::size_t checked = 0;
};

struct GradCheckOptions {
    double eps = 1e-5;
    /// Cap on scalar entries probed per tensor; 0 checks every entry.
    std::size_t max_per_tensor = 0;
    std::uint64_t sample_seed = 0x5eedULL;
    double denom_floor = 1e-6;
};

inline GradCheckReport grad_check(const std::function<double()>& loss_fn,
                                  const std::vector<ParamView>& params,
                                  const GradCheckOptions& opt = {}) {
    GradCheckReport rep;
    Rng rng(opt.sample_seed);
    for (const auto& p : params) {
        if (!p.grad) continue;
        const std::size_t n = p.value->size();
        std::vector<std::size_t> idx;
        if (opt.max_per_tensor == 0 || n <= opt.max_per_tensor) {
            idx.resize(n);
            for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        } else {
            Rng trng = rng.stream(p.name);
            for (std::size_t i = 0; i < opt.max_per_tensor; ++i) {
                idx.push_back(static_cast<std::size_t>(trng.below(n)));
            }
        }
        for (std::size_t i : idx) {
            double& w = (*p.value)[i];
            const double saved = w;
            w = saved + opt.eps;
            const double lp = loss_fn();
            w = saved - opt.eps;
            const double lm = loss_fn();
            w = saved;
            const double numeric = (lp - lm) / (2.0 * opt.eps);
            const double analytic = (*p.grad)[i];
            const double denom =
                std::max({std::abs(numeric), std::abs(analytic), opt.denom_floor});
            const double rel = std::abs(numeric - analytic) / denom;
            ++rep.checked;
            if (rel > rep.max_rel_err) {
                rep.max_rel_err = rel;
                rep.worst_param = p.name;
                rep.worst_index = i;
                rep.worst_analytic = analytic;
                rep.worst_numeric = numeric;
            }
        }
    }
    return rep;
}

} // namespace risae::nn
