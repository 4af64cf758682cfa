#pragma once

// Adam with bias correction. Moment slots are keyed by parameter name, so the
// optimizer survives parameter re-enumeration and can be checkpointed.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "risae/core/array.hpp"
#include "risae/core/errors.hpp"
#include "risae/nn/layers.hpp"

namespace risae::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg), lr_(cfg.lr) {}

    double lr() const { return lr_; }
    void set_lr(double lr) { lr_ = lr; }
    void scale_lr(double factor) { lr_ *= factor; }
    long step_count() const { return t_; }

    /// One bias-corrected update over the given parameters using their
    /// accumulated gradients. Throws NumericError on any non-finite gradient
    /// without touching the parameters.
    void step(const std::vector<ParamView>& params) {
        for (const auto& p : params) {
            if (!p.grad) continue;
            if (!p.grad->all_finite()) {
                throw NumericError("adam: non-finite gradient in '" + p.name + "' at step " +
                                   std::to_string(t_ + 1));
            }
        }
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (const auto& p : params) {
            if (!p.grad) continue;
            Slot& slot = slot_for(p);
            RealArray& m = slot.m;
            RealArray& v = slot.v;
            for (std::size_t i = 0; i < p.value->size(); ++i) {
                const double g = (*p.grad)[i];
                m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
                v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
                const double mhat = m[i] / bc1;
                const double vhat = v[i] / bc2;
                (*p.value)[i] -= lr_ * mhat / (std::sqrt(vhat) + cfg_.eps);
            }
        }
    }

    /// Moment tensors for checkpointing, in deterministic (sorted) name order.
    std::vector<ParamView> moments() {
        std::vector<ParamView> out;
        for (auto& [name, slot] : slots_) {
            out.push_back({"adam/m/" + name, "adam_moment", &slot.m, nullptr});
            out.push_back({"adam/v/" + name, "adam_moment", &slot.v, nullptr});
        }
        return out;
    }

private:
    struct Slot {
        RealArray m, v;
    };

    Slot& slot_for(const ParamView& p) {
        auto it = slots_.find(p.name);
        if (it == slots_.end()) {
            Slot s{RealArray(p.value->shape()), RealArray(p.value->shape())};
            it = slots_.emplace(p.name, std::move(s)).first;
        } else if (it->second.m.shape() != p.value->shape()) {
            throw DimensionError("adam: parameter '" + p.name + "' changed shape");
        }
        return it->second;
    }

    AdamConfig cfg_;
    double lr_;
    long t_ = 0;
    std::map<std::string, Slot> slots_;
};

} // namespace risae::nn
