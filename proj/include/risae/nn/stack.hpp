#pragma once

// Fixed sequential composition of layers. This is the only network container
// the system needs: transmitter, receiver and RIS nets are all straight
// stacks per the architecture tables.

#include <string>
#include <variant>
#include <vector>

#include "risae/nn/layers.hpp"

namespace risae::nn {

using Layer = std::variant<Conv1d, Dense, BatchNorm, Activation, PowerNorm>;

class Stack {
public:
    template <typename L>
    Stack& add(L&& layer) {
        layers_.emplace_back(std::forward<L>(layer));
        return *this;
    }

    std::size_t size() const { return layers_.size(); }

    template <typename L>
    L& layer(std::size_t i) {
        return std::get<L>(layers_.at(i));
    }
    template <typename L>
    const L& layer(std::size_t i) const {
        return std::get<L>(layers_.at(i));
    }

    RealArray forward(const RealArray& x, Mode mode) {
        RealArray h = x;
        for (auto& l : layers_) {
            h = std::visit([&](auto& v) { return v.forward(h, mode); }, l);
        }
        return h;
    }

    /// Const inference path; safe for concurrent readers.
    RealArray infer(const RealArray& x) const {
        RealArray h = x;
        for (const auto& l : layers_) {
            h = std::visit([&](const auto& v) { return v.infer(h); }, l);
        }
        return h;
    }

    /// Backpropagate through all layers except the top `skip_top` ones
    /// (skip_top = 1 with a fused softmax/cross-entropy gradient).
    RealArray backward(const RealArray& gy, std::size_t skip_top = 0) {
        RealArray g = gy;
        for (std::size_t i = layers_.size() - skip_top; i-- > 0;) {
            g = std::visit([&](auto& v) { return v.backward(g); }, layers_[i]);
        }
        return g;
    }

    void zero_grads() {
        for (auto& l : layers_) {
            std::visit([](auto& v) { v.zero_grads(); }, l);
        }
    }

    /// Trainable parameters, named `<prefix>/<layer-index>/<param>`.
    void collect_params(const std::string& prefix, std::vector<ParamView>& out) {
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            std::visit([&](auto& v) { v.collect_params(prefix + "/" + std::to_string(i), out); },
                       layers_[i]);
        }
    }

    /// Non-trainable state (batchnorm running statistics).
    void collect_state(const std::string& prefix, std::vector<ParamView>& out) {
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            if (auto* bn = std::get_if<BatchNorm>(&layers_[i])) {
                bn->collect_state(prefix + "/" + std::to_string(i), out);
            }
        }
    }

    std::vector<ParamView> params(const std::string& prefix) {
        std::vector<ParamView> out;
        collect_params(prefix, out);
        return out;
    }

    /// All checkpointable tensors: parameters plus state.
    std::vector<ParamView> tensors(const std::string& prefix) {
        std::vector<ParamView> out;
        collect_params(prefix, out);
        collect_state(prefix, out);
        return out;
    }

    void mark_bn_stats_ready() {
        for (auto& l : layers_) {
            if (auto* bn = std::get_if<BatchNorm>(&l)) bn->mark_stats_ready();
        }
    }

    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }

private:
    std::vector<Layer> layers_;
};

} // namespace risae::nn
