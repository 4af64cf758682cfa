#pragma once

// Layers for the three networks: 1-D convolution (stride 1, same padding),
// dense, batch normalization, activations, and the transmitter's power
// normalization. Each layer implements an explicit forward/backward pair;
// there is no autodiff graph. forward() in a training mode caches whatever
// backward() needs; infer() is const and touches no state.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "risae/core/array.hpp"
#include "risae/core/errors.hpp"
#include "risae/core/gemm.hpp"
#include "risae/core/rng.hpp"

namespace risae::nn {

enum class Mode {
    Train,       // batch statistics, caches filled, running stats updated
    TrainStatic, // batch statistics, caches filled, no running-stat update (gradient checks)
    Infer,       // running statistics, no caches
};

/// Named view of one parameter (or state) tensor. `grad` is null for
/// non-trainable state such as batchnorm running statistics.
struct ParamView {
    std::string name;
    std::string kind;
    RealArray* value = nullptr;
    RealArray* grad = nullptr;
};

inline double glorot_limit(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

inline void glorot_fill(RealArray& w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double lim = glorot_limit(fan_in, fan_out);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-lim, lim);
}

// ---------------------------------------------------------------------------
// Conv1d: x (B, L, C_in) -> y (B, L, C_out), stride 1, zero same-padding.
// Weight layout (kernel, C_in, C_out); flattening the first two axes turns the
// convolution into one GEMM against the im2col expansion of x.
// ---------------------------------------------------------------------------
class Conv1d {
public:
    Conv1d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, Rng& rng)
        : in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel),
          weight({kernel, in_ch, out_ch}), bias({out_ch}),
          grad_weight({kernel, in_ch, out_ch}), grad_bias({out_ch}) {
        glorot_fill(weight, kernel * in_ch, kernel * out_ch, rng);
    }

    std::size_t in_channels() const { return in_ch_; }
    std::size_t out_channels() const { return out_ch_; }
    std::size_t kernel() const { return kernel_; }

    RealArray forward(const RealArray& x, Mode mode) {
        if (mode == Mode::Infer) return infer(x);
        RealArray cols = im2col(x);
        RealArray y = matmul_bias(cols);
        cols_cache_ = std::move(cols);
        in_shape_ = x.shape();
        return y.reshaped({x.dim(0), x.dim(1), out_ch_});
    }

    RealArray infer(const RealArray& x) const {
        RealArray cols = im2col(x);
        RealArray y = matmul_bias(cols);
        return y.reshaped({x.dim(0), x.dim(1), out_ch_});
    }

    RealArray backward(const RealArray& gy) {
        if (cols_cache_.empty()) throw StateError("Conv1d::backward before forward");
        const std::size_t batch = in_shape_[0], len = in_shape_[1];
        const std::size_t rows = batch * len;
        const std::size_t kc = kernel_ * in_ch_;
        require_dim(gy, 2, out_ch_, "Conv1d::backward");

        for (std::size_t m = 0; m < rows; ++m) {
            const double* g = gy.data() + m * out_ch_;
            for (std::size_t j = 0; j < out_ch_; ++j) grad_bias[j] += g[j];
        }
        gemm_tn(cols_cache_.data(), gy.data(), grad_weight.data(), rows, kc, out_ch_);

        RealArray gcols({rows, kc});
        gemm_nt(gy.data(), weight.data(), gcols.data(), rows, out_ch_, kc);
        return col2im(gcols, batch, len);
    }

    void collect_params(const std::string& prefix, std::vector<ParamView>& out) {
        out.push_back({prefix + "/weight", "conv1d", &weight, &grad_weight});
        out.push_back({prefix + "/bias", "conv1d", &bias, &grad_bias});
    }

    void zero_grads() {
        grad_weight.fill(0.0);
        grad_bias.fill(0.0);
    }

    RealArray weight, bias;
    RealArray grad_weight, grad_bias;

private:
    RealArray im2col(const RealArray& x) const {
        require_rank(x, 3, "Conv1d");
        require_dim(x, 2, in_ch_, "Conv1d: input feature axis (2)");
        const std::size_t batch = x.dim(0), len = x.dim(1);
        const std::size_t pad = (kernel_ - 1) / 2;
        RealArray cols({batch * len, kernel_ * in_ch_});
        for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t l = 0; l < len; ++l) {
                double* row = cols.data() + (b * len + l) * kernel_ * in_ch_;
                for (std::size_t t = 0; t < kernel_; ++t) {
                    const long long src = static_cast<long long>(l) + static_cast<long long>(t) -
                                          static_cast<long long>(pad);
                    if (src < 0 || src >= static_cast<long long>(len)) continue;
                    const double* px = x.data() + (b * len + static_cast<std::size_t>(src)) * in_ch_;
                    std::copy(px, px + in_ch_, row + t * in_ch_);
                }
            }
        }
        return cols;
    }

    RealArray matmul_bias(const RealArray& cols) const {
        const std::size_t rows = cols.dim(0);
        RealArray y({rows, out_ch_});
        for (std::size_t m = 0; m < rows; ++m) {
            double* py = y.data() + m * out_ch_;
            std::copy(bias.data(), bias.data() + out_ch_, py);
        }
        gemm_nn(cols.data(), weight.data(), y.data(), rows, kernel_ * in_ch_, out_ch_);
        return y;
    }

    RealArray col2im(const RealArray& gcols, std::size_t batch, std::size_t len) const {
        const std::size_t pad = (kernel_ - 1) / 2;
        RealArray gx({batch, len, in_ch_});
        for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t l = 0; l < len; ++l) {
                const double* row = gcols.data() + (b * len + l) * kernel_ * in_ch_;
                for (std::size_t t = 0; t < kernel_; ++t) {
                    const long long src = static_cast<long long>(l) + static_cast<long long>(t) -
                                          static_cast<long long>(pad);
                    if (src < 0 || src >= static_cast<long long>(len)) continue;
                    double* pg = gx.data() + (b * len + static_cast<std::size_t>(src)) * in_ch_;
                    const double* pr = row + t * in_ch_;
                    for (std::size_t c = 0; c < in_ch_; ++c) pg[c] += pr[c];
                }
            }
        }
        return gx;
    }

    std::size_t in_ch_, out_ch_, kernel_;
    RealArray cols_cache_;
    std::vector<std::size_t> in_shape_;
};

// ---------------------------------------------------------------------------
// Dense: affine map along the last axis, any leading shape.
// Weight layout (in, out).
// ---------------------------------------------------------------------------
class Dense {
public:
    Dense(std::size_t in_features, std::size_t out_features, Rng& rng)
        : in_(in_features), out_(out_features),
          weight({in_features, out_features}), bias({out_features}),
          grad_weight({in_features, out_features}), grad_bias({out_features}) {
        glorot_fill(weight, in_, out_, rng);
    }

    std::size_t in_features() const { return in_; }
    std::size_t out_features() const { return out_; }

    RealArray forward(const RealArray& x, Mode mode) {
        RealArray y = infer(x);
        if (mode != Mode::Infer) {
            x_cache_ = x;
        }
        return y;
    }

    RealArray infer(const RealArray& x) const {
        if (x.rank() == 0 || x.dim(x.rank() - 1) != in_) {
            throw DimensionError("Dense: last axis must be " + std::to_string(in_) + ", got " +
                                 x.shape_str());
        }
        const std::size_t rows = x.size() / in_;
        std::vector<std::size_t> out_shape = x.shape();
        out_shape.back() = out_;
        RealArray y(out_shape);
        for (std::size_t m = 0; m < rows; ++m) {
            double* py = y.data() + m * out_;
            std::copy(bias.data(), bias.data() + out_, py);
        }
        gemm_nn(x.data(), weight.data(), y.data(), rows, in_, out_);
        return y;
    }

    RealArray backward(const RealArray& gy) {
        if (x_cache_.empty()) throw StateError("Dense::backward before forward");
        const std::size_t rows = x_cache_.size() / in_;
        if (gy.size() != rows * out_) {
            throw DimensionError("Dense::backward: gradient shape " + gy.shape_str() +
                                 " does not match forward output");
        }
        for (std::size_t m = 0; m < rows; ++m) {
            const double* g = gy.data() + m * out_;
            for (std::size_t j = 0; j < out_; ++j) grad_bias[j] += g[j];
        }
        gemm_tn(x_cache_.data(), gy.data(), grad_weight.data(), rows, in_, out_);
        RealArray gx(x_cache_.shape());
        gemm_nt(gy.data(), weight.data(), gx.data(), rows, out_, in_);
        return gx;
    }

    void collect_params(const std::string& prefix, std::vector<ParamView>& out) {
        out.push_back({prefix + "/weight", "dense", &weight, &grad_weight});
        out.push_back({prefix + "/bias", "dense", &bias, &grad_bias});
    }

    void zero_grads() {
        grad_weight.fill(0.0);
        grad_bias.fill(0.0);
    }

    RealArray weight, bias;
    RealArray grad_weight, grad_bias;

private:
    std::size_t in_, out_;
    RealArray x_cache_;
};

// ---------------------------------------------------------------------------
// BatchNorm over the last (feature) axis; statistics pool every other axis.
// Training normalizes by biased batch moments and updates running statistics
// with momentum; inference uses the running statistics and requires at least
// one prior training step.
// ---------------------------------------------------------------------------
class BatchNorm {
public:
    explicit BatchNorm(std::size_t features, double momentum = 0.99, double eps = 1e-5)
        : features_(features), momentum_(momentum), eps_(eps),
          gamma(RealArray::full({features}, 1.0)), beta({features}),
          run_mean({features}), run_var(RealArray::full({features}, 1.0)),
          grad_gamma({features}), grad_beta({features}) {}

    std::size_t features() const { return features_; }
    bool stats_ready() const { return stats_ready_; }

    RealArray forward(const RealArray& x, Mode mode) {
        if (mode == Mode::Infer) return infer(x);
        check_features(x);
        const std::size_t rows = x.size() / features_;
        if (rows == 0) throw DimensionError("BatchNorm: empty batch");

        RealArray mean({features_}), var({features_});
        for (std::size_t m = 0; m < rows; ++m) {
            const double* px = x.data() + m * features_;
            for (std::size_t c = 0; c < features_; ++c) mean[c] += px[c];
        }
        for (std::size_t c = 0; c < features_; ++c) mean[c] /= static_cast<double>(rows);
        for (std::size_t m = 0; m < rows; ++m) {
            const double* px = x.data() + m * features_;
            for (std::size_t c = 0; c < features_; ++c) {
                const double d = px[c] - mean[c];
                var[c] += d * d;
            }
        }
        for (std::size_t c = 0; c < features_; ++c) var[c] /= static_cast<double>(rows);

        inv_std_ = RealArray({features_});
        for (std::size_t c = 0; c < features_; ++c) inv_std_[c] = 1.0 / std::sqrt(var[c] + eps_);

        xhat_ = RealArray(x.shape());
        RealArray y(x.shape());
        for (std::size_t m = 0; m < rows; ++m) {
            const double* px = x.data() + m * features_;
            double* ph = xhat_.data() + m * features_;
            double* py = y.data() + m * features_;
            for (std::size_t c = 0; c < features_; ++c) {
                ph[c] = (px[c] - mean[c]) * inv_std_[c];
                py[c] = gamma[c] * ph[c] + beta[c];
            }
        }

        if (mode == Mode::Train) {
            for (std::size_t c = 0; c < features_; ++c) {
                run_mean[c] = momentum_ * run_mean[c] + (1.0 - momentum_) * mean[c];
                run_var[c] = momentum_ * run_var[c] + (1.0 - momentum_) * var[c];
            }
            stats_ready_ = true;
        }
        rows_ = rows;
        return y;
    }

    RealArray infer(const RealArray& x) const {
        if (!stats_ready_) {
            throw StateError("BatchNorm: inference requested before any training step "
                             "populated the running statistics");
        }
        check_features(x);
        const std::size_t rows = x.size() / features_;
        RealArray y(x.shape());
        for (std::size_t m = 0; m < rows; ++m) {
            const double* px = x.data() + m * features_;
            double* py = y.data() + m * features_;
            for (std::size_t c = 0; c < features_; ++c) {
                const double istd = 1.0 / std::sqrt(run_var[c] + eps_);
                py[c] = gamma[c] * (px[c] - run_mean[c]) * istd + beta[c];
            }
        }
        return y;
    }

    RealArray backward(const RealArray& gy) {
        if (xhat_.empty()) throw StateError("BatchNorm::backward before forward");
        check_features(gy);
        const std::size_t rows = rows_;
        const double inv_rows = 1.0 / static_cast<double>(rows);

        RealArray sum_g({features_}), sum_gh({features_});
        for (std::size_t m = 0; m < rows; ++m) {
            const double* g = gy.data() + m * features_;
            const double* h = xhat_.data() + m * features_;
            for (std::size_t c = 0; c < features_; ++c) {
                sum_g[c] += g[c];
                sum_gh[c] += g[c] * h[c];
            }
        }
        for (std::size_t c = 0; c < features_; ++c) {
            grad_beta[c] += sum_g[c];
            grad_gamma[c] += sum_gh[c];
        }

        RealArray gx(gy.shape());
        for (std::size_t m = 0; m < rows; ++m) {
            const double* g = gy.data() + m * features_;
            const double* h = xhat_.data() + m * features_;
            double* pgx = gx.data() + m * features_;
            for (std::size_t c = 0; c < features_; ++c) {
                pgx[c] = gamma[c] * inv_std_[c] *
                         (g[c] - inv_rows * sum_g[c] - inv_rows * h[c] * sum_gh[c]);
            }
        }
        return gx;
    }

    void collect_params(const std::string& prefix, std::vector<ParamView>& out) {
        out.push_back({prefix + "/gamma", "batchnorm", &gamma, &grad_gamma});
        out.push_back({prefix + "/beta", "batchnorm", &beta, &grad_beta});
    }

    void collect_state(const std::string& prefix, std::vector<ParamView>& out) {
        out.push_back({prefix + "/running_mean", "batchnorm_stats", &run_mean, nullptr});
        out.push_back({prefix + "/running_var", "batchnorm_stats", &run_var, nullptr});
    }

    void zero_grads() {
        grad_gamma.fill(0.0);
        grad_beta.fill(0.0);
    }

    void mark_stats_ready() { stats_ready_ = true; } // after loading a checkpoint

    RealArray gamma, beta, run_mean, run_var;
    RealArray grad_gamma, grad_beta;

private:
    void check_features(const RealArray& x) const {
        if (x.rank() == 0 || x.dim(x.rank() - 1) != features_) {
            throw DimensionError("BatchNorm: last axis must be " + std::to_string(features_) +
                                 ", got " + x.shape_str());
        }
    }

    std::size_t features_;
    double momentum_, eps_;
    bool stats_ready_ = false;
    RealArray xhat_, inv_std_;
    std::size_t rows_ = 0;

public:
    double epsilon() const { return eps_; }
    double momentum() const { return momentum_; }
};

// ---------------------------------------------------------------------------
// Activations.
// ---------------------------------------------------------------------------
enum class Act { Linear, Relu, Elu, Softmax };

inline const char* act_name(Act a) {
    switch (a) {
        case Act::Linear: return "linear";
        case Act::Relu: return "relu";
        case Act::Elu: return "elu";
        case Act::Softmax: return "softmax";
    }
    return "?";
}

/// Stateless activation apply; softmax acts along the last (class) axis.
inline RealArray activation(const RealArray& x, Act kind) {
    RealArray y(x.shape());
    switch (kind) {
        case Act::Linear:
            y = x;
            break;
        case Act::Relu:
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
            break;
        case Act::Elu:
            for (std::size_t i = 0; i < x.size(); ++i)
                y[i] = x[i] > 0.0 ? x[i] : std::expm1(x[i]);
            break;
        case Act::Softmax: {
            if (x.rank() == 0) throw DimensionError("softmax: scalar input");
            const std::size_t classes = x.dim(x.rank() - 1);
            const std::size_t rows = x.size() / classes;
            for (std::size_t m = 0; m < rows; ++m) {
                const double* px = x.data() + m * classes;
                double* py = y.data() + m * classes;
                double mx = px[0];
                for (std::size_t c = 1; c < classes; ++c) mx = std::max(mx, px[c]);
                double sum = 0.0;
                for (std::size_t c = 0; c < classes; ++c) {
                    py[c] = std::exp(px[c] - mx);
                    sum += py[c];
                }
                for (std::size_t c = 0; c < classes; ++c) py[c] /= sum;
            }
            break;
        }
    }
    return y;
}

class Activation {
public:
    explicit Activation(Act kind) : kind_(kind) {}

    Act kind() const { return kind_; }

    RealArray forward(const RealArray& x, Mode mode) {
        RealArray y = activation(x, kind_);
        if (mode != Mode::Infer) y_cache_ = y;
        return y;
    }

    RealArray infer(const RealArray& x) const { return activation(x, kind_); }

    RealArray backward(const RealArray& gy) {
        if (kind_ == Act::Linear) return gy;
        if (y_cache_.empty()) throw StateError("Activation::backward before forward");
        RealArray gx(gy.shape());
        switch (kind_) {
            case Act::Linear:
                break;
            case Act::Relu:
                for (std::size_t i = 0; i < gy.size(); ++i)
                    gx[i] = y_cache_[i] > 0.0 ? gy[i] : 0.0;
                break;
            case Act::Elu:
                for (std::size_t i = 0; i < gy.size(); ++i)
                    gx[i] = y_cache_[i] > 0.0 ? gy[i] : gy[i] * (y_cache_[i] + 1.0);
                break;
            case Act::Softmax: {
                const std::size_t classes = gy.dim(gy.rank() - 1);
                const std::size_t rows = gy.size() / classes;
                for (std::size_t m = 0; m < rows; ++m) {
                    const double* g = gy.data() + m * classes;
                    const double* p = y_cache_.data() + m * classes;
                    double dot = 0.0;
                    for (std::size_t c = 0; c < classes; ++c) dot += g[c] * p[c];
                    double* pgx = gx.data() + m * classes;
                    for (std::size_t c = 0; c < classes; ++c) pgx[c] = p[c] * (g[c] - dot);
                }
                break;
            }
        }
        return gx;
    }

    void collect_params(const std::string&, std::vector<ParamView>&) {}
    void zero_grads() {}

private:
    Act kind_;
    RealArray y_cache_;
};

// ---------------------------------------------------------------------------
// PowerNorm: scales each example so its average energy per complex channel use
// is one. Input is (B, L, 2n) with real/imag interleaved pairs; the epsilon
// keeps the all-zero example finite and differentiable.
// ---------------------------------------------------------------------------
class PowerNorm {
public:
    explicit PowerNorm(double eps = 1e-24) : eps_(eps) {}

    RealArray forward(const RealArray& x, Mode mode) {
        if (mode == Mode::Infer) return infer(x);
        RealArray y = apply(x, &scale_cache_);
        x_cache_ = x;
        return y;
    }

    RealArray infer(const RealArray& x) const { return apply(x, nullptr); }

    RealArray backward(const RealArray& gy) {
        if (x_cache_.empty()) throw StateError("PowerNorm::backward before forward");
        const std::size_t batch = x_cache_.dim(0);
        const std::size_t per_example = x_cache_.dim(1) * x_cache_.dim(2);
        const double uses =
            static_cast<double>(x_cache_.dim(1)) * (static_cast<double>(x_cache_.dim(2)) / 2.0);
        RealArray gx(x_cache_.shape());
        for (std::size_t b = 0; b < batch; ++b) {
            const double* px = x_cache_.data() + b * per_example;
            const double* g = gy.data() + b * per_example;
            double* pgx = gx.data() + b * per_example;
            const double s = scale_cache_[b];
            double dot = 0.0;
            for (std::size_t i = 0; i < per_example; ++i) dot += g[i] * px[i];
            const double corr = s * s * s * dot / uses;
            for (std::size_t i = 0; i < per_example; ++i) pgx[i] = s * g[i] - corr * px[i];
        }
        return gx;
    }

    void collect_params(const std::string&, std::vector<ParamView>&) {}
    void zero_grads() {}

private:
    RealArray apply(const RealArray& x, std::vector<double>* scales_out) const {
        require_rank(x, 3, "PowerNorm");
        if (x.dim(2) % 2 != 0) {
            throw DimensionError("PowerNorm: feature axis (2) must be even (re/im pairs), got " +
                                 x.shape_str());
        }
        const std::size_t batch = x.dim(0);
        const std::size_t per_example = x.dim(1) * x.dim(2);
        const double uses = static_cast<double>(x.dim(1)) * (static_cast<double>(x.dim(2)) / 2.0);
        RealArray y(x.shape());
        if (scales_out) scales_out->assign(batch, 0.0);
        for (std::size_t b = 0; b < batch; ++b) {
            const double* px = x.data() + b * per_example;
            double energy = 0.0;
            for (std::size_t i = 0; i < per_example; ++i) energy += px[i] * px[i];
            const double s = 1.0 / std::sqrt(energy / uses + eps_);
            if (scales_out) (*scales_out)[b] = s;
            double* py = y.data() + b * per_example;
            for (std::size_t i = 0; i < per_example; ++i) py[i] = px[i] * s;
        }
        return y;
    }

    double eps_;
    RealArray x_cache_;
    std::vector<double> scale_cache_;
};

} // namespace risae::nn
