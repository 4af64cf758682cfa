#pragma once

// Validation-loss driven training control: reduce-on-plateau learning rate
// and early stopping. "No improvement" means the validation loss never beat
// the best seen value by more than min_delta. The first epoch establishes
// the baseline without counting as an improvement, so a fully flat history
// of length == patience triggers.

#include <limits>
#include <vector>

#include "risae/core/errors.hpp"

namespace risae::nn {

struct TrainSchedule {
    int max_epochs = 150;
    int early_stop_patience = 100;
    int lr_plateau_patience = 50;
    double lr_factor = 0.1;
    double min_delta = 1e-4;

    void validate() const {
        if (max_epochs < 1) throw ConfigError("schedule: max_epochs must be >= 1");
        if (early_stop_patience < 1) throw ConfigError("schedule: early_stop_patience must be >= 1");
        if (lr_plateau_patience < 1) throw ConfigError("schedule: lr_plateau_patience must be >= 1");
        if (!(lr_factor > 0.0 && lr_factor < 1.0))
            throw ConfigError("schedule: lr_factor must be in (0,1)");
    }
};

class ScheduleTracker {
public:
    explicit ScheduleTracker(TrainSchedule sched) : sched_(sched) { sched_.validate(); }

    struct Decision {
        bool stop = false;
        bool reduce_lr = false; // multiply current lr by sched.lr_factor
    };

    /// Feed one epoch's validation loss; call exactly once per epoch.
    Decision observe(double val_loss) {
        ++epoch_;
        bool improved = val_loss < best_ - sched_.min_delta;
        if (first_) {
            best_ = val_loss;
            improved = false;
            first_ = false;
        } else if (improved) {
            best_ = val_loss;
            best_epoch_ = epoch_;
        }
        if (improved) {
            plateau_wait_ = 0;
            stop_wait_ = 0;
        } else {
            ++plateau_wait_;
            ++stop_wait_;
        }
        Decision d;
        if (plateau_wait_ >= sched_.lr_plateau_patience) {
            d.reduce_lr = true;
            plateau_wait_ = 0;
        }
        if (stop_wait_ >= sched_.early_stop_patience) d.stop = true;
        return d;
    }

    double best() const { return best_; }
    int best_epoch() const { return best_epoch_; }
    int epochs_seen() const { return epoch_; }

private:
    TrainSchedule sched_;
    bool first_ = true;
    double best_ = std::numeric_limits<double>::infinity();
    int best_epoch_ = 1;
    int plateau_wait_ = 0;
    int stop_wait_ = 0;
    int epoch_ = 0;
};

struct ScheduleOutcome {
    bool stop = false;
    double lr_multiplier = 1.0; // product of all plateau reductions so far
};

/// Stateless evaluation of a whole validation-loss history.
inline ScheduleOutcome evaluate_schedule(const TrainSchedule& sched,
                                         const std::vector<double>& history) {
    if (history.empty()) throw ConfigError("evaluate_schedule: empty history");
    ScheduleTracker tracker(sched);
    ScheduleOutcome out;
    for (double v : history) {
        auto d = tracker.observe(v);
        if (d.reduce_lr) out.lr_multiplier *= sched.lr_factor;
        if (d.stop) {
            out.stop = true;
            break;
        }
    }
    return out;
}

} // namespace risae::nn
