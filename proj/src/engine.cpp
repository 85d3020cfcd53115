#include "wcfs/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wcfs/distributions.hpp"
#include "wcfs/errors.hpp"
#include "wcfs/policies.hpp"
#include "wcfs/rng.hpp"

namespace wcfs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBatchCount = 32;
constexpr double kTCrit31 = 2.0395134464;  // two-sided 95% Student-t, 31 dof
// A job is complete once its remaining work drops within a small slack of
// zero. The slack has a component relative to the job's size (drift from
// repeated rate changes) and one relative to the clock (event times are
// absolute, so decrements carry rounding error proportional to the clock).
constexpr double kDoneEps = 1e-9;
constexpr double kTimeEps = 1e-12;

struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

struct Job {
    std::uint64_t id = 0;
    double arrival_time = 0.0;
    double size = 0.0;
    double remaining = 0.0;
    double front_entry = 0.0;
    double srpt_key = 0.0;  // key currently stored in the remaining-order set
    JobClass cls;
    std::int32_t prev = -1;
    std::int32_t next = -1;
    std::int32_t cls_prev = -1;
    std::int32_t cls_next = -1;
    std::int32_t bucket = -1;
    bool in_front = false;
    bool counted = true;
};

struct SrptEntry {
    double remaining;
    std::uint64_t id;
    std::int32_t slot;
    bool operator<(const SrptEntry& o) const {
        if (remaining != o.remaining) return remaining < o.remaining;
        return id < o.id;
    }
};

struct Bucket {
    std::int32_t head = -1;
    std::int32_t tail = -1;
    long long count = 0;
};

Estimate estimate_from_batches(double value, const std::vector<double>& means) {
    Estimate e{value, kInf};
    if (means.size() == kBatchCount) {
        double avg = 0.0;
        for (double x : means) avg += x;
        avg /= means.size();
        double ss = 0.0;
        for (double x : means) ss += (x - avg) * (x - avg);
        double var = ss / (means.size() - 1);
        e.ci = kTCrit31 * std::sqrt(var / means.size());
    }
    return e;
}

class Engine {
  public:
    explicit Engine(const ModelSpec& model)
        : model_(model),
          needs_(view_needs(model.policy)),
          wcfs_(wcfs_params(model)),
          n_(front_size(model)),
          by_servers_(classes_by_servers(model.policy)) {}

    // next(out) supplies the next arrival (true) or reports exhaustion.
    // Arrivals beyond `total` are never requested.
    template <typename Next>
    RunMetrics run(Next&& next, std::uint64_t total, std::uint64_t warmup_count) {
        counted_total_ = total - warmup_count;
        batch_size_ = counted_total_ / kBatchCount;
        recording_ = warmup_count == 0;
        snaps_.push_back({0.0, 0.0, 0.0, 0.0});

        TraceJob pending;
        std::uint64_t injected = 0;
        bool have_pending = total > 0 && next(pending);

        while (have_pending || alive_count_ > 0) {
            build_view();
            allocate(model_, view_, alloc_);
            double busy = check_allocation();

            double t_complete = kInf;
            for (const auto& share : alloc_) {
                if (share.rate <= 0.0) continue;
                double t = clock_ + pool_[share.slot].remaining / share.rate;
                t_complete = std::min(t_complete, t);
            }
            double t_arrival = have_pending ? pending.arrival_time : kInf;
            if (t_complete == kInf && t_arrival == kInf)
                throw PolicyViolation("jobs present but nothing is being served");

            if (t_complete <= t_arrival) {
                advance(t_complete - clock_, busy);
                clock_ = t_complete;
                process_completions();
            } else {
                advance(t_arrival - clock_, busy);
                clock_ = t_arrival;
                inject(pending, injected, warmup_count);
                ++injected;
                have_pending = injected < total && next(pending);
            }
        }
        return finish(total);
    }

  private:
    // ---- state ----
    const ModelSpec& model_;
    ViewNeeds needs_;
    std::optional<WcfsParams> wcfs_;
    int n_;
    bool by_servers_;

    std::vector<Job> pool_;
    std::vector<std::int32_t> free_slots_;
    std::int32_t alive_head_ = -1;
    std::int32_t alive_tail_ = -1;
    long long alive_count_ = 0;
    std::int32_t front_last_ = -1;
    int front_count_ = 0;
    std::map<int, Bucket> buckets_;
    std::set<SrptEntry> by_remaining_;

    double clock_ = 0.0;
    double work_total_ = 0.0;

    // metrics
    bool recording_ = true;
    double record_start_ = 0.0;
    Kahan int_N_, int_W_, int_B_;
    Kahan sum_T_, sum_TQ_, sum_TF_;
    std::uint64_t counted_total_ = 0;
    std::uint64_t counted_done_ = 0;
    std::uint64_t completed_ = 0;
    std::uint64_t batch_size_ = 0;
    std::uint64_t in_batch_ = 0;
    double bsum_T_ = 0.0, bsum_TQ_ = 0.0, bsum_TF_ = 0.0;
    std::vector<double> bmeans_T_, bmeans_TQ_, bmeans_TF_;
    struct Snap {
        double t, n, w, b;
    };
    std::vector<Snap> snaps_;

    // per-event scratch
    std::vector<ViewJob> front_jobs_;
    std::vector<ViewJob> slice_jobs_;
    std::vector<ClassSlice> slices_;
    std::vector<ViewJob> rem_jobs_;
    PolicyView view_;
    ServiceAllocation alloc_;
    std::vector<std::int32_t> done_slots_;

    // ---- plumbing ----
    std::int32_t take_slot() {
        if (!free_slots_.empty()) {
            std::int32_t s = free_slots_.back();
            free_slots_.pop_back();
            return s;
        }
        pool_.emplace_back();
        return static_cast<std::int32_t>(pool_.size() - 1);
    }

    int class_attr(const JobClass& cls) const {
        return by_servers_ ? cls.servers : cls.threshold;
    }

    void refill_front() {
        while (front_count_ < n_) {
            std::int32_t cand = front_last_ >= 0 ? pool_[front_last_].next : alive_head_;
            if (cand < 0) break;
            pool_[cand].in_front = true;
            pool_[cand].front_entry = clock_;
            front_last_ = cand;
            ++front_count_;
        }
    }

    void inject(const TraceJob& arr, std::uint64_t index, std::uint64_t warmup_count) {
        if (!recording_ && index == warmup_count) {
            recording_ = true;
            record_start_ = clock_;
            snaps_[0].t = clock_;
        }
        std::int32_t slot = take_slot();
        Job& j = pool_[slot];
        j.id = index;
        j.arrival_time = clock_;
        j.size = arr.size;
        j.remaining = arr.size;
        j.cls = arr.cls;
        j.in_front = false;
        j.counted = index >= warmup_count;
        j.prev = alive_tail_;
        j.next = -1;
        if (alive_tail_ >= 0)
            pool_[alive_tail_].next = slot;
        else
            alive_head_ = slot;
        alive_tail_ = slot;
        ++alive_count_;

        if (needs_ == ViewNeeds::ClassIndexed) {
            Bucket& b = buckets_[class_attr(j.cls)];
            j.cls_prev = b.tail;
            j.cls_next = -1;
            j.bucket = class_attr(j.cls);
            if (b.tail >= 0)
                pool_[b.tail].cls_next = slot;
            else
                b.head = slot;
            b.tail = slot;
            ++b.count;
        }
        if (needs_ == ViewNeeds::RemainingOrdered) {
            j.srpt_key = j.remaining;
            by_remaining_.insert({j.remaining, j.id, slot});
        }
        work_total_ += j.size;
        refill_front();
    }

    void remove(std::int32_t slot) {
        Job& j = pool_[slot];
        if (j.in_front) {
            if (front_last_ == slot) front_last_ = j.prev;
            --front_count_;
            j.in_front = false;
        }
        if (j.prev >= 0)
            pool_[j.prev].next = j.next;
        else
            alive_head_ = j.next;
        if (j.next >= 0)
            pool_[j.next].prev = j.prev;
        else
            alive_tail_ = j.prev;
        --alive_count_;

        if (j.bucket >= 0) {
            Bucket& b = buckets_[j.bucket];
            if (j.cls_prev >= 0)
                pool_[j.cls_prev].cls_next = j.cls_next;
            else
                b.head = j.cls_next;
            if (j.cls_next >= 0)
                pool_[j.cls_next].cls_prev = j.cls_prev;
            else
                b.tail = j.cls_prev;
            --b.count;
            j.bucket = -1;
        }
        if (needs_ == ViewNeeds::RemainingOrdered)
            by_remaining_.erase({j.srpt_key, j.id, slot});

        j.id = ~std::uint64_t{0};  // poison stale allocation references
        free_slots_.push_back(slot);
        refill_front();
    }

    static ViewJob to_view(const Job& j, std::int32_t slot) {
        return {j.id, slot, j.cls, j.size - j.remaining, j.remaining};
    }

    void build_view() {
        front_jobs_.clear();
        for (std::int32_t s = alive_head_;
             s >= 0 && static_cast<int>(front_jobs_.size()) < front_count_;
             s = pool_[s].next)
            front_jobs_.push_back(to_view(pool_[s], s));
        view_.front = front_jobs_;
        view_.queue_length = alive_count_ - front_count_;

        if (needs_ == ViewNeeds::ClassIndexed) {
            slice_jobs_.clear();
            slices_.clear();
            struct Extent {
                int attr;
                long long count;
                std::size_t start, len;
            };
            thread_local std::vector<Extent> extents;
            extents.clear();
            for (const auto& [attr, bucket] : buckets_) {
                if (bucket.count == 0) continue;
                std::size_t start = slice_jobs_.size();
                int limit = model_.k + 1;
                for (std::int32_t s = bucket.head; s >= 0 && limit > 0;
                     s = pool_[s].cls_next, --limit)
                    slice_jobs_.push_back(to_view(pool_[s], s));
                extents.push_back({attr, bucket.count, start, slice_jobs_.size() - start});
            }
            for (const auto& e : extents)
                slices_.push_back(
                    {e.attr, e.count,
                     std::span<const ViewJob>(slice_jobs_.data() + e.start, e.len)});
            view_.classes = slices_;
        }
        if (needs_ == ViewNeeds::RemainingOrdered) {
            rem_jobs_.clear();
            int limit = model_.k;
            for (auto it = by_remaining_.begin(); it != by_remaining_.end() && limit > 0;
                 ++it, --limit)
                rem_jobs_.push_back(to_view(pool_[it->slot], it->slot));
            view_.by_remaining = rem_jobs_;
        }
    }

    double check_allocation() {
        double sum = 0.0;
        for (const auto& share : alloc_) {
            if (!(share.rate >= 0.0) || !std::isfinite(share.rate))
                throw PolicyViolation("allocation contains a bad rate");
            if (share.slot < 0 || share.slot >= static_cast<std::int32_t>(pool_.size()) ||
                pool_[share.slot].id != share.id)
                throw PolicyViolation("allocation references a job not in the system");
            if (wcfs_ && share.rate > 0.0 && !pool_[share.slot].in_front)
                throw PolicyViolation("rate assigned outside the front");
            sum += share.rate;
        }
        if (sum > 1.0 + 1e-12)
            throw PolicyViolation("total service rate exceeds capacity");
        if (wcfs_) {
            if (front_count_ == n_) {
                if (std::abs(sum - 1.0) > 1e-9)
                    throw PolicyViolation("front is full but service is not work-conserving");
            } else if (alive_count_ > 0 && sum < wcfs_->b_inf - 1e-9) {
                throw PolicyViolation("service rate below the non-idling floor");
            }
        }
        return sum;
    }

    double completion_slack(double rate, double size) const {
        return rate * kTimeEps * (clock_ + 1.0) + kDoneEps * size;
    }

    void advance(double dt, double busy) {
        if (dt < 0.0) dt = 0.0;
        if (recording_ && dt > 0.0) {
            int_N_.add(static_cast<double>(alive_count_) * dt);
            int_B_.add(busy * dt);
            // W falls linearly at slope -busy between events, so the
            // integral over the interval is exact.
            int_W_.add((work_total_ - 0.5 * busy * dt) * dt);
        }
        if (dt > 0.0) {
            for (const auto& share : alloc_) {
                if (share.rate <= 0.0) continue;
                Job& j = pool_[share.slot];
                j.remaining -= share.rate * dt;
                if (j.remaining < -completion_slack(share.rate, j.size))
                    throw OvershootError("job " + std::to_string(j.id) +
                                         " served past completion");
                if (needs_ == ViewNeeds::RemainingOrdered) {
                    by_remaining_.erase({j.srpt_key, j.id, share.slot});
                    j.srpt_key = j.remaining;
                    by_remaining_.insert({j.remaining, j.id, share.slot});
                }
            }
            work_total_ -= busy * dt;
        }
    }

    void process_completions() {
        done_slots_.clear();
        for (const auto& share : alloc_) {
            if (share.rate <= 0.0) continue;
            const Job& j = pool_[share.slot];
            if (j.remaining <= completion_slack(share.rate, j.size))
                done_slots_.push_back(share.slot);
        }
        std::sort(done_slots_.begin(), done_slots_.end(),
                  [this](std::int32_t a, std::int32_t b) {
                      return pool_[a].id < pool_[b].id;
                  });
        for (std::int32_t slot : done_slots_) complete(slot);
    }

    void complete(std::int32_t slot) {
        Job& j = pool_[slot];
        work_total_ -= j.remaining;  // residual within epsilon of zero
        double t = clock_ - j.arrival_time;
        double tf = j.in_front ? clock_ - j.front_entry : 0.0;
        double tq = t - tf;
        ++completed_;
        if (j.counted) {
            sum_T_.add(t);
            sum_TQ_.add(tq);
            sum_TF_.add(tf);
            ++counted_done_;
            if (batch_size_ > 0 && bmeans_T_.size() < kBatchCount) {
                bsum_T_ += t;
                bsum_TQ_ += tq;
                bsum_TF_ += tf;
                if (++in_batch_ == batch_size_) {
                    bmeans_T_.push_back(bsum_T_ / batch_size_);
                    bmeans_TQ_.push_back(bsum_TQ_ / batch_size_);
                    bmeans_TF_.push_back(bsum_TF_ / batch_size_);
                    bsum_T_ = bsum_TQ_ = bsum_TF_ = 0.0;
                    in_batch_ = 0;
                    snaps_.push_back({clock_, int_N_.sum, int_W_.sum, int_B_.sum});
                }
            }
        }
        remove(slot);
    }

    RunMetrics finish(std::uint64_t total) {
        RunMetrics out;
        out.simulated_arrivals = total;
        out.completed_count = counted_done_;
        if (counted_done_ > 0) {
            double c = static_cast<double>(counted_done_);
            out.mean_T = estimate_from_batches(sum_T_.sum / c, bmeans_T_);
            out.mean_T_Q = estimate_from_batches(sum_TQ_.sum / c, bmeans_TQ_);
            out.mean_T_F = estimate_from_batches(sum_TF_.sum / c, bmeans_TF_);
        }
        double duration = clock_ - record_start_;
        if (duration > 0.0) {
            auto time_batches = [this](double Snap::* field) {
                std::vector<double> means;
                if (snaps_.size() == kBatchCount + 1) {
                    for (std::size_t i = 1; i < snaps_.size(); ++i) {
                        double dt = snaps_[i].t - snaps_[i - 1].t;
                        if (dt <= 0.0) return std::vector<double>{};
                        means.push_back((snaps_[i].*field - snaps_[i - 1].*field) / dt);
                    }
                }
                return means;
            };
            out.mean_N = estimate_from_batches(int_N_.sum / duration, time_batches(&Snap::n));
            out.mean_W = estimate_from_batches(int_W_.sum / duration, time_batches(&Snap::w));
            out.busy_fraction =
                estimate_from_batches(int_B_.sum / duration, time_batches(&Snap::b));
        }
        return out;
    }
};

}  // namespace

RunMetrics simulate(const ModelSpec& model, double arrival_rate, const SimConfig& cfg) {
    validate(model);
    if (!(arrival_rate > 0.0))
        throw std::invalid_argument("arrival rate must be positive");
    if (!(cfg.warmup_fraction >= 0.0) || cfg.warmup_fraction >= 1.0)
        throw std::invalid_argument("warmup fraction must lie in [0, 1)");
    Moments m = moments(model.dist);
    double rho = arrival_rate * m.mean;
    if (rho >= 1.0)
        throw UnstableConfig("rho = " + std::to_string(rho) + " is not below 1");
    if (!std::isfinite(rem_sup(model.dist)))
        throw InfiniteRemSup("size distribution has unbounded expected remainder");

    RngStream root(cfg.seed);
    RngStream arrivals = root.derived(1);
    RngStream draws = root.derived(2);
    double t = 0.0;
    auto next = [&](TraceJob& out) {
        t += arrivals.next_exponential(arrival_rate);
        auto [size, cls] = sample(model.dist, draws);
        out = {t, size, cls};
        return true;
    };
    std::uint64_t warmup =
        static_cast<std::uint64_t>(cfg.warmup_fraction * static_cast<double>(cfg.num_arrivals));
    Engine engine(model);
    return engine.run(next, cfg.num_arrivals, warmup);
}

RunMetrics simulate_trace(const ModelSpec& model, std::span<const TraceJob> trace) {
    validate(model);
    double prev = 0.0;
    for (const auto& job : trace) {
        if (job.arrival_time < prev)
            throw std::invalid_argument("trace arrival times must be nondecreasing");
        if (!(job.size > 0.0)) throw std::invalid_argument("trace sizes must be positive");
        prev = job.arrival_time;
    }
    std::size_t i = 0;
    auto next = [&](TraceJob& out) {
        if (i >= trace.size()) return false;
        out = trace[i++];
        return true;
    };
    Engine engine(model);
    return engine.run(next, trace.size(), 0);
}

}  // namespace wcfs
