#include "wcfs/policies.hpp"

#include <algorithm>
#include <map>

#include "wcfs/errors.hpp"
#include "wcfs/packing.hpp"

namespace wcfs {

namespace {

int require_servers(const ViewJob& job) {
    if (job.cls.servers < 1)
        throw UnknownClassAttribute("job lacks a server requirement");
    return job.cls.servers;
}

int require_threshold(const ViewJob& job) {
    if (job.cls.threshold < 1)
        throw UnknownClassAttribute("job lacks a parallelism cap");
    return job.cls.threshold;
}

void allocate_het(const ModelSpec& model, std::span<const ViewJob> front,
                  ServiceAllocation& out) {
    // Re-rank at every event: oldest job on the fastest server, and so on
    // (or the reverse ranking when configured).
    thread_local std::vector<double> ranked;
    ranked.assign(model.speeds.begin(), model.speeds.end());
    if (model.order == ServerOrder::FastestFirst)
        std::sort(ranked.begin(), ranked.end(), std::greater<double>());
    else
        std::sort(ranked.begin(), ranked.end());
    std::size_t m = std::min(front.size(), ranked.size());
    for (std::size_t i = 0; i < m; ++i)
        out.push_back({front[i].id, front[i].slot, ranked[i]});
}

void allocate_lps(std::span<const ViewJob> front, ServiceAllocation& out) {
    if (front.empty()) return;
    double rate = 1.0 / static_cast<double>(front.size());
    for (const auto& job : front) out.push_back({job.id, job.slot, rate});
}

// Shared by threshold_fcfs and the threshold priority policies: grant each
// job its cap while caps fit, hand the first oversized job whatever is left,
// then stop.
template <typename JobRange>
int threshold_walk(int k, int granted_so_far, const JobRange& jobs, ServiceAllocation& out) {
    int left = k - granted_so_far;
    for (const auto& job : jobs) {
        if (left == 0) break;
        int cap = require_threshold(job);
        int g = std::min(cap, left);
        out.push_back({job.id, job.slot, static_cast<double>(g) / k});
        left -= g;
    }
    return k - left;
}

void allocate_msj_pack(const ModelSpec& model, std::span<const ViewJob> front,
                       ServiceAllocation& out) {
    thread_local std::vector<PackJob> candidates;
    thread_local std::vector<PackJob> selected;
    candidates.clear();
    for (const auto& job : front)
        candidates.push_back({job.id, job.slot, require_servers(job)});
    if (model.policy == PolicyId::MsjServerFilling)
        server_filling_select(model.k, candidates, selected);
    else
        divisor_filling_select(model.k, candidates, selected);
    for (const auto& job : selected)
        out.push_back({job.id, job.slot, static_cast<double>(job.v) / model.k});
}

void allocate_msj_fcfs(int k, std::span<const ViewJob> front, ServiceAllocation& out) {
    int left = k;
    for (const auto& job : front) {
        int v = require_servers(job);
        if (v > left) break;  // head-of-line blocking idles the remainder
        out.push_back({job.id, job.slot, static_cast<double>(v) / k});
        left -= v;
    }
}

// Priority over all jobs by server requirement, with the same blocking rule:
// the first job that does not fit stops service entirely.
void allocate_msj_priority(int k, std::span<const ClassSlice> classes, bool largest_first,
                           ServiceAllocation& out) {
    int left = k;
    auto serve_class = [&](const ClassSlice& slice) {
        if (slice.attr < 1)
            throw UnknownClassAttribute("job lacks a server requirement");
        for (const auto& job : slice.oldest) {
            if (slice.attr > left) return false;
            out.push_back({job.id, job.slot, static_cast<double>(slice.attr) / k});
            left -= slice.attr;
        }
        return true;
    };
    if (largest_first) {
        for (auto it = classes.rbegin(); it != classes.rend(); ++it)
            if (!serve_class(*it)) return;
    } else {
        for (const auto& slice : classes)
            if (!serve_class(slice)) return;
    }
}

void allocate_maxweight(int k, std::span<const ClassSlice> classes, ServiceAllocation& out) {
    std::map<int, long long> counts;
    for (const auto& slice : classes) {
        if (slice.attr < 1)
            throw UnknownClassAttribute("job lacks a server requirement");
        counts[slice.attr] = slice.count;
    }
    MaxWeightResult packing = maxweight_select(k, counts);
    for (const auto& slice : classes) {
        auto it = packing.z.find(slice.attr);
        if (it == packing.z.end()) continue;
        for (int i = 0; i < it->second; ++i) {
            const auto& job = slice.oldest[static_cast<std::size_t>(i)];
            out.push_back({job.id, job.slot, static_cast<double>(slice.attr) / k});
        }
    }
}

void allocate_srpt(int k, std::span<const ViewJob> by_remaining, ServiceAllocation& out) {
    std::size_t m = std::min<std::size_t>(by_remaining.size(), static_cast<std::size_t>(k));
    double rate = 1.0 / k;
    for (std::size_t i = 0; i < m; ++i)
        out.push_back({by_remaining[i].id, by_remaining[i].slot, rate});
}

void allocate_threshold_priority(int k, std::span<const ClassSlice> classes,
                                 bool largest_first, ServiceAllocation& out) {
    int granted = 0;
    auto serve_class = [&](const ClassSlice& slice) {
        granted = threshold_walk(k, granted, slice.oldest, out);
        return granted < k;
    };
    if (largest_first) {
        for (auto it = classes.rbegin(); it != classes.rend(); ++it)
            if (!serve_class(*it)) return;
    } else {
        for (const auto& slice : classes)
            if (!serve_class(slice)) return;
    }
}

}  // namespace

ViewNeeds view_needs(PolicyId id) {
    switch (id) {
        case PolicyId::MsjLeastServersFirst:
        case PolicyId::MsjMostServersFirst:
        case PolicyId::MsjMaxWeight:
        case PolicyId::ThresholdElasticFirst:
        case PolicyId::ThresholdInelasticFirst:
            return ViewNeeds::ClassIndexed;
        case PolicyId::MgkSrpt:
            return ViewNeeds::RemainingOrdered;
        default:
            return ViewNeeds::FrontOnly;
    }
}

bool classes_by_servers(PolicyId id) {
    switch (id) {
        case PolicyId::ThresholdElasticFirst:
        case PolicyId::ThresholdInelasticFirst:
            return false;
        default:
            return true;
    }
}

void allocate(const ModelSpec& model, const PolicyView& view, ServiceAllocation& out) {
    out.clear();
    switch (model.policy) {
        case PolicyId::HetMgkFcfs:
            allocate_het(model, view.front, out);
            break;
        case PolicyId::Lps:
            allocate_lps(view.front, out);
            break;
        case PolicyId::ThresholdFcfs:
            threshold_walk(model.k, 0, view.front, out);
            break;
        case PolicyId::MsjServerFilling:
        case PolicyId::MsjDivisorFilling:
            allocate_msj_pack(model, view.front, out);
            break;
        case PolicyId::MsjFcfs:
            allocate_msj_fcfs(model.k, view.front, out);
            break;
        case PolicyId::MsjLeastServersFirst:
            allocate_msj_priority(model.k, view.classes, false, out);
            break;
        case PolicyId::MsjMostServersFirst:
            allocate_msj_priority(model.k, view.classes, true, out);
            break;
        case PolicyId::MsjMaxWeight:
            allocate_maxweight(model.k, view.classes, out);
            break;
        case PolicyId::MgkSrpt:
            allocate_srpt(model.k, view.by_remaining, out);
            break;
        case PolicyId::ThresholdElasticFirst:
            allocate_threshold_priority(model.k, view.classes, true, out);
            break;
        case PolicyId::ThresholdInelasticFirst:
            allocate_threshold_priority(model.k, view.classes, false, out);
            break;
    }
}

}  // namespace wcfs
