#include "wcfs/packing.hpp"

#include <algorithm>
#include <cstddef>
#include <string>

#include "wcfs/errors.hpp"

namespace wcfs {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int largest_prime_factor(int k) {
    int largest = 1;
    for (int f = 2; f * f <= k; ++f) {
        while (k % f == 0) {
            largest = f;
            k /= f;
        }
    }
    return k > 1 ? std::max(largest, k) : largest;
}

// Candidate tracked through the DivisorFilling recursion: `index` points
// back into the original front, `v` is the requirement at the current
// (possibly server-combined) recursion level.
struct RecJob {
    int index;
    int v;
};

// Descending requirement, then arrival order.
bool rec_order(const RecJob& a, const RecJob& b) {
    if (a.v != b.v) return a.v > b.v;
    return a.index < b.index;
}

// Appends the original indices of the jobs DivisorFilling serves for a
// k-server subproblem. `jobs` is in arrival order.
void divisor_fill_rec(int k, const std::vector<RecJob>& jobs, std::vector<int>& chosen) {
    if (k < 1 || jobs.empty()) return;

    int ones = 0;
    for (const auto& j : jobs) ones += (j.v == 1);

    if (6 * ones >= k) {
        // Plenty of single-server jobs: admit the descending-order prefix
        // that fits, then pad with single-server jobs in arrival order.
        std::vector<RecJob> sorted(jobs);
        std::sort(sorted.begin(), sorted.end(), rec_order);
        int used = 0;
        std::size_t prefix = 0;
        while (prefix < sorted.size() && used + sorted[prefix].v <= k) {
            used += sorted[prefix].v;
            chosen.push_back(sorted[prefix].index);
            ++prefix;
        }
        if (used < k) {
            std::size_t chosen_start = chosen.size() - prefix;
            for (const auto& j : jobs) {
                if (used >= k) break;
                if (j.v != 1) continue;
                bool already = false;
                for (std::size_t i = chosen_start; i < chosen.size(); ++i)
                    if (chosen[i] == j.index) already = true;
                if (!already) {
                    chosen.push_back(j.index);
                    ++used;
                }
            }
        }
        return;
    }

    int p = largest_prime_factor(k);
    if (p <= 3) {
        // k = 2^a 3^b. Serve only even requirements or only odd ones,
        // whichever group can cover more servers, by combining servers in
        // pairs or triples and recursing on the scaled subproblem.
        std::vector<RecJob> evens;
        std::vector<RecJob> odds;
        for (const auto& j : jobs) {
            if (j.v % 2 == 0)
                evens.push_back({j.index, j.v / 2});
            else if (j.v > 1)
                odds.push_back({j.index, j.v / 3});
        }
        if (2 * static_cast<long long>(evens.size()) >=
            3 * static_cast<long long>(odds.size())) {
            divisor_fill_rec(k / 2, evens, chosen);
        } else {
            divisor_fill_rec(k / 3, odds, chosen);
        }
        return;
    }

    // k has a large prime factor p. Prefer requirements that are multiples
    // of p; otherwise repeatedly carve subproblems of k/p servers out of the
    // remaining multi-server jobs.
    std::vector<RecJob> multiples;
    std::vector<RecJob> rest;
    for (const auto& j : jobs) {
        if (j.v % p == 0)
            multiples.push_back({j.index, j.v / p});
        else if (j.v > 1)
            rest.push_back(j);
    }
    int sub = k / p;
    if (static_cast<int>(multiples.size()) >= sub) {
        divisor_fill_rec(sub, multiples, chosen);
        return;
    }
    for (int round = 0; round < p && static_cast<int>(rest.size()) >= sub; ++round) {
        std::vector<RecJob> window(rest.begin(), rest.begin() + sub);
        std::size_t before = chosen.size();
        divisor_fill_rec(sub, window, chosen);
        // Remove exactly the jobs the subproblem served and keep the rest
        // available for later rounds.
        std::vector<RecJob> remaining;
        remaining.reserve(rest.size());
        for (const auto& j : rest) {
            bool taken = false;
            for (std::size_t i = before; i < chosen.size(); ++i)
                if (chosen[i] == j.index) taken = true;
            if (!taken) remaining.push_back(j);
        }
        rest.swap(remaining);
    }
}

}  // namespace

int server_filling_select(int k, std::span<const PackJob> front,
                          std::vector<PackJob>& selected) {
    selected.clear();
    if (!is_power_of_two(k)) throw InvalidRequirement("k must be a power of 2");
    for (const auto& job : front)
        if (!is_power_of_two(job.v) || job.v > k)
            throw InvalidRequirement("requirement " + std::to_string(job.v) +
                                     " must be a power of 2 at most k");
    if (front.empty()) return 0;

    // Minimal arrival prefix covering k servers, or everything if short.
    std::size_t m = 0;
    long long total = 0;
    while (m < front.size() && total < k) total += front[m++].v;

    thread_local std::vector<int> order;
    order.clear();
    for (std::size_t i = 0; i < m; ++i) order.push_back(static_cast<int>(i));
    std::sort(order.begin(), order.end(), [&front](int a, int b) {
        if (front[a].v != front[b].v) return front[a].v > front[b].v;
        return a < b;
    });

    thread_local std::vector<int> picked;
    picked.clear();
    int used = 0;
    for (int idx : order) {
        if (used + front[idx].v <= k) {
            used += front[idx].v;
            picked.push_back(idx);
        }
    }
    std::sort(picked.begin(), picked.end());
    for (int idx : picked) selected.push_back(front[idx]);
    return used;
}

int divisor_filling_select(int k, std::span<const PackJob> front,
                           std::vector<PackJob>& selected) {
    selected.clear();
    if (k < 1) throw InvalidRequirement("k must be positive");
    for (const auto& job : front)
        if (job.v < 1 || k % job.v != 0)
            throw InvalidRequirement("requirement " + std::to_string(job.v) +
                                     " must divide k");
    if (front.empty()) return 0;

    std::vector<RecJob> jobs;
    jobs.reserve(front.size());
    for (std::size_t i = 0; i < front.size(); ++i)
        jobs.push_back({static_cast<int>(i), front[i].v});

    std::vector<int> chosen;
    divisor_fill_rec(k, jobs, chosen);

    std::vector<char> taken(front.size(), 0);
    int used = 0;
    for (int idx : chosen) {
        taken[idx] = 1;
        used += front[idx].v;
    }
    // The recursion can strand capacity when fewer than k jobs are present
    // (its conservation guarantee needs a full front). Admit whatever still
    // fits, in arrival order, so available work is never ignored outright.
    for (std::size_t i = 0; i < front.size(); ++i) {
        if (!taken[i] && used + front[i].v <= k) {
            taken[i] = 1;
            used += front[i].v;
        }
    }
    for (std::size_t i = 0; i < front.size(); ++i)
        if (taken[i]) selected.push_back(front[i]);
    return used;
}

int descending_prefix_gap(int k, std::span<const int> descending_reqs) {
    int used = 0;
    for (int v : descending_reqs) {
        if (used + v > k) break;
        used += v;
    }
    return k - used;
}

MaxWeightResult maxweight_select(int k, const std::map<int, long long>& class_counts) {
    if (k > 32) throw BudgetExceeded("maxweight solve limited to k <= 32");
    if (k < 1) throw InvalidRequirement("k must be positive");

    struct Cls {
        int v;
        long long count;
    };
    std::vector<Cls> classes;
    for (const auto& [v, count] : class_counts) {
        if (v < 1) throw InvalidRequirement("requirement must be positive");
        if (count > 0) classes.push_back({v, count});
    }
    // Descending v so reconstruction realizes the documented tie order.
    std::sort(classes.begin(), classes.end(),
              [](const Cls& a, const Cls& b) { return a.v > b.v; });

    // best[i][b]: max weight achievable with classes i.. and b servers.
    std::size_t nc = classes.size();
    std::vector<std::vector<long long>> best(nc + 1, std::vector<long long>(k + 1, 0));
    for (std::size_t i = nc; i-- > 0;) {
        const auto& c = classes[i];
        for (int b = 0; b <= k; ++b) {
            long long top = best[i + 1][b];
            long long z_max = std::min<long long>(c.count, b / c.v);
            for (long long z = 1; z <= z_max; ++z)
                top = std::max(top, c.count * z + best[i + 1][b - static_cast<int>(z) * c.v]);
            best[i][b] = top;
        }
    }

    MaxWeightResult result;
    int budget = k;
    for (std::size_t i = 0; i < nc; ++i) {
        const auto& c = classes[i];
        long long z_max = std::min<long long>(c.count, budget / c.v);
        for (long long z = z_max; z >= 0; --z) {
            if (c.count * z + best[i + 1][budget - static_cast<int>(z) * c.v] == best[i][budget]) {
                if (z > 0) result.z[c.v] = static_cast<int>(z);
                result.weight += c.count * z;
                budget -= static_cast<int>(z) * c.v;
                break;
            }
        }
    }
    result.servers = k - budget;
    return result;
}

}  // namespace wcfs
