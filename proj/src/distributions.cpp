#include "wcfs/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wcfs/errors.hpp"

namespace wcfs {

namespace {

constexpr double kProbTol = 1e-12;

void validate_scalar(const ScalarDist& dist) {
    if (const auto* e = std::get_if<Exponential>(&dist)) {
        if (!(e->rate > 0.0)) throw std::invalid_argument("exponential rate must be positive");
    } else if (const auto* h = std::get_if<Hyperexponential>(&dist)) {
        if (h->branches.empty()) throw std::invalid_argument("hyperexponential needs branches");
        double total = 0.0;
        for (const auto& b : h->branches) {
            if (!(b.prob > 0.0)) throw std::invalid_argument("branch probability must be positive");
            if (!(b.rate > 0.0)) throw std::invalid_argument("branch rate must be positive");
            total += b.prob;
        }
        if (std::abs(total - 1.0) > kProbTol)
            throw std::invalid_argument("branch probabilities must sum to 1");
    } else if (const auto* d = std::get_if<Deterministic>(&dist)) {
        if (!(d->value > 0.0)) throw std::invalid_argument("deterministic value must be positive");
    } else {
        const auto& p = std::get<Pareto>(dist);
        if (!(p.alpha > 1.0)) throw std::invalid_argument("pareto alpha must exceed 1");
        if (!(p.x_min > 0.0)) throw std::invalid_argument("pareto x_min must be positive");
    }
}

}  // namespace

void validate(const SizeClassDistribution& dist) {
    if (const auto* j = std::get_if<JointDiscrete>(&dist)) {
        if (j->atoms.empty()) throw std::invalid_argument("joint distribution needs atoms");
        double total = 0.0;
        for (const auto& a : j->atoms) {
            if (!(a.prob > 0.0)) throw std::invalid_argument("atom probability must be positive");
            if (a.cls.servers < 0 || a.cls.threshold < 0)
                throw std::invalid_argument("class attributes must be non-negative");
            validate_scalar(a.size);
            total += a.prob;
        }
        if (std::abs(total - 1.0) > kProbTol)
            throw std::invalid_argument("atom probabilities must sum to 1");
    } else if (const auto* e = std::get_if<Exponential>(&dist)) {
        validate_scalar(ScalarDist{*e});
    } else if (const auto* h = std::get_if<Hyperexponential>(&dist)) {
        validate_scalar(ScalarDist{*h});
    } else if (const auto* d = std::get_if<Deterministic>(&dist)) {
        validate_scalar(ScalarDist{*d});
    } else {
        validate_scalar(ScalarDist{std::get<Pareto>(dist)});
    }
}

Moments moments(const ScalarDist& dist) {
    Moments m;
    if (const auto* e = std::get_if<Exponential>(&dist)) {
        m.mean = 1.0 / e->rate;
        m.second_moment = 2.0 / (e->rate * e->rate);
    } else if (const auto* h = std::get_if<Hyperexponential>(&dist)) {
        for (const auto& b : h->branches) {
            m.mean += b.prob / b.rate;
            m.second_moment += 2.0 * b.prob / (b.rate * b.rate);
        }
    } else if (const auto* d = std::get_if<Deterministic>(&dist)) {
        m.mean = d->value;
        m.second_moment = d->value * d->value;
    } else {
        const auto& p = std::get<Pareto>(dist);
        if (p.alpha <= 2.0)
            throw InfiniteMoment("pareto second moment diverges for alpha <= 2");
        m.mean = p.alpha * p.x_min / (p.alpha - 1.0);
        m.second_moment = p.alpha * p.x_min * p.x_min / (p.alpha - 2.0);
    }
    m.excess_mean = m.second_moment / (2.0 * m.mean);
    return m;
}

Moments moments(const SizeClassDistribution& dist) {
    if (const auto* j = std::get_if<JointDiscrete>(&dist)) {
        Moments m;
        for (const auto& a : j->atoms) {
            Moments am = moments(a.size);
            m.mean += a.prob * am.mean;
            m.second_moment += a.prob * am.second_moment;
        }
        m.excess_mean = m.second_moment / (2.0 * m.mean);
        return m;
    }
    if (const auto* e = std::get_if<Exponential>(&dist)) return moments(ScalarDist{*e});
    if (const auto* h = std::get_if<Hyperexponential>(&dist)) return moments(ScalarDist{*h});
    if (const auto* d = std::get_if<Deterministic>(&dist)) return moments(ScalarDist{*d});
    return moments(ScalarDist{std::get<Pareto>(dist)});
}

double rem_sup(const ScalarDist& dist) {
    if (const auto* e = std::get_if<Exponential>(&dist)) {
        return 1.0 / e->rate;  // memoryless: remaining size is Exp(rate) at any age
    }
    if (const auto* h = std::get_if<Hyperexponential>(&dist)) {
        // Conditioning on survival shifts weight toward the slowest branch,
        // so the expected remainder climbs toward that branch's mean.
        double min_rate = std::numeric_limits<double>::infinity();
        for (const auto& b : h->branches) min_rate = std::min(min_rate, b.rate);
        return 1.0 / min_rate;
    }
    if (const auto* d = std::get_if<Deterministic>(&dist)) {
        return d->value;  // worst case is a fresh job
    }
    return std::numeric_limits<double>::infinity();  // Pareto: E[X - a | X > a] grows with a
}

double rem_sup(const SizeClassDistribution& dist) {
    if (const auto* j = std::get_if<JointDiscrete>(&dist)) {
        // The supremum over (class, age) decomposes over classes.
        double worst = 0.0;
        for (const auto& a : j->atoms) worst = std::max(worst, rem_sup(a.size));
        return worst;
    }
    if (const auto* e = std::get_if<Exponential>(&dist)) return rem_sup(ScalarDist{*e});
    if (const auto* h = std::get_if<Hyperexponential>(&dist)) return rem_sup(ScalarDist{*h});
    if (const auto* d = std::get_if<Deterministic>(&dist)) return rem_sup(ScalarDist{*d});
    return rem_sup(ScalarDist{std::get<Pareto>(dist)});
}

double sample(const ScalarDist& dist, RngStream& rng) {
    if (const auto* e = std::get_if<Exponential>(&dist)) {
        return rng.next_exponential(e->rate);
    }
    if (const auto* h = std::get_if<Hyperexponential>(&dist)) {
        double u = rng.next_double();
        double acc = 0.0;
        for (const auto& b : h->branches) {
            acc += b.prob;
            if (u <= acc) return rng.next_exponential(b.rate);
        }
        return rng.next_exponential(h->branches.back().rate);  // u in rounding slack
    }
    if (const auto* d = std::get_if<Deterministic>(&dist)) {
        return d->value;
    }
    const auto& p = std::get<Pareto>(dist);
    return p.x_min * std::pow(rng.next_double(), -1.0 / p.alpha);
}

std::pair<double, JobClass> sample(const SizeClassDistribution& dist, RngStream& rng) {
    if (const auto* j = std::get_if<JointDiscrete>(&dist)) {
        double u = rng.next_double();
        double acc = 0.0;
        for (const auto& a : j->atoms) {
            acc += a.prob;
            if (u <= acc) return {sample(a.size, rng), a.cls};
        }
        const auto& last = j->atoms.back();
        return {sample(last.size, rng), last.cls};
    }
    if (const auto* e = std::get_if<Exponential>(&dist)) return {sample(ScalarDist{*e}, rng), {}};
    if (const auto* h = std::get_if<Hyperexponential>(&dist))
        return {sample(ScalarDist{*h}, rng), {}};
    if (const auto* d = std::get_if<Deterministic>(&dist))
        return {sample(ScalarDist{*d}, rng), {}};
    return {sample(ScalarDist{std::get<Pareto>(dist)}, rng), {}};
}

ScalarDist scaled(const ScalarDist& dist, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    if (const auto* e = std::get_if<Exponential>(&dist)) {
        return Exponential{e->rate / factor};
    }
    if (const auto* h = std::get_if<Hyperexponential>(&dist)) {
        Hyperexponential out = *h;
        for (auto& b : out.branches) b.rate /= factor;
        return out;
    }
    if (const auto* d = std::get_if<Deterministic>(&dist)) {
        return Deterministic{d->value * factor};
    }
    const auto& p = std::get<Pareto>(dist);
    return Pareto{p.alpha, p.x_min * factor};
}

JointDiscrete msj_joint(int k, const std::vector<MsjAtom>& atoms) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    JointDiscrete out;
    out.atoms.reserve(atoms.size());
    for (const auto& a : atoms) {
        if (a.servers < 1) throw std::invalid_argument("server requirement must be positive");
        Atom atom;
        atom.prob = a.prob;
        atom.cls.servers = a.servers;
        atom.size = scaled(a.duration, static_cast<double>(a.servers) / k);
        out.atoms.push_back(std::move(atom));
    }
    validate(SizeClassDistribution{out});
    return out;
}

}  // namespace wcfs
