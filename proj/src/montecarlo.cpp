#include "tontine/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "tontine/parallel.hpp"

namespace tontine {

namespace {

// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kSampleChunk = 8192;

// Running mean / M2 for the unconditional and conditional payouts of one
// chunk; merged with Chan's pairwise update.
struct Moments {
    std::uint64_t count{0};
    Eigen::VectorXd mean;
    Eigen::VectorXd m2;

    explicit Moments(Index width) : mean(Eigen::VectorXd::Zero(width)), m2(Eigen::VectorXd::Zero(width)) {}

    void add(const Eigen::VectorXd& x) {
        ++count;
        const Eigen::VectorXd delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta.cwiseProduct(x - mean);
    }

    void merge(const Moments& other) {
        if (other.count == 0) {
            return;
        }
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double nt = na + nb;
        const Eigen::VectorXd delta = other.mean - mean;
        mean += delta * (nb / nt);
        m2 += other.m2 + delta.cwiseProduct(delta) * (na * nb / nt);
        count += other.count;
    }

    Eigen::VectorXd std_error() const {
        if (count < 2) {
            return Eigen::VectorXd::Zero(mean.size());
        }
        const double n = static_cast<double>(count);
        return (m2 / (n - 1.0)).cwiseSqrt() / std::sqrt(n);
    }
};

struct ChunkResult {
    Moments all;
    Moments some_survive;
};

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index) : key_(mix64(seed ^ mix64(index))) {}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0xd1b54a32d192ed03ULL);
}

double CounterRng::next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

SurvivalSampler::SurvivalSampler(const SurvivalModel<double>& model) : n_(model.size()) {
    if (const auto* ind = model.as_independent()) {
        survival_probs_ = ind->survival_probs;
        return;
    }
    if (n_ > kMaxJointTableSampling) {
        throw std::invalid_argument("joint-table sampling supports at most 24 participants");
    }
    const auto& probs = model.as_joint_table()->probabilities;
    const std::size_t k = probs.size();
    alias_prob_.assign(k, 0.0);
    alias_.assign(k, 0);

    double total = 0.0;
    for (double p : probs) {
        total += p;
    }
    std::vector<double> scaled(k);
    std::vector<std::uint32_t> small;
    std::vector<std::uint32_t> large;
    for (std::size_t i = 0; i < k; ++i) {
        scaled[i] = probs[i] / total * static_cast<double>(k);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const auto s = small.back();
        small.pop_back();
        const auto l = large.back();
        alias_prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (auto i : large) {
        alias_prob_[i] = 1.0;
        alias_[i] = i;
    }
    for (auto i : small) {
        alias_prob_[i] = 1.0;
        alias_[i] = i;
    }
}

bool SurvivalSampler::draw_into(std::uint64_t seed, std::uint64_t sample_index, Eigen::VectorXd& alive) const {
    CounterRng rng(seed, sample_index);
    alive.resize(n_);
    bool anyone = false;
    if (alias_.empty()) {
        for (Index j = 0; j < n_; ++j) {
            const bool survives = rng.next_uniform() < survival_probs_(j);
            alive(j) = survives ? 1.0 : 0.0;
            anyone = anyone || survives;
        }
        return anyone;
    }
    const double u = rng.next_uniform() * static_cast<double>(alias_.size());
    auto column = static_cast<std::size_t>(u);
    if (column >= alias_.size()) {
        column = alias_.size() - 1;
    }
    const double frac = u - static_cast<double>(column);
    const std::uint64_t idx = frac < alias_prob_[column] ? column : alias_[column];
    const Scenario s{idx};
    for (Index j = 0; j < n_; ++j) {
        alive(j) = s.survives(j) ? 1.0 : 0.0;
    }
    return idx != 0;
}

Eigen::VectorXd SurvivalSampler::draw(std::uint64_t seed, std::uint64_t sample_index) const {
    Eigen::VectorXd alive;
    draw_into(seed, sample_index, alive);
    return alive;
}

McEstimate simulate(const Pool<double>& pool, const ShareAllocation<double>& f, const SurvivalModel<double>& model,
                    std::uint64_t n_samples, std::uint64_t seed, unsigned workers) {
    if (n_samples < kMinMonteCarloSamples) {
        throw std::invalid_argument("simulate needs at least 1000 samples");
    }
    if (f.size() != pool.size() || model.size() != pool.size()) {
        throw std::invalid_argument("pool, shares and survival model differ in size");
    }
    const Index n = pool.size();
    const SurvivalSampler sampler(model);

    const std::size_t chunks = static_cast<std::size_t>((n_samples + kSampleChunk - 1) / kSampleChunk);
    std::vector<ChunkResult> partial(chunks, ChunkResult{Moments(n + 1), Moments(n + 1)});
    for_each_chunk(chunks, workers, [&](std::size_t c) {
        ChunkResult& out = partial[c];
        Eigen::VectorXd alive(n);
        const std::uint64_t lo = c * kSampleChunk;
        const std::uint64_t hi = std::min(n_samples, lo + kSampleChunk);
        for (std::uint64_t k = lo; k < hi; ++k) {
            const bool anyone = sampler.draw_into(seed, k, alive);
            const Eigen::VectorXd w = payouts_for_survivors(pool, f, alive).amounts;
            out.all.add(w);
            if (anyone) {
                out.some_survive.add(w);
            }
        }
    });

    Moments all(n + 1);
    Moments some(n + 1);
    for (const auto& p : partial) {
        all.merge(p.all);
        some.merge(p.some_survive);
    }

    McEstimate est;
    est.mean = all.mean;
    est.std_error = all.std_error();
    est.samples_used = all.count;
    est.samples_rejected = all.count - some.count;
    est.seed = seed;
    est.prob_all_dead = static_cast<double>(est.samples_rejected) / static_cast<double>(est.samples_used);
    if (some.count > 0) {
        est.conditional_mean = some.mean;
        est.conditional_std_error = some.std_error();
    } else {
        est.warnings.emplace_back("every sample was all-dead; conditional estimates are undefined");
    }
    if (est.prob_all_dead > 0.2) {
        est.warnings.emplace_back("estimated Pr[all dead] exceeds 0.2; conditional estimates discard many samples");
    }
    return est;
}

}  // namespace tontine
