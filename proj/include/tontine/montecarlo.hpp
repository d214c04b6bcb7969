#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tontine/payout.hpp"

namespace tontine {

/// Seeded Monte Carlo estimate of the expected payouts.
///
/// Unconditional statistics use every sample; conditional ones (given at
/// least one survivor) use the samples_used - samples_rejected draws that
/// were not all-dead. Identical inputs reproduce bit-identical output
/// whatever the number of workers.
struct McEstimate {
    Eigen::VectorXd mean;       // E[W_i], i = 1..n+1
    Eigen::VectorXd std_error;  // sample std / sqrt(samples_used)
    std::uint64_t samples_used{0};
    std::uint64_t samples_rejected{0};  // all-dead draws
    std::uint64_t seed{0};
    double prob_all_dead{0.0};  // estimated
    std::optional<Eigen::VectorXd> conditional_mean;
    std::optional<Eigen::VectorXd> conditional_std_error;
    std::vector<std::string> warnings;
};

/// Counter-based generator: the k-th uniform of sample `index` is a pure
/// function of (seed, index, k), so any sample can be regenerated alone.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform();

private:
    std::uint64_t key_;
    std::uint64_t counter_{0};
};

/// Draws survival indicators (length n, entries 0 or 1) for one sample.
class SurvivalSampler {
public:
    /// Independent models work for any n; joint tables for n <= 24.
    explicit SurvivalSampler(const SurvivalModel<double>& model);

    Index size() const { return n_; }
    Eigen::VectorXd draw(std::uint64_t seed, std::uint64_t sample_index) const;
    /// Same as draw() into a preallocated vector; returns true if anyone survived.
    bool draw_into(std::uint64_t seed, std::uint64_t sample_index, Eigen::VectorXd& alive) const;

private:
    Index n_{0};
    Eigen::VectorXd survival_probs_;  // independent case
    // Vose alias table over scenario indices (joint-table case)
    std::vector<double> alias_prob_;
    std::vector<std::uint32_t> alias_;
};

inline constexpr Index kMaxJointTableSampling = 24;
inline constexpr std::uint64_t kMinMonteCarloSamples = 1000;

/// Throws std::invalid_argument for fewer than 1000 samples.
McEstimate simulate(const Pool<double>& pool, const ShareAllocation<double>& f, const SurvivalModel<double>& model,
                    std::uint64_t n_samples, std::uint64_t seed, unsigned workers = 0);

}  // namespace tontine
