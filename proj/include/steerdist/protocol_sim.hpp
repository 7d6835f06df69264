#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "steerdist/assemblage.hpp"

namespace steerdist {

/// Closed-form N-copy success probability for GGHZ(theta):
/// 1 - (1 - p)^(N-1) with p = kappa^2 cos^2 theta + sin^2 theta.
double success_probability(double theta, double kappa, int n_copies);

struct SimConfig {
    double theta = 0.0;
    double kappa = 1.0;
    int n_copies = 2;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    int threads = 1;
    Scenario scenario = Scenario::OneSided;
};

struct SimOutcome {
    SimConfig config;
    std::uint64_t success_count = 0;
    /// Bit string c_1..c_N (character n-1 is c_n) -> number of trials.
    std::map<std::string, std::uint64_t> bitstring_histogram;
    /// Trial-weighted mixture of the retained assemblages.
    Assemblage empirical_assemblage;

    double success_fraction() const {
        return static_cast<double>(success_count) / static_cast<double>(config.trials);
    }
};

/// Trials are split into fixed blocks of kSimBlockSize; block k draws from
/// std::mt19937_64 seeded with splitmix64(seed + k). Uniforms are the top
/// 53 bits of a draw scaled by 2^-53, and copy n is filtered successfully
/// (c_n = 0) iff its uniform is < p_succ. The result is therefore
/// bit-identical for any thread count.
inline constexpr std::uint64_t kSimBlockSize = 1u << 16;

SimOutcome run_protocol(const SimConfig& config);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace steerdist
