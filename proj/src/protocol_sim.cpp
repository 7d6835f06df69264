#include "steerdist/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "steerdist/distillation.hpp"
#include "steerdist/errors.hpp"
#include "steerdist/states.hpp"

namespace steerdist {

double success_probability(double theta, double kappa, int n_copies) {
    DistillationConfig{theta, n_copies, kappa}.check();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return n_copy_success_probability(kappa * kappa * c * c + s * s, n_copies);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

namespace {

struct BlockTally {
    std::uint64_t successes = 0;
    std::map<std::string, std::uint64_t> histogram;
};

BlockTally run_block(std::uint64_t seed, std::uint64_t block, std::uint64_t count, int n_copies,
                     double p_succ) {
    std::mt19937_64 rng(splitmix64(seed + block));
    BlockTally tally;
    std::string bits(static_cast<std::size_t>(n_copies), '0');
    for (std::uint64_t t = 0; t < count; ++t) {
        bool any_success = false;
        for (int n = 0; n + 1 < n_copies; ++n) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const bool success = u < p_succ;
            bits[n] = success ? '0' : '1';
            any_success = any_success || success;
        }
        // Last copy is never measured: flagged for discard iff an earlier copy succeeded.
        bits[n_copies - 1] = any_success ? '1' : '0';
        tally.successes += any_success ? 1 : 0;
        ++tally.histogram[bits];
    }
    return tally;
}

}  // namespace

SimOutcome run_protocol(const SimConfig& config) {
    DistillationConfig{config.theta, config.n_copies, config.kappa, config.scenario}.check();
    if (config.trials < 1) {
        throw Error(ErrorCode::TrialsOutOfRange, "trials must be >= 1");
    }

    const Assemblage input = gghz_assemblage(config.theta, config.scenario);
    const FilterOp filter = make_filter(config.kappa);
    const double c = std::cos(config.theta);
    const double s = std::sin(config.theta);
    const double p_succ = config.kappa * config.kappa * c * c + s * s;

    const std::uint64_t blocks = (config.trials + kSimBlockSize - 1) / kSimBlockSize;
    std::vector<BlockTally> tallies(blocks);
    auto block_size = [&](std::uint64_t b) {
        return std::min(kSimBlockSize, config.trials - b * kSimBlockSize);
    };

    const int threads = static_cast<int>(
        std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(config.threads, 1)), 1, blocks));
    if (threads == 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) {
            tallies[b] = run_block(config.seed, b, block_size(b), config.n_copies, p_succ);
        }
    } else {
        std::vector<std::jthread> workers;
        for (int w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                for (std::uint64_t b = w; b < blocks; b += threads) {
                    tallies[b] = run_block(config.seed, b, block_size(b), config.n_copies, p_succ);
                }
            });
        }
    }

    std::uint64_t successes = 0;
    std::map<std::string, std::uint64_t> histogram;
    for (const auto& t : tallies) {
        successes += t.successes;
        for (const auto& [bits, count] : t.histogram) {
            histogram[bits] += count;
        }
    }

    const double weight = static_cast<double>(successes) / static_cast<double>(config.trials);
    Assemblage empirical =
        successes == 0 ? input : mix(weight, apply_filter(input, filter).filtered, input);
    return SimOutcome{config, successes, std::move(histogram), std::move(empirical)};
}

}  // namespace steerdist
