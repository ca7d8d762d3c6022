#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace drlsched {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; the mixing step used for every derived seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from a base seed and a sequence of tags,
/// e.g. derive_seed(train_seed, {iteration, jobset, episode}).
/// Results do not depend on thread count or call order.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
double uniform01(Rng& rng);

/// Uniform integer in [lo, hi] (inclusive), unbiased.
int uniform_int(Rng& rng, int lo, int hi);

/// Stream tags used with derive_seed.
namespace stream {
inline constexpr std::uint64_t kTrainJobset = 0x7472616e;   // "tran"
inline constexpr std::uint64_t kEvalJobset = 0x6576616c;    // "eval"
inline constexpr std::uint64_t kRollout = 0x726f6c6c;       // "roll"
inline constexpr std::uint64_t kInit = 0x696e6974;          // "init"
inline constexpr std::uint64_t kGenerate = 0x67656e65;      // "gene"
inline constexpr std::uint64_t kHeuristic = 0x68657572;     // "heur"
}  // namespace stream

}  // namespace drlsched
