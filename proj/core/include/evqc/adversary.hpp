#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "evqc/funcspace.hpp"

namespace evqc {

/// What a classical algorithm has learned: the arguments it queried and the
/// bits the oracle returned. The adversary below always answers 0.
struct QueryTranscript {
    unsigned n = 0;
    std::vector<std::size_t> queried;
    std::map<std::size_t, bool> answers;

    static QueryTranscript all_zero(unsigned n, std::span<const std::size_t> queried);

    bool consistent_with(const BoolFunc &f) const;
};

/// A C_N member that is zero on every queried argument. The smallest
/// unqueried argument j0 splits the unqueried set by the parity of d(j0, k);
/// the larger half has no two points at distance 1 and at least N/4 points
/// whenever |queried| <= N/2. Throws NoWitness above that size.
BoolFunc cn_witness(unsigned n, std::span<const std::size_t> queried);

/// 2^(n-1) + 1.
std::uint64_t min_queries(unsigned n);

struct AdversaryFailure {
    std::size_t trial = 0;
    std::vector<std::size_t> queried;
    std::string reason;
};

struct AdversaryReport {
    unsigned n = 0;
    std::size_t trials = 0;
    bool exhaustive = false;
    std::size_t exhaustive_sets = 0;
    std::vector<AdversaryFailure> failures;

    bool passed() const noexcept { return failures.empty(); }
};

/// Random query sets of size <= N/2 (and, for n <= 3, every set of size
/// exactly N/2): after all-zero answers both "constant zero" and "in C_N"
/// must remain possible.
AdversaryReport verify_adversary(unsigned n, std::size_t trials, std::uint64_t seed);

} // namespace evqc
