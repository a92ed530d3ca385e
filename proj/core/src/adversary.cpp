#include "evqc/adversary.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

#include "evqc/error.hpp"

namespace evqc {

namespace {

constexpr unsigned kMaxAdversaryBits = 20;

void check_n(unsigned n) {
    if (n < 2) {
        throw ClassUndefined("the C_N adversary needs n >= 2");
    }
    if (n > kMaxAdversaryBits) {
        throw Infeasible("adversary is limited to n <= " + std::to_string(kMaxAdversaryBits));
    }
}

std::vector<std::size_t> normalized(unsigned n, std::span<const std::size_t> queried) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::size_t> q(queried.begin(), queried.end());
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    if (!q.empty() && q.back() >= size) {
        throw IndexOutOfRange("queried argument " + std::to_string(q.back()) + " outside Z_" +
                              std::to_string(size));
    }
    return q;
}

std::string check_witness(unsigned n, const std::vector<std::size_t> &queried) {
    const auto transcript = QueryTranscript::all_zero(n, queried);
    if (!transcript.consistent_with(BoolFunc::constant(n, false))) {
        return "constant-zero inconsistent with all-zero answers";
    }
    BoolFunc witness(n);
    try {
        witness = cn_witness(n, queried);
    } catch (const Error &e) {
        return std::string("no witness: ") + e.what();
    }
    if (!is_in_cn(witness)) return "witness is not in C_N";
    if (!transcript.consistent_with(witness)) return "witness contradicts an answer";
    return {};
}

} // namespace

QueryTranscript QueryTranscript::all_zero(unsigned n, std::span<const std::size_t> queried) {
    QueryTranscript t;
    t.n = n;
    t.queried = normalized(n, queried);
    for (auto q : t.queried) t.answers[q] = false;
    return t;
}

bool QueryTranscript::consistent_with(const BoolFunc &f) const {
    if (f.bits() != n) return false;
    return std::all_of(answers.begin(), answers.end(),
                       [&](const auto &qa) { return f(qa.first) == qa.second; });
}

BoolFunc cn_witness(unsigned n, std::span<const std::size_t> queried) {
    check_n(n);
    const auto q = normalized(n, queried);
    const std::size_t size = std::size_t{1} << n;
    if (q.size() > size / 2) {
        throw NoWitness("more than N/2 = " + std::to_string(size / 2) +
                        " arguments queried; a C_N witness is not guaranteed");
    }
    std::vector<bool> checked(size, false);
    for (auto j : q) checked[j] = true;

    std::vector<std::size_t> even;
    std::vector<std::size_t> odd;
    std::size_t j0 = size;
    for (std::size_t k = 0; k < size; ++k) {
        if (checked[k]) continue;
        if (j0 == size) j0 = k;
        (std::popcount(k ^ j0) % 2 == 0 ? even : odd).push_back(k);
    }
    const auto &chosen = even.size() >= odd.size() ? even : odd;
    const std::size_t take = size / 4;
    if (chosen.size() < take) {
        throw NoWitness("larger parity class has fewer than N/4 elements");
    }
    return BoolFunc::from_ones(n, std::span(chosen.data(), take));
}

std::uint64_t min_queries(unsigned n) {
    if (n < 2) {
        throw ClassUndefined("the C_N query bound needs n >= 2");
    }
    if (n > 63) {
        throw Infeasible("n too large for a 64-bit count");
    }
    return (std::uint64_t{1} << (n - 1)) + 1;
}

AdversaryReport verify_adversary(unsigned n, std::size_t trials, std::uint64_t seed) {
    check_n(n);
    const std::size_t size = std::size_t{1} << n;
    AdversaryReport report;
    report.n = n;
    report.trials = trials;

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> all(size);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t t = 0; t < trials; ++t) {
        std::uniform_int_distribution<std::size_t> pick_size(0, size / 2);
        const std::size_t k = pick_size(rng);
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, size - 1);
            std::swap(all[i], all[pick(rng)]);
        }
        std::vector<std::size_t> queried(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(queried.begin(), queried.end());
        if (auto reason = check_witness(n, queried); !reason.empty()) {
            report.failures.push_back({t, std::move(queried), std::move(reason)});
        }
    }

    if (n <= 3) {
        report.exhaustive = true;
        // Every subset of size N/2, walked as bitmasks over Z_N.
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << size); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != size / 2) continue;
            std::vector<std::size_t> queried;
            for (std::size_t j = 0; j < size; ++j) {
                if ((mask >> j) & 1U) queried.push_back(j);
            }
            ++report.exhaustive_sets;
            if (auto reason = check_witness(n, queried); !reason.empty()) {
                report.failures.push_back({trials + report.exhaustive_sets - 1, std::move(queried),
                                           std::move(reason)});
            }
        }
    }
    return report;
}

} // namespace evqc
