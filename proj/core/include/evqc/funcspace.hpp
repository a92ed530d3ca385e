#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evqc {

// Largest argument width accepted for a truth table (2^30 bits = 128 MiB).
inline constexpr unsigned kMaxFunctionBits = 30;

// Exhaustive class enumeration stops here: n = 4 already means 2^16 tables.
inline constexpr unsigned kMaxEnumerationBits = 4;

/// A Boolean function f : Z_N -> Z_2 with N = 2^n, stored as a packed truth
/// table. Entry j is f(j). Immutable once built.
class BoolFunc {
public:
    /// The all-zero function on n bits.
    explicit BoolFunc(unsigned n);

    static BoolFunc constant(unsigned n, bool value);
    static BoolFunc from_values(unsigned n, std::span<const int> values);
    static BoolFunc from_ones(unsigned n, std::span<const std::size_t> ones);

    template <typename Pred>
    static BoolFunc from_predicate(unsigned n, Pred &&pred) {
        BoolFunc f(n);
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (pred(j)) {
                f.set(j, true);
            }
        }
        return f;
    }

    unsigned bits() const noexcept { return n_; }
    std::size_t size() const noexcept { return std::size_t{1} << n_; }

    bool operator()(std::size_t j) const noexcept {
        return (words_[j >> 6] >> (j & 63)) & 1U;
    }
    /// Bounds-checked evaluation.
    bool at(std::size_t j) const;

    /// (-1)^f(j)
    int sign(std::size_t j) const noexcept { return (*this)(j) ? -1 : 1; }

    std::size_t count_ones() const noexcept;
    std::vector<std::size_t> ones() const;

    friend bool operator==(const BoolFunc &, const BoolFunc &) = default;

private:
    void set(std::size_t j, bool v) noexcept;
    friend BoolFunc complement(const BoolFunc &f);
    friend BoolFunc permute(const BoolFunc &f, std::size_t l, std::size_t m);
    friend BoolFunc lift(const BoolFunc &f);

    unsigned n_;
    std::vector<std::uint64_t> words_;
};

enum class FunctionClass { Constant, BalancedW, ClassCN, Other };

std::string_view to_string(FunctionClass c) noexcept;
std::optional<FunctionClass> parse_function_class(std::string_view s) noexcept;

/// Number of differing bits between the n-bit representations of j and k.
unsigned hamming(std::uint64_t j, std::uint64_t k, unsigned n);

/// Half the difference between the number of ones and the number of zeros.
/// Always an integer because N is even for n >= 1; for n = 0 (N = 1) the
/// value would be +-1/2, so n = 0 functions are rejected on construction.
std::int64_t imbalance(const BoolFunc &f) noexcept;

BoolFunc complement(const BoolFunc &f);

/// Swap the values at arguments l and m.
BoolFunc permute(const BoolFunc &f, std::size_t l, std::size_t m);

/// Extend f on N_f arguments to 2 N_f arguments, zero on the upper half.
BoolFunc lift(const BoolFunc &f);

bool is_constant(const BoolFunc &f) noexcept;
bool is_balanced(const BoolFunc &f) noexcept;

/// Membership in C_N: f or its complement has exactly N/4 ones and no two
/// ones sit at Hamming distance 1. Throws ClassUndefined for n < 2.
bool is_in_cn(const BoolFunc &f);

/// Priority order Constant > BalancedW > ClassCN > Other. For n < 2 the
/// ClassCN test is skipped rather than raising.
FunctionClass classify(const BoolFunc &f);

/// Lazily walks every member of a class in lexicographic truth-table order
/// (f(0) is the most significant character of the comparison).
class ClassEnumerator {
public:
    ClassEnumerator(unsigned n, FunctionClass cls);

    std::optional<BoolFunc> next();

private:
    unsigned n_;
    FunctionClass cls_;
    std::uint64_t cursor_ = 0;
    std::uint64_t end_ = 0;
};

/// Throws Infeasible when the class needs exhaustive filtering and n > 4.
ClassEnumerator enumerate_class(unsigned n, FunctionClass cls);
std::vector<BoolFunc> collect_class(unsigned n, FunctionClass cls);

/// Random C_N member: N/4 arguments drawn without replacement from the
/// even-parity half of Z_N. Deterministic for a fixed seed.
BoolFunc sample_cn(unsigned n, std::uint64_t seed);

/// The N/4 smallest even-parity arguments set to one.
BoolFunc canonical_cn(unsigned n);

/// One on the upper half of Z_N, zero on the lower half.
BoolFunc canonical_balanced(unsigned n);

// Text format:
//   n=<int>
//   <2^n characters of 0/1, argument 0 first>   or   0x<hex, bit j = f(j)>
BoolFunc parse_truth_table(std::string_view text);
std::string format_truth_table(const BoolFunc &f);
std::string to_hex(const BoolFunc &f);
BoolFunc from_hex(unsigned n, std::string_view hex);

} // namespace evqc
