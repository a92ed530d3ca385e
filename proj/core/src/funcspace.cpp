#include "evqc/funcspace.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <random>

#include "evqc/error.hpp"

namespace evqc {

namespace {

std::size_t word_count(unsigned n) {
    return ((std::size_t{1} << n) + 63) / 64;
}

void check_bits(unsigned n) {
    if (n == 0 || n > kMaxFunctionBits) {
        throw Infeasible("function width must be in [1, " + std::to_string(kMaxFunctionBits) +
                         "], got " + std::to_string(n));
    }
}

// Bits of the final word past N are kept at zero so that popcount and
// equality can work on whole words.
std::uint64_t tail_mask(unsigned n) {
    const std::size_t rem = (std::size_t{1} << n) & 63;
    return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

bool no_adjacent_ones(const BoolFunc &f) {
    const auto ones = f.ones();
    for (std::size_t a = 0; a < ones.size(); ++a) {
        for (std::size_t b = a + 1; b < ones.size(); ++b) {
            if (std::popcount(ones[a] ^ ones[b]) == 1) {
                return false;
            }
        }
    }
    return true;
}

bool satisfies_cn_conditions(const BoolFunc &f) {
    return f.count_ones() == f.size() / 4 && no_adjacent_ones(f);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

BoolFunc::BoolFunc(unsigned n) : n_(n) {
    check_bits(n);
    words_.assign(word_count(n), 0);
}

BoolFunc BoolFunc::constant(unsigned n, bool value) {
    BoolFunc f(n);
    if (value) {
        std::fill(f.words_.begin(), f.words_.end(), ~std::uint64_t{0});
        f.words_.back() &= tail_mask(n);
    }
    return f;
}

BoolFunc BoolFunc::from_values(unsigned n, std::span<const int> values) {
    BoolFunc f(n);
    if (values.size() != f.size()) {
        throw DimensionMismatch("truth table needs " + std::to_string(f.size()) + " entries, got " +
                                std::to_string(values.size()));
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (values[j] != 0 && values[j] != 1) {
            throw ParseError("truth table entries must be 0 or 1");
        }
        f.set(j, values[j] == 1);
    }
    return f;
}

BoolFunc BoolFunc::from_ones(unsigned n, std::span<const std::size_t> ones) {
    BoolFunc f(n);
    for (auto j : ones) {
        if (j >= f.size()) {
            throw IndexOutOfRange("argument " + std::to_string(j) + " outside Z_" +
                                  std::to_string(f.size()));
        }
        f.set(j, true);
    }
    return f;
}

bool BoolFunc::at(std::size_t j) const {
    if (j >= size()) {
        throw IndexOutOfRange("argument " + std::to_string(j) + " outside Z_" +
                              std::to_string(size()));
    }
    return (*this)(j);
}

std::size_t BoolFunc::count_ones() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

std::vector<std::size_t> BoolFunc::ones() const {
    std::vector<std::size_t> out;
    out.reserve(count_ones());
    for (std::size_t w = 0; w < words_.size(); ++w) {
        auto bits = words_[w];
        while (bits != 0) {
            out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

void BoolFunc::set(std::size_t j, bool v) noexcept {
    const auto mask = std::uint64_t{1} << (j & 63);
    if (v) {
        words_[j >> 6] |= mask;
    } else {
        words_[j >> 6] &= ~mask;
    }
}

std::string_view to_string(FunctionClass c) noexcept {
    switch (c) {
    case FunctionClass::Constant: return "constant";
    case FunctionClass::BalancedW: return "balanced";
    case FunctionClass::ClassCN: return "cn";
    case FunctionClass::Other: return "other";
    }
    return "other";
}

std::optional<FunctionClass> parse_function_class(std::string_view s) noexcept {
    if (s == "constant") return FunctionClass::Constant;
    if (s == "balanced") return FunctionClass::BalancedW;
    if (s == "cn") return FunctionClass::ClassCN;
    if (s == "other") return FunctionClass::Other;
    return std::nullopt;
}

unsigned hamming(std::uint64_t j, std::uint64_t k, unsigned n) {
    if (n > 63) {
        throw IndexOutOfRange("bit count above 63");
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    if (j >= limit || k >= limit) {
        throw IndexOutOfRange("argument outside Z_" + std::to_string(limit));
    }
    return static_cast<unsigned>(std::popcount(j ^ k));
}

std::int64_t imbalance(const BoolFunc &f) noexcept {
    const auto ones = static_cast<std::int64_t>(f.count_ones());
    const auto zeros = static_cast<std::int64_t>(f.size()) - ones;
    return (ones - zeros) / 2;
}

BoolFunc complement(const BoolFunc &f) {
    BoolFunc g = f;
    for (auto &w : g.words_) w = ~w;
    g.words_.back() &= tail_mask(g.n_);
    return g;
}

BoolFunc permute(const BoolFunc &f, std::size_t l, std::size_t m) {
    if (l >= f.size() || m >= f.size()) {
        throw IndexOutOfRange("transposition index outside Z_" + std::to_string(f.size()));
    }
    BoolFunc g = f;
    g.set(l, f(m));
    g.set(m, f(l));
    return g;
}

BoolFunc lift(const BoolFunc &f) {
    BoolFunc g(f.bits() + 1);
    std::copy(f.words_.begin(), f.words_.end(), g.words_.begin());
    return g;
}

bool is_constant(const BoolFunc &f) noexcept {
    const auto ones = f.count_ones();
    return ones == 0 || ones == f.size();
}

bool is_balanced(const BoolFunc &f) noexcept {
    return f.count_ones() * 2 == f.size();
}

bool is_in_cn(const BoolFunc &f) {
    if (f.bits() < 2) {
        throw ClassUndefined("C_N needs n >= 2 (N/4 must be a positive integer)");
    }
    return satisfies_cn_conditions(f) || satisfies_cn_conditions(complement(f));
}

FunctionClass classify(const BoolFunc &f) {
    if (is_constant(f)) return FunctionClass::Constant;
    if (is_balanced(f)) return FunctionClass::BalancedW;
    if (f.bits() >= 2 && is_in_cn(f)) return FunctionClass::ClassCN;
    return FunctionClass::Other;
}

namespace {

bool member_of(const BoolFunc &f, FunctionClass cls) {
    return classify(f) == cls;
}

// Lexicographic order on truth-table strings: f(0) is the leading character,
// so it maps to the most significant bit of the counter.
BoolFunc table_from_counter(unsigned n, std::uint64_t t) {
    const std::size_t size = std::size_t{1} << n;
    return BoolFunc::from_predicate(n, [&](std::size_t j) { return (t >> (size - 1 - j)) & 1U; });
}

} // namespace

ClassEnumerator::ClassEnumerator(unsigned n, FunctionClass cls) : n_(n), cls_(cls) {
    check_bits(n);
    if (cls == FunctionClass::Constant) {
        end_ = 2;
        return;
    }
    if (n > kMaxEnumerationBits) {
        throw Infeasible("exhaustive enumeration of class '" + std::string(to_string(cls)) +
                         "' is limited to n <= " + std::to_string(kMaxEnumerationBits));
    }
    if (cls == FunctionClass::ClassCN && n < 2) {
        throw ClassUndefined("C_N needs n >= 2");
    }
    end_ = std::uint64_t{1} << (std::size_t{1} << n);
}

std::optional<BoolFunc> ClassEnumerator::next() {
    if (cls_ == FunctionClass::Constant) {
        if (cursor_ >= end_) return std::nullopt;
        return BoolFunc::constant(n_, cursor_++ == 1);
    }
    while (cursor_ < end_) {
        auto f = table_from_counter(n_, cursor_++);
        if (member_of(f, cls_)) return f;
    }
    return std::nullopt;
}

ClassEnumerator enumerate_class(unsigned n, FunctionClass cls) {
    return ClassEnumerator(n, cls);
}

std::vector<BoolFunc> collect_class(unsigned n, FunctionClass cls) {
    std::vector<BoolFunc> out;
    auto it = enumerate_class(n, cls);
    while (auto f = it.next()) out.push_back(std::move(*f));
    return out;
}

BoolFunc sample_cn(unsigned n, std::uint64_t seed) {
    if (n < 2) {
        throw ClassUndefined("C_N needs n >= 2");
    }
    check_bits(n);
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::size_t> even;
    even.reserve(size / 2);
    for (std::size_t j = 0; j < size; ++j) {
        if (std::popcount(j) % 2 == 0) even.push_back(j);
    }
    std::mt19937_64 rng(seed);
    const std::size_t take = size / 4;
    for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, even.size() - 1);
        std::swap(even[i], even[pick(rng)]);
    }
    return BoolFunc::from_ones(n, std::span(even.data(), take));
}

BoolFunc canonical_cn(unsigned n) {
    if (n < 2) {
        throw ClassUndefined("C_N needs n >= 2");
    }
    check_bits(n);
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::size_t> ones;
    for (std::size_t j = 0; ones.size() < size / 4; ++j) {
        if (std::popcount(j) % 2 == 0) ones.push_back(j);
    }
    return BoolFunc::from_ones(n, ones);
}

BoolFunc canonical_balanced(unsigned n) {
    check_bits(n);
    const std::size_t half = (std::size_t{1} << n) / 2;
    return BoolFunc::from_predicate(n, [half](std::size_t j) { return j >= half; });
}

BoolFunc from_hex(unsigned n, std::string_view hex) {
    check_bits(n);
    hex = trim(hex);
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.empty()) {
        throw ParseError("empty hexadecimal truth table");
    }
    BoolFunc probe(n);
    std::vector<std::size_t> ones;
    std::size_t bit = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
        int digit = 0;
        const char c = *it;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else throw ParseError(std::string("invalid hexadecimal digit '") + c + "'");
        for (int b = 0; b < 4; ++b) {
            if ((digit >> b) & 1) {
                if (bit + b >= probe.size()) {
                    throw ParseError("hexadecimal truth table sets a bit beyond N = " +
                                     std::to_string(probe.size()));
                }
                ones.push_back(bit + b);
            }
        }
    }
    return BoolFunc::from_ones(n, ones);
}

std::string to_hex(const BoolFunc &f) {
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t ndigits = (f.size() + 3) / 4;
    std::string out(ndigits, '0');
    for (std::size_t d = 0; d < ndigits; ++d) {
        int v = 0;
        for (int b = 0; b < 4; ++b) {
            const std::size_t j = d * 4 + b;
            if (j < f.size() && f(j)) v |= 1 << b;
        }
        out[ndigits - 1 - d] = digits[v];
    }
    return "0x" + out;
}

BoolFunc parse_truth_table(std::string_view text) {
    const auto eol = text.find('\n');
    const auto header = trim(text.substr(0, eol));
    if (!header.starts_with("n=")) {
        throw ParseError("truth table header must read 'n=<int>'");
    }
    unsigned n = 0;
    const auto digits = header.substr(2);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw ParseError("malformed bit count in header '" + std::string(header) + "'");
    }
    check_bits(n);
    if (eol == std::string_view::npos) {
        throw ParseError("truth table is missing its body line");
    }
    const auto body = trim(text.substr(eol + 1));
    if (body.starts_with("0x") || body.starts_with("0X")) {
        return from_hex(n, body);
    }
    const std::size_t size = std::size_t{1} << n;
    if (body.size() != size) {
        throw ParseError("expected " + std::to_string(size) + " bits, got " +
                         std::to_string(body.size()));
    }
    std::vector<std::size_t> ones;
    for (std::size_t j = 0; j < size; ++j) {
        if (body[j] == '1') ones.push_back(j);
        else if (body[j] != '0') throw ParseError("truth table body must contain only 0 and 1");
    }
    return BoolFunc::from_ones(n, ones);
}

std::string format_truth_table(const BoolFunc &f) {
    std::string out = "n=" + std::to_string(f.bits()) + "\n";
    out.reserve(out.size() + f.size() + 1);
    for (std::size_t j = 0; j < f.size(); ++j) out.push_back(f(j) ? '1' : '0');
    out.push_back('\n');
    return out;
}

} // namespace evqc
