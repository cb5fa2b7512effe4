#pragma once

// Words over {z, w}: the free semigroup S = FS({z, w}) with the empty word as
// unit.

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "scalar.hpp"

namespace ncft {

enum class Letter : std::uint8_t { z = 0, w = 1 };

inline char to_char(Letter l) { return l == Letter::z ? 'z' : 'w'; }

// Letters are packed into a 64-bit mask (bit i set iff letter i is w), which
// caps the length at 63. Everything downstream enumerates partitions, so the
// practical envelope is far smaller.
class Word {
public:
    static constexpr std::size_t max_length = 63;

    Word() = default;

    Word(std::initializer_list<Letter> letters)
    {
        for (Letter l : letters) push_back(l);
    }

    static Word parse(std::string_view text)
    {
        if (text == "1") return {};
        if (text.empty()) throw ParseError("empty word text (use \"1\" for the unit)");
        if (text.size() > max_length) throw ParseError("word longer than 63 letters");
        Word out;
        for (char c : text) {
            if (c == 'z')
                out.push_back(Letter::z);
            else if (c == 'w')
                out.push_back(Letter::w);
            else
                throw ParseError(std::string("invalid letter '") + c + "' in word '" + std::string(text) + "'");
        }
        return out;
    }

    static Word power(Letter l, std::size_t n)
    {
        Word out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(l);
        return out;
    }
    static Word z_pow(std::size_t n) { return power(Letter::z, n); }
    static Word w_pow(std::size_t n) { return power(Letter::w, n); }

    void push_back(Letter l)
    {
        if (length_ >= max_length) throw std::length_error("Word: exceeds 63 letters");
        if (l == Letter::w) bits_ |= std::uint64_t{1} << length_;
        ++length_;
    }

    [[nodiscard]] std::size_t size() const { return length_; }
    [[nodiscard]] bool empty() const { return length_ == 0; }
    [[nodiscard]] Letter operator[](std::size_t i) const
    {
        assert(i < length_);
        return ((bits_ >> i) & 1U) != 0 ? Letter::w : Letter::z;
    }
    [[nodiscard]] bool is_w(std::size_t i) const { return (*this)[i] == Letter::w; }
    [[nodiscard]] bool is_z(std::size_t i) const { return (*this)[i] == Letter::z; }

    // Mask of w positions.
    [[nodiscard]] std::uint64_t w_mask() const { return bits_; }
    [[nodiscard]] std::uint64_t full_mask() const
    {
        return length_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length_) - 1;
    }

    [[nodiscard]] bool in_z_subsemigroup() const { return bits_ == 0; }
    [[nodiscard]] bool in_w_subsemigroup() const { return bits_ == full_mask(); }

    // Letters at the positions set in `mask`, in increasing order.
    [[nodiscard]] Word project(std::uint64_t mask) const
    {
        Word out;
        for (std::size_t i = 0; i < length_; ++i)
            if ((mask >> i) & 1U) out.push_back((*this)[i]);
        return out;
    }

    [[nodiscard]] Word slice(std::size_t from, std::size_t to) const
    {
        Word out;
        for (std::size_t i = from; i < to; ++i) out.push_back((*this)[i]);
        return out;
    }

    [[nodiscard]] std::string str() const
    {
        if (length_ == 0) return "1";
        std::string s;
        s.reserve(length_);
        for (std::size_t i = 0; i < length_; ++i) s += to_char((*this)[i]);
        return s;
    }

    // Shortlex: shorter words first, then lexicographic with z < w.
    friend std::strong_ordering operator<=>(const Word& a, const Word& b)
    {
        if (a.length_ != b.length_) return a.length_ <=> b.length_;
        for (std::size_t i = 0; i < a.length_; ++i) {
            auto la = a[i];
            auto lb = b[i];
            if (la != lb) return la <=> lb;
        }
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Word& a, const Word& b)
    {
        return a.length_ == b.length_ && a.bits_ == b.bits_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

    [[nodiscard]] std::size_t hash() const
    {
        return std::hash<std::uint64_t>{}(bits_ * 0x9E3779B97F4A7C15ULL + length_);
    }

private:
    std::uint64_t bits_ = 0;
    std::uint8_t length_ = 0;
};

struct WordHash {
    std::size_t operator()(const Word& w) const { return w.hash(); }
};

inline Word concat(const Word& s, const Word& t)
{
    Word out = s;
    for (std::size_t i = 0; i < t.size(); ++i) out.push_back(t[i]);
    return out;
}

inline Word operator*(const Word& s, const Word& t) { return concat(s, t); }

inline std::size_t w_count(const Word& s)
{
    return static_cast<std::size_t>(__builtin_popcountll(s.w_mask()));
}

// s = z^{n_1} w^{k_1} z^{n_2} ... w^{k_{p-1}} z^{n_p}; n_1 and n_p may be 0,
// everything else is >= 1. The empty word has z_runs = {0}.
struct BlockShape {
    std::vector<std::size_t> z_runs;
    std::vector<std::size_t> w_runs;

    [[nodiscard]] Word assemble() const
    {
        Word out;
        for (std::size_t i = 0; i < z_runs.size(); ++i) {
            out = concat(out, Word::z_pow(z_runs[i]));
            if (i < w_runs.size()) out = concat(out, Word::w_pow(w_runs[i]));
        }
        return out;
    }

    friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

inline BlockShape block_shape(const Word& s)
{
    BlockShape shape;
    std::size_t run = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s.is_z(i)) {
            ++run;
            ++i;
            continue;
        }
        shape.z_runs.push_back(run);
        run = 0;
        std::size_t k = 0;
        while (i < s.size() && s.is_w(i)) {
            ++k;
            ++i;
        }
        shape.w_runs.push_back(k);
    }
    shape.z_runs.push_back(run);
    return shape;
}

inline Integer factorial(std::size_t n)
{
    Integer r = 1;
    for (std::size_t k = 2; k <= n; ++k) r *= static_cast<unsigned long>(k);
    return r;
}

inline Integer binomial(std::size_t n, std::size_t k)
{
    if (k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// n(s)! = n_1! n_2! ... n_p!, the product over maximal z-runs.
inline Integer block_factorial(const Word& s)
{
    Integer r = 1;
    for (std::size_t n : block_shape(s).z_runs) r *= factorial(n);
    return r;
}

// All 2^{l(s)-1} splittings of s into nonempty factors, ordered by number of
// factors and then lexicographically by the sequence of factor lengths.
inline std::vector<std::vector<Word>> factorizations(const Word& s)
{
    if (s.empty()) throw EmptyWord("factorizations of the empty word");
    const std::size_t n = s.size();
    std::vector<std::vector<std::size_t>> compositions;
    // cut mask bit i: a cut after letter i (0 <= i < n-1)
    for (std::uint64_t cuts = 0; cuts < (std::uint64_t{1} << (n - 1)); ++cuts) {
        std::vector<std::size_t> parts;
        std::size_t last = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if ((cuts >> i) & 1U) {
                parts.push_back(i + 1 - last);
                last = i + 1;
            }
        }
        parts.push_back(n - last);
        compositions.push_back(std::move(parts));
    }
    std::sort(compositions.begin(), compositions.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<std::vector<Word>> out;
    out.reserve(compositions.size());
    for (const auto& parts : compositions) {
        std::vector<Word> factors;
        std::size_t at = 0;
        for (std::size_t len : parts) {
            factors.push_back(s.slice(at, at + len));
            at += len;
        }
        out.push_back(std::move(factors));
    }
    return out;
}

// All words of length exactly n, lexicographic with z < w.
inline std::vector<Word> words_of_length(std::size_t n)
{
    std::vector<Word> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        Word s;
        for (std::size_t i = 0; i < n; ++i)
            s.push_back(((code >> (n - 1 - i)) & 1U) != 0 ? Letter::w : Letter::z);
        out.push_back(s);
    }
    return out;
}

// Shortlex enumeration of all words with min_len <= l(s) <= max_len.
inline std::vector<Word> words_up_to(std::size_t max_len, std::size_t min_len = 0)
{
    std::vector<Word> out;
    for (std::size_t n = min_len; n <= max_len; ++n) {
        auto layer = words_of_length(n);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

inline MomentSymbol word_symbol(const Word& s) { return MomentSymbol::of_word(s.str()); }

} // namespace ncft

template <>
struct std::hash<ncft::Word> {
    std::size_t operator()(const ncft::Word& w) const noexcept { return w.hash(); }
};
