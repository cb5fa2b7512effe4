#pragma once

// Moment and cumulant functions on S and the transforms between them:
// the admissible-partition recursion, Möbius inversion, and the split of
// M(s) over cumulant subwords through the first w.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "mobius.hpp"
#include "partition.hpp"
#include "scalar.hpp"
#include "word.hpp"

namespace ncft {

// M(s) = mu_{l(s)} (or nu_{l(s)}) as a formal symbol.
struct SymbolicHat {
    Family family = Family::mu;
    friend bool operator==(const SymbolicHat&, const SymbolicHat&) = default;
};

// M(s) = moments[l(s) - 1].
struct SequenceHat {
    std::vector<Rational> moments;
    friend bool operator==(const SequenceHat&, const SequenceHat&) = default;
};

// Arbitrary values per word; the empty word is always 1.
struct GeneralMoments {
    std::map<Word, Scalar> values;
    friend bool operator==(const GeneralMoments&, const GeneralMoments&) = default;
};

class MomentFunction {
public:
    using Backing = std::variant<SymbolicHat, SequenceHat, GeneralMoments>;

    explicit MomentFunction(Backing backing) : backing_(std::move(backing))
    {
        if (auto* g = std::get_if<GeneralMoments>(&backing_)) {
            auto it = g->values.find(Word{});
            if (it != g->values.end() && it->second != Scalar(1))
                throw std::invalid_argument("moment of the empty word must be 1, got " + it->second.str());
            g->values.erase(Word{});
        }
    }

    static MomentFunction symbolic(Family family) { return MomentFunction(SymbolicHat{family}); }
    static MomentFunction sequence(std::vector<Rational> moments) { return MomentFunction(SequenceHat{std::move(moments)}); }
    static MomentFunction general(std::map<Word, Scalar> values) { return MomentFunction(GeneralMoments{std::move(values)}); }

    // M(s) = M[s], an independent symbol for every nonempty word up to max_len.
    static MomentFunction general_symbolic(std::size_t max_len)
    {
        std::map<Word, Scalar> values;
        for (const Word& s : words_up_to(max_len, 1)) values.emplace(s, Scalar::symbol(word_symbol(s)));
        return general(std::move(values));
    }

    [[nodiscard]] const Backing& backing() const { return backing_; }
    [[nodiscard]] bool is_hat() const { return !std::holds_alternative<GeneralMoments>(backing_); }

    // The hat value at length n; only meaningful for hat backings.
    [[nodiscard]] Scalar of_length(std::size_t n) const
    {
        if (n == 0) return 1;
        if (const auto* h = std::get_if<SymbolicHat>(&backing_)) return Scalar::symbol({h->family, n});
        if (const auto* q = std::get_if<SequenceHat>(&backing_)) {
            if (n > q->moments.size())
                throw MissingValue("sequence moment of order " + std::to_string(n) + " not supplied (have " +
                                   std::to_string(q->moments.size()) + ")");
            return q->moments[n - 1];
        }
        throw std::logic_error("of_length called on a general moment function");
    }

    [[nodiscard]] Scalar operator()(const Word& s) const
    {
        if (s.empty()) return 1;
        if (const auto* g = std::get_if<GeneralMoments>(&backing_)) {
            auto it = g->values.find(s);
            if (it == g->values.end()) throw MissingValue("no moment supplied for word " + s.str());
            return it->second;
        }
        return of_length(s.size());
    }

    friend bool operator==(const MomentFunction&, const MomentFunction&) = default;

private:
    Backing backing_;
};

// L on S+; the empty word has no cumulant.
class CumulantFunction {
public:
    CumulantFunction() = default;
    explicit CumulantFunction(std::map<Word, Scalar> values) : values_(std::move(values))
    {
        if (values_.count(Word{}) != 0) throw std::invalid_argument("cumulants are not defined at the empty word");
    }

    [[nodiscard]] Scalar operator()(const Word& s) const
    {
        if (s.empty()) throw EmptyWord("L(1) is undefined");
        auto it = values_.find(s);
        if (it == values_.end()) throw MissingValue("no cumulant for word " + s.str());
        return it->second;
    }

    void set(const Word& s, Scalar value)
    {
        if (s.empty()) throw EmptyWord("L(1) is undefined");
        values_.insert_or_assign(s, std::move(value));
    }

    [[nodiscard]] const std::map<Word, Scalar>& values() const { return values_; }
    [[nodiscard]] bool contains(const Word& s) const { return values_.count(s) != 0; }

    friend bool operator==(const CumulantFunction&, const CumulantFunction&) = default;

private:
    std::map<Word, Scalar> values_;
};

namespace detail {

inline void require_admissible(const Partition& u)
{
    if (!u.is_admissible()) throw std::invalid_argument(u.str() + " is not admissible in " + u.parent().str());
}

template <typename F>
Scalar block_product(const Partition& u, F&& value)
{
    Scalar out = 1;
    for (std::size_t k = 0; k < u.size(); ++k) out = out * value(u.block_word(k));
    return out;
}

} // namespace detail

// M(u) = M(u_1) ... M(u_p).
inline Scalar partition_moment(const MomentFunction& M, const Partition& u)
{
    detail::require_admissible(u);
    return detail::block_product(u, M);
}

// L(u) = L(u_1) ... L(u_p).
inline Scalar partition_cumulant(const CumulantFunction& L, const Partition& u)
{
    detail::require_admissible(u);
    return detail::block_product(u, L);
}

// L(s) = M(s) - sum over u in AP(s) with b(u) >= 2 of L(u), by increasing length.
inline CumulantFunction cumulants_from_moments(const MomentFunction& M, std::size_t max_len)
{
    if (max_len == 0) throw std::invalid_argument("max_len must be at least 1");
    CumulantFunction L;
    for (const Word& s : words_up_to(max_len, 1)) {
        Scalar value = M(s);
        for (const Partition& u : *admissible_partitions(s)) {
            if (u.is_one_block()) continue;
            value = value - partition_cumulant(L, u);
        }
        L.set(s, std::move(value));
    }
    return L;
}

// M(s) = sum over u in AP(s) of L(u).
inline MomentFunction moments_from_cumulants(const CumulantFunction& L, std::size_t max_len)
{
    std::map<Word, Scalar> values;
    for (const Word& s : words_up_to(max_len, 1)) {
        Scalar value = 0;
        for (const Partition& u : *admissible_partitions(s)) value = value + partition_cumulant(L, u);
        values.emplace(s, std::move(value));
    }
    return MomentFunction::general(std::move(values));
}

// L(s) = sum over u in AP(s) of m(u) M(u).
inline Scalar cumulants_via_mobius(const MomentFunction& M, const Word& s)
{
    if (s.empty()) throw EmptyWord("L(1) is undefined");
    Scalar out = 0;
    for (const Partition& u : *admissible_partitions(s)) {
        out = out + partition_moment(M, u) * Rational(mobius_closed(u));
    }
    return out;
}

// C_0(s): cumulant subwords containing the first w of s, ordered by size and
// then by position list.
inline std::vector<Subword> cumulant_subwords_first_w(const Word& s)
{
    if (w_count(s) == 0) throw NoW("word " + s.str() + " has no w");
    const PositionMask first_w = s.w_mask() & -s.w_mask();
    const PositionMask others = s.full_mask() & ~first_w;
    std::vector<PositionMask> found;
    // iterate every subset of the other positions
    PositionMask sub = 0;
    do {
        PositionMask m = sub | first_w;
        if (detail::mask_is_cumulant(s, m)) found.push_back(m);
        sub = (sub - others) & others;
    } while (sub != 0);
    auto positions = [](PositionMask m) {
        std::vector<std::size_t> out;
        for (; m != 0; m &= m - 1) out.push_back(detail::lowest_bit(m));
        return out;
    };
    std::sort(found.begin(), found.end(), [&](PositionMask a, PositionMask b) {
        if (detail::popcount(a) != detail::popcount(b)) return detail::popcount(a) < detail::popcount(b);
        return positions(a) < positions(b);
    });
    std::vector<Subword> out;
    out.reserve(found.size());
    for (PositionMask m : found) out.emplace_back(s, m);
    return out;
}

// One summand of the split: L(r) * prod M(z-runs) * M(remainder).
struct SplitTerm {
    Subword r;
    // z^{k} collected before the first w-leg of r and between consecutive
    // w-legs; empty runs are dropped.
    std::vector<Word> runs;
    // letters of s outside r that follow the last w-leg of r
    Word remainder;
    Scalar value;
};

inline std::vector<SplitTerm> moment_cumulant_terms(const MomentFunction& M, const CumulantFunction& L, const Word& s)
{
    std::vector<SplitTerm> out;
    for (const Subword& r : cumulant_subwords_first_w(s)) {
        const PositionMask legs = r.positions() & s.w_mask();
        const std::size_t last_leg = detail::highest_bit(legs);
        const std::size_t nlegs = detail::popcount(legs);
        std::vector<std::size_t> run_len(nlegs, 0);
        Word remainder;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if ((r.positions() >> j) & 1U) continue;
            if (j > last_leg) {
                remainder.push_back(s[j]);
                continue;
            }
            // only z letters can sit here: r is a cumulant subword holding the first w
            ++run_len[detail::popcount(legs & ((PositionMask{1} << j) - 1))];
        }
        SplitTerm term{r, {}, remainder, L(r.word())};
        for (std::size_t len : run_len) {
            if (len == 0) continue;
            term.runs.push_back(Word::z_pow(len));
            term.value = term.value * M(term.runs.back());
        }
        term.value = term.value * M(remainder);
        out.push_back(std::move(term));
    }
    return out;
}

// Right side of the split formula; equals M(s) for every s containing a w.
inline Scalar moment_cumulant_split(const MomentFunction& M, const CumulantFunction& L, const Word& s)
{
    Scalar out = 0;
    for (const SplitTerm& t : moment_cumulant_terms(M, L, s)) out = out + t.value;
    return out;
}

// sum_{k=1}^{n} C(n-1, k-1) L(z^k) M(z^{n-k}); equals M(z^n).
inline Scalar classical_moment_cumulant(const MomentFunction& M, const CumulantFunction& L, std::size_t n)
{
    if (n == 0) throw std::invalid_argument("classical_moment_cumulant: n must be at least 1");
    Scalar out = 0;
    for (std::size_t k = 1; k <= n; ++k)
        out = out + L(Word::z_pow(k)) * M(Word::z_pow(n - k)) * Rational(binomial(n - 1, k - 1));
    return out;
}

} // namespace ncft
