#pragma once

// Filtered convolution of hat states. Each letter of s is sent to one of two
// tensor legs by an epsilon vector; a w on one leg separates the letters of
// the other leg, so each leg factors into hat moments of its runs.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cumulant.hpp"
#include "error.hpp"
#include "partition.hpp"
#include "scalar.hpp"
#include "word.hpp"

namespace ncft {

class HatState {
public:
    explicit HatState(MomentFunction moments) : moments_(std::move(moments))
    {
        if (!moments_.is_hat())
            throw GeneralBackingRejected("convolution needs hat states; got a general moment function");
    }

    static HatState symbolic(Family family) { return HatState(MomentFunction::symbolic(family)); }
    static HatState sequence(std::vector<Rational> moments) { return HatState(MomentFunction::sequence(std::move(moments))); }

    [[nodiscard]] const MomentFunction& moments() const { return moments_; }
    [[nodiscard]] Scalar of_length(std::size_t n) const { return moments_.of_length(n); }

private:
    MomentFunction moments_;
};

// Entry k is the leg (1 or 2) of letter k.
class EpsilonVector {
public:
    EpsilonVector() = default;
    explicit EpsilonVector(std::vector<std::uint8_t> legs) : legs_(std::move(legs))
    {
        for (auto l : legs_)
            if (l != 1 && l != 2) throw std::invalid_argument("epsilon entries must be 1 or 2");
    }

    // "1121" style text.
    static EpsilonVector parse(std::string_view text)
    {
        std::vector<std::uint8_t> legs;
        for (char c : text) {
            if (c != '1' && c != '2') throw ParseError(std::string("invalid epsilon entry '") + c + "'");
            legs.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return EpsilonVector(std::move(legs));
    }

    // Bit k of code set means letter k goes to leg 2.
    static EpsilonVector from_code(std::uint64_t code, std::size_t n)
    {
        std::vector<std::uint8_t> legs(n);
        for (std::size_t k = 0; k < n; ++k) legs[k] = ((code >> k) & 1U) != 0 ? 2 : 1;
        return EpsilonVector(std::move(legs));
    }

    [[nodiscard]] std::size_t size() const { return legs_.size(); }
    [[nodiscard]] std::uint8_t operator[](std::size_t k) const { return legs_.at(k); }

    [[nodiscard]] PositionMask leg_mask(std::uint8_t leg) const
    {
        PositionMask m = 0;
        for (std::size_t k = 0; k < legs_.size(); ++k)
            if (legs_[k] == leg) m |= PositionMask{1} << k;
        return m;
    }

    [[nodiscard]] std::string str() const
    {
        std::string out;
        for (auto l : legs_) out += static_cast<char>('0' + l);
        return out;
    }

private:
    std::vector<std::uint8_t> legs_;
};

// Blocks are in parent coordinates; the two legs together partition s.
struct EpsilonSplit {
    std::vector<PositionMask> leg1;
    std::vector<PositionMask> leg2;
    Partition combined;
};

namespace detail {

// Runs of `leg` letters, cut wherever the other leg holds a w.
inline std::vector<PositionMask> leg_blocks(const Word& s, const EpsilonVector& e, std::uint8_t leg)
{
    std::vector<PositionMask> out;
    PositionMask current = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (e[j] == leg) {
            current |= PositionMask{1} << j;
        } else if (s.is_w(j) && current != 0) {
            out.push_back(current);
            current = 0;
        }
    }
    if (current != 0) out.push_back(current);
    return out;
}

inline void require_length(const Word& s, const EpsilonVector& e)
{
    if (s.size() != e.size())
        throw LengthMismatch("epsilon of length " + std::to_string(e.size()) + " for word " + s.str());
}

} // namespace detail

inline EpsilonSplit epsilon_split(const Word& s, const EpsilonVector& e)
{
    detail::require_length(s, e);
    if (s.empty()) throw EmptyWord("epsilon_split of the empty word");
    auto leg1 = detail::leg_blocks(s, e, 1);
    auto leg2 = detail::leg_blocks(s, e, 2);
    std::vector<PositionMask> all = leg1;
    all.insert(all.end(), leg2.begin(), leg2.end());
    Partition combined(s, std::move(all));
    if (!combined.is_admissible())
        throw std::logic_error("epsilon split " + combined.str() + " of " + s.str() + " is not admissible");
    return {std::move(leg1), std::move(leg2), std::move(combined)};
}

// prod mu_{|b|} over leg-1 blocks times prod nu_{|b|} over leg-2 blocks.
inline Scalar epsilon_moment(const HatState& mu, const HatState& nu, const Word& s, const EpsilonVector& e)
{
    detail::require_length(s, e);
    Scalar out = 1;
    for (PositionMask b : detail::leg_blocks(s, e, 1)) out = out * mu.of_length(detail::popcount(b));
    for (PositionMask b : detail::leg_blocks(s, e, 2)) out = out * nu.of_length(detail::popcount(b));
    return out;
}

// (mu * nu)(s): the sum of epsilon_moment over all 2^{l(s)} epsilon vectors.
inline Scalar filtered_convolve(const HatState& mu, const HatState& nu, const Word& s)
{
    if (s.empty()) return 1;
    Scalar out = 0;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << s.size()); ++code)
        out = out + epsilon_moment(mu, nu, s, EpsilonVector::from_code(code, s.size()));
    return out;
}

// The convolution as a general moment function on all words up to max_len.
inline MomentFunction convolution_moments(const HatState& mu, const HatState& nu, std::size_t max_len)
{
    std::map<Word, Scalar> values;
    for (const Word& s : words_up_to(max_len, 1)) values.emplace(s, filtered_convolve(mu, nu, s));
    return MomentFunction::general(std::move(values));
}

inline Scalar restrict_classical(const HatState& mu, const HatState& nu, std::size_t n)
{
    return filtered_convolve(mu, nu, Word::z_pow(n));
}

inline Scalar restrict_boolean(const HatState& mu, const HatState& nu, std::size_t n)
{
    return filtered_convolve(mu, nu, Word::w_pow(n));
}

// AP_eps(s): admissible partitions of s below the epsilon split, i.e. each
// block lies inside one leg block.
inline std::vector<Partition> ap_epsilon(const Word& s, const EpsilonVector& e)
{
    EpsilonSplit split = epsilon_split(s, e);
    std::vector<Partition> out;
    for (const Partition& v : *admissible_partitions(s))
        if (v.refines(split.combined)) out.push_back(v);
    return out;
}

// The cumulant form of epsilon_moment: sum over v in AP_eps(s) of the product
// of L_mu over v's leg-1 blocks and L_nu over its leg-2 blocks.
inline Scalar epsilon_cumulant_expansion(const CumulantFunction& L_mu, const CumulantFunction& L_nu, const Word& s,
                                         const EpsilonVector& e)
{
    const PositionMask leg1 = e.leg_mask(1);
    Scalar out = 0;
    for (const Partition& v : ap_epsilon(s, e)) {
        Scalar term = 1;
        for (std::size_t k = 0; k < v.size(); ++k) {
            bool first_leg = (v.blocks()[k] & leg1) != 0;
            term = term * (first_leg ? L_mu(v.block_word(k)) : L_nu(v.block_word(k)));
        }
        out = out + term;
    }
    return out;
}

// Words of length n grouped by equal convolution moment; classes and their
// members come in shortlex order.
inline std::vector<std::vector<Word>> convolution_classes(const HatState& mu, const HatState& nu, std::size_t n)
{
    std::vector<std::pair<Scalar, std::vector<Word>>> classes;
    for (const Word& s : words_of_length(n)) {
        Scalar value = filtered_convolve(mu, nu, s);
        auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) { return c.first == value; });
        if (it == classes.end())
            classes.push_back({std::move(value), {s}});
        else
            it->second.push_back(s);
    }
    std::vector<std::vector<Word>> out;
    for (auto& c : classes) out.push_back(std::move(c.second));
    return out;
}

} // namespace ncft
