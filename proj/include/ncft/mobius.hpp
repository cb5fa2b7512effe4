#pragma once

// The Möbius function of the order on AP(s), computed three ways: the
// defining recursion over a segment, the alternating incidence series, and
// the closed form (-1)^{b(u)-1} a(u) where a counts admissible shuffles.

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "error.hpp"
#include "partition.hpp"
#include "scalar.hpp"

namespace ncft {

namespace detail {

// Strict refinement matrix over a list of partitions of one word.
inline std::vector<std::vector<bool>> strictly_below(const std::vector<Partition>& elems)
{
    std::vector<std::vector<bool>> lt(elems.size(), std::vector<bool>(elems.size(), false));
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j)
            lt[i][j] = i != j && elems[i].refines(elems[j]);
    return lt;
}

} // namespace detail

// m(u|v) by m(u|u) = 1, m(u|v) = -sum_{u <= t < v} m(u|t); 0 unless u <= v,
// which includes every pair with a non-admissible member.
inline Integer mobius_recursive(const Partition& u, const Partition& v)
{
    if (!leq(u, v)) return 0;
    std::vector<Partition> seg = segment(u, v);
    // finer partitions first, so every t' < t is settled before t
    std::stable_sort(seg.begin(), seg.end(),
                     [](const Partition& a, const Partition& b) { return a.size() > b.size(); });
    auto lt = detail::strictly_below(seg);
    std::vector<Integer> m(seg.size());
    for (std::size_t j = 0; j < seg.size(); ++j) {
        if (j == 0) {
            m[j] = 1; // seg[0] == u, the unique element with b(u) blocks
            continue;
        }
        Integer acc = 0;
        for (std::size_t i = 0; i < j; ++i)
            if (lt[i][j]) acc += m[i];
        m[j] = -acc;
    }
    return m.back(); // v has the fewest blocks
}

// delta - i + i^2 - ... evaluated at (u, v); i is strictly upper triangular so
// the series stops after at most b(u) - b(v) terms.
inline Integer mobius_incidence_series(const Partition& u, const Partition& v)
{
    if (!leq(u, v)) return 0;
    std::vector<Partition> seg = segment(u, v);
    auto lt = detail::strictly_below(seg);
    std::size_t iu = 0;
    std::size_t iv = 0;
    for (std::size_t k = 0; k < seg.size(); ++k) {
        if (seg[k] == u) iu = k;
        if (seg[k] == v) iv = k;
    }
    // row[k] = i^power(u | seg[k])
    std::vector<Integer> row(seg.size(), 0);
    row[iu] = 1;
    Integer total = 0;
    int sign = 1;
    while (true) {
        total += sign * row[iv];
        std::vector<Integer> next(seg.size(), 0);
        bool any = false;
        for (std::size_t a = 0; a < seg.size(); ++a) {
            if (row[a] == 0) continue;
            for (std::size_t b = 0; b < seg.size(); ++b)
                if (lt[a][b]) {
                    next[b] += row[a];
                    any = true;
                }
        }
        if (!any) break;
        row = std::move(next);
        sign = -sign;
    }
    return total;
}

namespace detail {

inline Integer shuffle_count_blocks(const Word& s, const std::vector<PositionMask>& blocks,
                                    std::map<std::vector<PositionMask>, Integer>& memo)
{
    for (PositionMask b : blocks)
        if (!mask_is_cumulant(s, b)) return 0;
    const std::size_t p = blocks.size();
    if (p <= 2) return 1;
    if (auto it = memo.find(blocks); it != memo.end()) return it->second;
    Integer total = 0;
    for (std::size_t k = 0; k + 1 < p; ++k) {
        PositionMask merged = blocks[k] | blocks[p - 1];
        if (!mask_is_cumulant(s, merged)) continue;
        std::vector<PositionMask> next(blocks.begin(), blocks.end() - 1);
        next[k] = merged; // least position of u_k is below that of u_p, so order is kept
        total += shuffle_count_blocks(s, next, memo);
    }
    memo.emplace(blocks, total);
    return total;
}

} // namespace detail

// a(u): the number of admissible shuffles of u, i.e. chains to 1_s built by
// merging the last block into an earlier one with every step admissible.
// Zero off AP(s).
inline Integer shuffle_count(const Partition& u)
{
    std::map<std::vector<PositionMask>, Integer> memo;
    return detail::shuffle_count_blocks(u.parent(), u.blocks(), memo);
}

// m(u) = m(u | 1_s) = (-1)^{b(u)-1} a(u); 0 off AP(s) since a(u) is.
inline Integer mobius_closed(const Partition& u)
{
    Integer a = shuffle_count(u);
    return u.size() % 2 == 1 ? a : Integer(-a);
}

// m(v|u) as the product over the blocks u_k of m(v restricted to u_k | 1_{u_k}).
inline Integer mobius_multiplicative(const Partition& v, const Partition& u)
{
    if (!leq(v, u)) return 0;
    Integer out = 1;
    for (std::size_t k = 0; k < u.size(); ++k) {
        Subword block = u.block(k);
        out *= mobius_recursive(restriction(v, block), Partition::one_block(block.word()));
    }
    return out;
}

// The full order AP(s) with its cover relation.
class AdmissibleLattice {
public:
    explicit AdmissibleLattice(const Word& s) : word_(s), elements_(*admissible_partitions(s))
    {
        const std::size_t n = elements_.size();
        leq_.assign(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) leq_[i][j] = elements_[i].refines(elements_[j]);
        for (std::size_t i = 0; i < n; ++i) {
            index_.emplace(elements_[i].blocks(), i);
            if (elements_[i].is_one_block()) top_ = i;
            if (elements_[i].is_discrete()) bottom_ = i;
        }
    }

    [[nodiscard]] const Word& word() const { return word_; }
    [[nodiscard]] const std::vector<Partition>& elements() const { return elements_; }
    [[nodiscard]] std::size_t size() const { return elements_.size(); }
    [[nodiscard]] std::size_t top() const { return top_; }
    [[nodiscard]] std::size_t bottom() const { return bottom_; }
    [[nodiscard]] bool leq(std::size_t i, std::size_t j) const { return leq_[i][j]; }

    [[nodiscard]] std::size_t index_of(const Partition& u) const
    {
        if (u.parent() != word_) throw ParentMismatch("partition of " + u.parent().str() + " looked up in AP(" + word_.str() + ")");
        auto it = index_.find(u.blocks());
        if (it == index_.end()) throw std::invalid_argument(u.str() + " is not in AP(" + word_.str() + ")");
        return it->second;
    }

    // j covers i: i < j with nothing strictly between.
    [[nodiscard]] bool covers(std::size_t j, std::size_t i) const
    {
        if (i == j || !leq_[i][j]) return false;
        for (std::size_t t = 0; t < elements_.size(); ++t)
            if (t != i && t != j && leq_[i][t] && leq_[t][j]) return false;
        return true;
    }

    // D(s): the elements covered by 1_s.
    [[nodiscard]] std::vector<std::size_t> dual_atoms() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < elements_.size(); ++i)
            if (covers(top_, i)) out.push_back(i);
        return out;
    }

private:
    Word word_;
    std::vector<Partition> elements_;
    std::vector<std::vector<bool>> leq_;
    std::map<std::vector<PositionMask>, std::size_t> index_;
    std::size_t top_ = 0;
    std::size_t bottom_ = 0;
};

// m(v) = -sum m(v|u) over dual atoms u = (u_1, u_2) of s that separate the
// first two blocks of v. Requires v < 1_s.
inline Integer mobius_dual_atom(const AdmissibleLattice& lattice, const Partition& v)
{
    std::size_t iv = lattice.index_of(v);
    if (v.is_one_block()) throw std::invalid_argument("mobius_dual_atom: v must lie strictly below 1_s");
    Integer total = 0;
    for (std::size_t iu : lattice.dual_atoms()) {
        if (!lattice.leq(iv, iu)) continue;
        const Partition& u = lattice.elements()[iu];
        if (u.size() != 2) throw std::logic_error("dual atom with " + std::to_string(u.size()) + " blocks: " + u.str());
        if ((v.blocks()[1] & u.blocks()[1]) != v.blocks()[1]) continue;
        total += mobius_recursive(v, u);
    }
    return -total;
}

} // namespace ncft
