#pragma once

// Subwords, partitions of a word, admissibility, and the lattice AP(s).
//
// Positions are 0-based internally and stored as bit masks over the parent
// word; the text form ("{1,3}{2}{4}") is 1-based.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "word.hpp"

namespace ncft {

using PositionMask = std::uint64_t;

namespace detail {

inline std::size_t lowest_bit(PositionMask m) { return static_cast<std::size_t>(__builtin_ctzll(m)); }
inline std::size_t highest_bit(PositionMask m) { return 63 - static_cast<std::size_t>(__builtin_clzll(m)); }
inline std::size_t popcount(PositionMask m) { return static_cast<std::size_t>(__builtin_popcountll(m)); }

// Mask with bits lo..hi inclusive.
inline PositionMask span_mask(std::size_t lo, std::size_t hi)
{
    PositionMask upper = hi >= 63 ? ~PositionMask{0} : (PositionMask{1} << (hi + 1)) - 1;
    return upper & ~((PositionMask{1} << lo) - 1);
}

// Packs the bits of `value` selected by `select` into the low bits.
inline PositionMask compress(PositionMask value, PositionMask select)
{
    PositionMask out = 0;
    std::size_t k = 0;
    for (; select != 0; select &= select - 1, ++k)
        if (value & (select & -select)) out |= PositionMask{1} << k;
    return out;
}

// Inverse of compress: scatters the low bits of `value` onto the bits of `select`.
inline PositionMask deposit(PositionMask value, PositionMask select)
{
    PositionMask out = 0;
    std::size_t k = 0;
    for (; select != 0; select &= select - 1, ++k)
        if ((value >> k) & 1U) out |= select & -select;
    return out;
}

inline std::string mask_str(PositionMask m)
{
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; m != 0; ++i, m >>= 1U) {
        if ((m & 1U) == 0) continue;
        if (!first) out += ",";
        out += std::to_string(i + 1);
        first = false;
    }
    return out + "}";
}

// A block has no inner w when every w strictly inside its span belongs to it.
inline bool mask_is_cumulant(const Word& parent, PositionMask block)
{
    std::size_t lo = lowest_bit(block);
    std::size_t hi = highest_bit(block);
    if (hi - lo < 2) return true;
    return (parent.w_mask() & span_mask(lo + 1, hi - 1) & ~block) == 0;
}

} // namespace detail

class Subword {
public:
    Subword(Word parent, PositionMask positions) : parent_(parent), positions_(positions)
    {
        if (positions == 0) throw std::invalid_argument("Subword: empty position set");
        if ((positions & ~parent.full_mask()) != 0)
            throw std::invalid_argument("Subword: position outside the parent word");
    }

    // 1-based positions, as written in the text form.
    static Subword at(Word parent, std::initializer_list<std::size_t> positions)
    {
        PositionMask m = 0;
        for (std::size_t p : positions) {
            if (p == 0) throw std::invalid_argument("Subword: positions are 1-based");
            m |= PositionMask{1} << (p - 1);
        }
        return {parent, m};
    }

    [[nodiscard]] const Word& parent() const { return parent_; }
    [[nodiscard]] PositionMask positions() const { return positions_; }
    [[nodiscard]] std::size_t size() const { return detail::popcount(positions_); }
    [[nodiscard]] std::size_t first() const { return detail::lowest_bit(positions_); }
    [[nodiscard]] std::size_t last() const { return detail::highest_bit(positions_); }
    [[nodiscard]] Word word() const { return parent_.project(positions_); }
    [[nodiscard]] std::string str() const { return detail::mask_str(positions_); }

    friend bool operator==(const Subword&, const Subword&) = default;

private:
    Word parent_;
    PositionMask positions_;
};

inline bool is_cumulant_subword(const Subword& r) { return detail::mask_is_cumulant(r.parent(), r.positions()); }

class Partition {
public:
    // Blocks must be nonempty, pairwise disjoint and cover the parent; they are
    // reordered by least position.
    Partition(Word parent, std::vector<PositionMask> blocks) : parent_(parent), blocks_(std::move(blocks))
    {
        if (parent_.empty()) throw EmptyWord("partition of the empty word");
        PositionMask seen = 0;
        for (PositionMask b : blocks_) {
            if (b == 0) throw std::invalid_argument("Partition: empty block");
            if ((b & seen) != 0) throw std::invalid_argument("Partition: overlapping blocks");
            seen |= b;
        }
        if (seen != parent_.full_mask()) throw std::invalid_argument("Partition: blocks do not cover the word");
        std::sort(blocks_.begin(), blocks_.end(),
                  [](PositionMask a, PositionMask b) { return detail::lowest_bit(a) < detail::lowest_bit(b); });
        admissible_ = std::all_of(blocks_.begin(), blocks_.end(),
                                  [&](PositionMask b) { return detail::mask_is_cumulant(parent_, b); });
    }

    static Partition of(Word parent, const std::vector<std::vector<std::size_t>>& one_based)
    {
        std::vector<PositionMask> blocks;
        for (const auto& block : one_based) {
            PositionMask m = 0;
            for (std::size_t p : block) {
                if (p == 0 || p > parent.size()) throw std::invalid_argument("Partition: position out of range");
                m |= PositionMask{1} << (p - 1);
            }
            blocks.push_back(m);
        }
        return {parent, std::move(blocks)};
    }

    // 0_s: all singletons.
    static Partition discrete(const Word& parent)
    {
        std::vector<PositionMask> blocks;
        for (std::size_t i = 0; i < parent.size(); ++i) blocks.push_back(PositionMask{1} << i);
        return {parent, std::move(blocks)};
    }

    // 1_s: the whole word as one block.
    static Partition one_block(const Word& parent) { return {parent, {parent.full_mask()}}; }

    static Partition parse(const Word& parent, std::string_view text)
    {
        std::vector<std::vector<std::size_t>> blocks;
        std::size_t i = 0;
        auto fail = [&](const std::string& why) {
            throw ParseError("partition parse error at position " + std::to_string(i + 1) + ": " + why);
        };
        while (i < text.size()) {
            if (text[i] != '{') fail("expected '{'");
            ++i;
            std::vector<std::size_t> block;
            while (true) {
                std::size_t start = i;
                while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
                if (start == i) fail("expected a position");
                block.push_back(std::stoul(std::string(text.substr(start, i - start))));
                if (i >= text.size()) fail("unterminated block");
                if (text[i] == ',') {
                    ++i;
                    continue;
                }
                if (text[i] == '}') {
                    ++i;
                    break;
                }
                fail("expected ',' or '}'");
            }
            blocks.push_back(std::move(block));
        }
        try {
            return of(parent, blocks);
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("invalid partition: ") + e.what());
        }
    }

    [[nodiscard]] const Word& parent() const { return parent_; }
    [[nodiscard]] const std::vector<PositionMask>& blocks() const { return blocks_; }
    // b(u)
    [[nodiscard]] std::size_t size() const { return blocks_.size(); }
    [[nodiscard]] Subword block(std::size_t k) const { return {parent_, blocks_.at(k)}; }
    [[nodiscard]] Word block_word(std::size_t k) const { return parent_.project(blocks_.at(k)); }
    [[nodiscard]] bool is_admissible() const { return admissible_; }
    [[nodiscard]] bool is_discrete() const { return blocks_.size() == parent_.size(); }
    [[nodiscard]] bool is_one_block() const { return blocks_.size() == 1; }

    // Every block of *this lies inside a block of `coarser` (no admissibility check).
    [[nodiscard]] bool refines(const Partition& coarser) const
    {
        return std::all_of(blocks_.begin(), blocks_.end(), [&](PositionMask b) {
            return std::any_of(coarser.blocks_.begin(), coarser.blocks_.end(),
                               [&](PositionMask c) { return (b & ~c) == 0; });
        });
    }

    [[nodiscard]] std::string str() const
    {
        std::string out;
        for (PositionMask b : blocks_) out += detail::mask_str(b);
        return out;
    }

    friend bool operator==(const Partition& a, const Partition& b)
    {
        return a.parent_ == b.parent_ && a.blocks_ == b.blocks_;
    }
    friend std::strong_ordering operator<=>(const Partition& a, const Partition& b)
    {
        if (auto c = a.parent_ <=> b.parent_; c != 0) return c;
        return a.blocks_ <=> b.blocks_;
    }

private:
    Word parent_;
    std::vector<PositionMask> blocks_;
    bool admissible_ = false;
};

inline bool is_admissible(const Partition& u) { return u.is_admissible(); }

// Calls f(blocks) for each set partition of {0..n-1} in restricted-growth-string
// order; blocks come ordered by least element.
template <typename F>
void for_each_set_partition(std::size_t n, F&& f)
{
    if (n == 0) return;
    std::vector<std::size_t> rgs(n, 0);
    std::vector<std::size_t> prefix_max(n, 0); // max label among rgs[0..i]
    std::vector<PositionMask> blocks;
    while (true) {
        std::size_t nblocks = prefix_max[n - 1] + 1;
        blocks.assign(nblocks, 0);
        for (std::size_t i = 0; i < n; ++i) blocks[rgs[i]] |= PositionMask{1} << i;
        f(static_cast<const std::vector<PositionMask>&>(blocks));
        // next RGS: rightmost i >= 1 with rgs[i] <= prefix_max[i-1]
        std::size_t i = n - 1;
        while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
        if (i == 0) return;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[j - 1];
        }
    }
}

// AP(s), in restricted-growth-string order of the underlying set partitions.
inline std::vector<Partition> enumerate_admissible(const Word& s)
{
    if (s.empty()) throw EmptyWord("AP(1) is undefined");
    std::vector<Partition> out;
    for_each_set_partition(s.size(), [&](const std::vector<PositionMask>& blocks) {
        for (PositionMask b : blocks)
            if (!detail::mask_is_cumulant(s, b)) return;
        out.emplace_back(s, blocks);
    });
    return out;
}

// Shared, immutable copy of enumerate_admissible(s).
inline std::shared_ptr<const std::vector<Partition>> admissible_partitions(const Word& s)
{
    static std::mutex mutex;
    static std::unordered_map<Word, std::shared_ptr<const std::vector<Partition>>, WordHash> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(s); it != cache.end()) return it->second;
    }
    auto fresh = std::make_shared<const std::vector<Partition>>(enumerate_admissible(s));
    std::lock_guard lock(mutex);
    return cache.try_emplace(s, std::move(fresh)).first->second;
}

namespace detail {

inline void require_same_parent(const Partition& u, const Partition& v)
{
    if (u.parent() != v.parent())
        throw ParentMismatch("partitions of different words: " + u.parent().str() + " vs " + v.parent().str());
}

inline void require_lattice_element(const Partition& u, const Partition& result, const char* op)
{
    if (!result.is_admissible())
        throw std::logic_error(std::string(op) + " left AP(" + u.parent().str() + "): " + result.str());
}

} // namespace detail

inline Partition meet(const Partition& u, const Partition& v)
{
    detail::require_same_parent(u, v);
    std::vector<PositionMask> blocks;
    for (PositionMask a : u.blocks())
        for (PositionMask b : v.blocks())
            if ((a & b) != 0) blocks.push_back(a & b);
    Partition result(u.parent(), std::move(blocks));
    if (u.is_admissible() && v.is_admissible()) detail::require_lattice_element(u, result, "meet");
    return result;
}

inline Partition join(const Partition& u, const Partition& v)
{
    detail::require_same_parent(u, v);
    std::vector<PositionMask> blocks = u.blocks();
    for (PositionMask b : v.blocks()) {
        PositionMask merged = b;
        std::vector<PositionMask> rest;
        for (PositionMask a : blocks) {
            if ((a & merged) != 0)
                merged |= a;
            else
                rest.push_back(a);
        }
        rest.push_back(merged);
        blocks = std::move(rest);
    }
    Partition result(u.parent(), std::move(blocks));
    if (u.is_admissible() && v.is_admissible()) detail::require_lattice_element(u, result, "join");
    return result;
}

// The order of AP(s): both admissible and u refines v.
inline bool leq(const Partition& u, const Partition& v)
{
    detail::require_same_parent(u, v);
    return u.is_admissible() && v.is_admissible() && u.refines(v);
}

// [u, v] in AP(s): coarsenings of u that refine v and stay admissible,
// enumerated as set partitions of u's blocks (restricted-growth order).
inline std::vector<Partition> segment(const Partition& u, const Partition& v)
{
    if (!leq(u, v)) throw NotComparable(u.str() + " is not <= " + v.str() + " in AP(" + u.parent().str() + ")");
    std::vector<Partition> out;
    const auto& ublocks = u.blocks();
    for_each_set_partition(ublocks.size(), [&](const std::vector<PositionMask>& groups) {
        std::vector<PositionMask> merged;
        merged.reserve(groups.size());
        for (PositionMask g : groups) {
            PositionMask m = 0;
            for (; g != 0; g &= g - 1) m |= ublocks[detail::lowest_bit(g)];
            if (!detail::mask_is_cumulant(u.parent(), m)) return;
            merged.push_back(m);
        }
        Partition t(u.parent(), std::move(merged));
        if (t.refines(v)) out.push_back(std::move(t));
    });
    return out;
}

// v restricted to a block that is a union of blocks of v, re-indexed as a
// partition of the block's own word.
inline Partition restriction(const Partition& v, const Subword& block)
{
    if (block.parent() != v.parent()) throw ParentMismatch("restriction block belongs to a different word");
    std::vector<PositionMask> inner;
    for (PositionMask b : v.blocks()) {
        PositionMask common = b & block.positions();
        if (common == 0) continue;
        if (common != b)
            throw NotAUnionOfBlocks(block.str() + " cuts through block " + detail::mask_str(b) + " of " + v.str());
        inner.push_back(detail::compress(b, block.positions()));
    }
    return {block.word(), std::move(inner)};
}

// Blocks of a partition of block.word() mapped back to parent positions.
inline std::vector<PositionMask> lift(const Partition& of_block, const Subword& block)
{
    if (of_block.parent() != block.word()) throw ParentMismatch("lift: partition is not of the block's word");
    std::vector<PositionMask> out;
    for (PositionMask b : of_block.blocks()) out.push_back(detail::deposit(b, block.positions()));
    return out;
}

} // namespace ncft
