#pragma once

// Seeded rational draws for property sweeps. Uses raw mt19937_64 output
// rather than std distributions, whose results vary between standard
// libraries; the same seed gives the same rationals everywhere.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "scalar.hpp"
#include "word.hpp"

namespace ncft {

class RationalSource {
public:
    explicit RationalSource(std::uint64_t seed) : engine_(seed) {}

    // numerator in [-9, 9], denominator in {1, 2, 3}
    Rational next()
    {
        auto num = static_cast<long>(engine_() % 19) - 9;
        auto den = static_cast<long>(engine_() % 3) + 1;
        return {num, den};
    }

    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

    std::vector<Rational> sequence(std::size_t n)
    {
        std::vector<Rational> out;
        out.reserve(n);
        for (std::size_t k = 0; k < n; ++k) out.push_back(next());
        return out;
    }

    // A value for every nonempty word of length <= max_len, in shortlex order.
    std::map<Word, Scalar> general(std::size_t max_len)
    {
        std::map<Word, Scalar> out;
        for (const Word& s : words_up_to(max_len, 1)) out.emplace(s, next());
        return out;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ncft
