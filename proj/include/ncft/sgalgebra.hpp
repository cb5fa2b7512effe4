#pragma once

// The semigroup algebra A(S) in truncation: series are functions on words of
// length <= max_len, multiplied by (f * g)(s) = sum_{uv = s} f(u) g(v).

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cumulant.hpp"
#include "error.hpp"
#include "scalar.hpp"
#include "word.hpp"

namespace ncft {

class TruncatedSeries {
public:
    using Coefficients = std::map<Word, Scalar>;

    explicit TruncatedSeries(std::size_t max_len) : max_len_(max_len) {}

    TruncatedSeries(std::size_t max_len, const Coefficients& coefficients) : max_len_(max_len)
    {
        for (const auto& [s, c] : coefficients) set(s, c);
    }

    static TruncatedSeries unit(std::size_t max_len) { return {max_len, {{Word{}, Scalar(1)}}}; }

    [[nodiscard]] std::size_t max_len() const { return max_len_; }
    [[nodiscard]] const Coefficients& coefficients() const { return coefficients_; }

    [[nodiscard]] Scalar operator[](const Word& s) const
    {
        if (s.size() > max_len_)
            throw TruncationMismatch("coefficient of " + s.str() + " lies beyond max_len " + std::to_string(max_len_));
        auto it = coefficients_.find(s);
        return it == coefficients_.end() ? Scalar(0) : it->second;
    }

    void set(const Word& s, const Scalar& value)
    {
        if (s.size() > max_len_)
            throw TruncationMismatch("word " + s.str() + " exceeds max_len " + std::to_string(max_len_));
        if (value.is_zero())
            coefficients_.erase(s);
        else
            coefficients_.insert_or_assign(s, value);
    }

    void add(const Word& s, const Scalar& value) { set(s, (*this)[s] + value); }

    [[nodiscard]] bool is_rational() const
    {
        for (const auto& [s, c] : coefficients_)
            if (!c.is_constant()) return false;
        return true;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& f, const TruncatedSeries& g)
    {
        require_match(f, g);
        TruncatedSeries out = f;
        for (const auto& [s, c] : g.coefficients_) out.add(s, c);
        return out;
    }

    friend TruncatedSeries operator-(const TruncatedSeries& f, const TruncatedSeries& g)
    {
        require_match(f, g);
        TruncatedSeries out = f;
        for (const auto& [s, c] : g.coefficients_) out.add(s, -c);
        return out;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& f, const Scalar& k)
    {
        TruncatedSeries out(f.max_len_);
        for (const auto& [s, c] : f.coefficients_) out.set(s, c * k);
        return out;
    }

    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

    static void require_match(const TruncatedSeries& f, const TruncatedSeries& g)
    {
        if (f.max_len_ != g.max_len_)
            throw TruncationMismatch("max_len " + std::to_string(f.max_len_) + " vs " + std::to_string(g.max_len_));
    }

private:
    std::size_t max_len_;
    Coefficients coefficients_;
};

inline TruncatedSeries series_convolve(const TruncatedSeries& f, const TruncatedSeries& g)
{
    TruncatedSeries::require_match(f, g);
    TruncatedSeries out(f.max_len());
    for (const auto& [u, a] : f.coefficients())
        for (const auto& [v, b] : g.coefficients())
            if (u.size() + v.size() <= f.max_len()) out.add(u * v, a * b);
    return out;
}

namespace detail {

inline void require_normalized(const TruncatedSeries& f)
{
    if (f[Word{}] != Scalar(1)) throw NotNormalized("series must have coefficient 1 at the empty word, got " + f[Word{}].str());
}

} // namespace detail

// f^{-1}(s) = sum_{p=1}^{l(s)} (-1)^p sum over factorizations s = u_1...u_p of f(u_1)...f(u_p).
inline TruncatedSeries series_invert(const TruncatedSeries& f)
{
    detail::require_normalized(f);
    TruncatedSeries out = TruncatedSeries::unit(f.max_len());
    for (const Word& s : words_up_to(f.max_len(), 1)) {
        Scalar value = 0;
        for (const auto& parts : factorizations(s)) {
            Scalar term = parts.size() % 2 == 0 ? Scalar(1) : Scalar(-1);
            for (const Word& u : parts) {
                term = term * f[u];
                if (term.is_zero()) break;
            }
            value = value + term;
        }
        out.set(s, value);
    }
    return out;
}

// Solves f * g = 1 by length: g(s) = -sum_{s = uv, u != 1} f(u) g(v).
inline TruncatedSeries series_invert_triangular(const TruncatedSeries& f)
{
    detail::require_normalized(f);
    TruncatedSeries g = TruncatedSeries::unit(f.max_len());
    for (const Word& s : words_up_to(f.max_len(), 1)) {
        Scalar value = 0;
        for (std::size_t cut = 1; cut <= s.size(); ++cut) value = value - f[s.slice(0, cut)] * g[s.slice(cut, s.size())];
        g.set(s, value);
    }
    return g;
}

// f_{*g}: equals f on S(z); on s = z_1 w_1 z_2 ... w_{p-1} z_p it sums, over
// all splittings z_i = u_i v_i with i < p, f(u_1 w_1 ... u_{p-1} w_{p-1} z_p) g(v_1)...g(v_{p-1}).
inline TruncatedSeries star_compose(const TruncatedSeries& f, const TruncatedSeries& g)
{
    TruncatedSeries::require_match(f, g);
    for (const auto& [s, c] : g.coefficients())
        if (!s.in_z_subsemigroup()) throw BadSupport("star_compose: g has a coefficient at " + s.str());
    TruncatedSeries out(f.max_len());
    for (const Word& s : words_up_to(f.max_len())) {
        if (s.in_z_subsemigroup()) {
            out.set(s, f[s]);
            continue;
        }
        const BlockShape shape = block_shape(s);
        const std::size_t runs = shape.w_runs.size();
        std::vector<std::size_t> cut(runs, 0); // cut[i] = l(u_i)
        Scalar value = 0;
        while (true) {
            BlockShape inner = shape;
            for (std::size_t i = 0; i < runs; ++i) inner.z_runs[i] = cut[i];
            Scalar term = f[inner.assemble()];
            for (std::size_t i = 0; i < runs && !term.is_zero(); ++i) term = term * g[Word::z_pow(shape.z_runs[i] - cut[i])];
            value = value + term;
            std::size_t i = 0;
            while (i < runs && cut[i] == shape.z_runs[i]) cut[i++] = 0;
            if (i == runs) break;
            ++cut[i];
        }
        out.set(s, value);
    }
    return out;
}

// Keeps coefficients on S(z), the empty word included.
inline TruncatedSeries restrict_z(const TruncatedSeries& f)
{
    TruncatedSeries out(f.max_len());
    for (const auto& [s, c] : f.coefficients())
        if (s.in_z_subsemigroup()) out.set(s, c);
    return out;
}

// Keeps coefficients on S(w), the empty word included.
inline TruncatedSeries restrict_w(const TruncatedSeries& f)
{
    TruncatedSeries out(f.max_len());
    for (const auto& [s, c] : f.coefficients())
        if (s.in_w_subsemigroup()) out.set(s, c);
    return out;
}

// f - restrict_z(f).
inline TruncatedSeries delta_part(const TruncatedSeries& f)
{
    TruncatedSeries out(f.max_len());
    for (const auto& [s, c] : f.coefficients())
        if (!s.in_z_subsemigroup()) out.set(s, c);
    return out;
}

// Coefficients M(s) / n(s)!.
inline TruncatedSeries moment_gf(const MomentFunction& M, std::size_t max_len)
{
    TruncatedSeries out(max_len);
    for (const Word& s : words_up_to(max_len)) out.set(s, M(s) / Rational(block_factorial(s)));
    return out;
}

// Coefficients L(s) / n(s)!, zero at the empty word.
inline TruncatedSeries cumulant_gf(const CumulantFunction& L, std::size_t max_len)
{
    TruncatedSeries out(max_len);
    for (const Word& s : words_up_to(max_len, 1)) out.set(s, L(s) / Rational(block_factorial(s)));
    return out;
}

// A positive word weight. Only the geometric form is guaranteed to satisfy
// W(1) = 1, submultiplicativity and W(st) = W(ts); custom rules are trusted.
class Weight {
public:
    using Rule = std::function<Rational(const Word&)>;

    static Weight geometric(const Rational& c)
    {
        if (c < Rational(1)) throw std::invalid_argument("geometric weight needs c >= 1, got " + c.str());
        return Weight([c](const Word& s) { return pow(c, static_cast<unsigned>(s.size())); }, "geometric c=" + c.str());
    }

    static Weight custom(Rule rule, std::string description = "custom")
    {
        return Weight(std::move(rule), std::move(description));
    }

    // W~(s) = W(s) Q^{-m(s)}.
    [[nodiscard]] Weight damped(const Rational& Q) const
    {
        Rule base = rule_;
        return Weight([base, Q](const Word& s) { return base(s) / pow(Q, static_cast<unsigned>(w_count(s))); },
                      description_ + " damped by Q=" + Q.str());
    }

    [[nodiscard]] Rational operator()(const Word& s) const { return rule_(s); }
    [[nodiscard]] const std::string& description() const { return description_; }

private:
    Weight(Rule rule, std::string description) : rule_(std::move(rule)), description_(std::move(description)) {}

    Rule rule_;
    std::string description_;
};

using AbsModel = std::function<Rational(const Scalar&)>;

// sum_{l(s) <= max_len} W(s) |f(s)|, with |.| supplied by abs_model.
inline Rational weighted_norm(const TruncatedSeries& f, const Weight& W, const AbsModel& abs_model)
{
    Rational total = 0;
    for (const auto& [s, c] : f.coefficients()) total = total + W(s) * abs_model(c);
    return total;
}

inline Rational weighted_norm(const TruncatedSeries& f, const Weight& W)
{
    return weighted_norm(f, W, [](const Scalar& c) {
        if (!c.is_constant()) throw SymbolicCoefficient("norm of a symbolic coefficient: " + c.str());
        return abs(c.constant());
    });
}

// Per-word comparison of two sides of a series identity.
struct IdentityRow {
    Word word;
    Scalar lhs;
    Scalar rhs;
    [[nodiscard]] bool equal() const { return lhs == rhs; }
};

struct IdentityReport {
    std::string identity;
    std::size_t max_len = 0;
    std::vector<IdentityRow> rows;

    [[nodiscard]] bool holds() const { return !first_failure().has_value(); }
    [[nodiscard]] std::optional<IdentityRow> first_failure() const
    {
        for (const auto& r : rows)
            if (!r.equal()) return r;
        return std::nullopt;
    }
};

namespace detail {

inline IdentityReport compare_series(std::string name, const TruncatedSeries& lhs, const TruncatedSeries& rhs)
{
    TruncatedSeries::require_match(lhs, rhs);
    IdentityReport report{std::move(name), lhs.max_len(), {}};
    for (const Word& s : words_up_to(lhs.max_len())) report.rows.push_back({s, lhs[s], rhs[s]});
    return report;
}

inline void require_depth(std::size_t max_len)
{
    if (max_len < 2) throw std::invalid_argument("identity checks need max_len >= 2");
}

} // namespace detail

// delta M = (delta L)_{* M{z,0}} * M, with M and L the generating functions.
inline IdentityReport check_delta_identity(const MomentFunction& M, std::size_t max_len)
{
    detail::require_depth(max_len);
    const TruncatedSeries Mg = moment_gf(M, max_len);
    const TruncatedSeries Lg = cumulant_gf(cumulants_from_moments(M, max_len), max_len);
    const TruncatedSeries rhs = series_convolve(star_compose(delta_part(Lg), restrict_z(Mg)), Mg);
    return detail::compare_series("delta M = (delta L)_{*M{z,0}} M", delta_part(Mg), rhs);
}

// L = L{z,0} + (M_* - M{z,0}) M_*^{-1} with M_* = M_{* M{z,0}^{-1}}.
inline IdentityReport check_cumulant_log_identity(const MomentFunction& M, std::size_t max_len)
{
    detail::require_depth(max_len);
    const TruncatedSeries Mg = moment_gf(M, max_len);
    const TruncatedSeries Lg = cumulant_gf(cumulants_from_moments(M, max_len), max_len);
    const TruncatedSeries Mz = restrict_z(Mg);
    const TruncatedSeries Mstar = star_compose(Mg, series_invert(Mz));
    const TruncatedSeries rhs = restrict_z(Lg) + series_convolve(Mstar - Mz, series_invert(Mstar));
    return detail::compare_series("L = L{z,0} + (M_* - M{z,0}) M_*^{-1}", Lg, rhs);
}

// On S(w): L{0,w} = (M{0,w} - 1) M{0,w}^{-1}.
inline IdentityReport check_boolean_remark(const MomentFunction& M, std::size_t max_len)
{
    detail::require_depth(max_len);
    const TruncatedSeries Mw = restrict_w(moment_gf(M, max_len));
    const TruncatedSeries Lw = restrict_w(cumulant_gf(cumulants_from_moments(M, max_len), max_len));
    const TruncatedSeries rhs = series_convolve(Mw - TruncatedSeries::unit(max_len), series_invert(Mw));
    return detail::compare_series("L{0,w} = (M{0,w} - 1) M{0,w}^{-1}", Lw, rhs);
}

enum class BoundOutcome { holds, violated, hypothesis_not_met };

inline const char* to_string(BoundOutcome o)
{
    switch (o) {
    case BoundOutcome::holds: return "holds";
    case BoundOutcome::violated: return "violated";
    case BoundOutcome::hypothesis_not_met: return "hypothesis not met";
    }
    return "?";
}

// Truncated norm bounds. All norms run over words of length <= max_len, so a
// pass is a necessary condition for the untruncated statement, not a proof.
struct NormBoundReport {
    Rational Q;
    Rational norm_f;
    Rational norm_g;

    // (i): ||f||_W <= 2 - 1/Q  implies  ||f^{-1}||_W <= Q
    Rational inverse_hypothesis_bound;
    Rational norm_f_inverse;
    BoundOutcome inverse_bound = BoundOutcome::hypothesis_not_met;

    // (ii): ||g||_W < Q  implies  ||f_{*g}||_{W~} <= ||f||_W
    Rational norm_star_damped;
    BoundOutcome star_bound = BoundOutcome::hypothesis_not_met;
    // sum over S(z) of W~|f| plus sum over the rest of W~(r)|f(r)| ||g||^{m(r)}
    Rational intermediate_bound;
    bool intermediate_holds = false;

    [[nodiscard]] bool ok() const
    {
        return inverse_bound != BoundOutcome::violated && star_bound != BoundOutcome::violated;
    }
};

inline NormBoundReport check_norm_bounds(const TruncatedSeries& f, const TruncatedSeries& g, const Weight& W, const Rational& Q)
{
    TruncatedSeries::require_match(f, g);
    if (!(Q > Rational(1, 2))) throw std::invalid_argument("Q must exceed 1/2, got " + Q.str());
    detail::require_normalized(f);
    if (!f.is_rational() || !g.is_rational()) throw SymbolicCoefficient("norm checks need rational coefficients");
    for (const auto& [s, c] : g.coefficients())
        if (!s.in_z_subsemigroup()) throw BadSupport("g has a coefficient at " + s.str());

    NormBoundReport r;
    r.Q = Q;
    r.norm_f = weighted_norm(f, W);
    r.norm_g = weighted_norm(g, W);

    r.inverse_hypothesis_bound = Rational(2) - Rational(1) / Q;
    r.norm_f_inverse = weighted_norm(series_invert(f), W);
    if (r.norm_f <= r.inverse_hypothesis_bound)
        r.inverse_bound = r.norm_f_inverse <= Q ? BoundOutcome::holds : BoundOutcome::violated;

    const Weight Wt = W.damped(Q);
    r.norm_star_damped = weighted_norm(star_compose(f, g), Wt);
    for (const auto& [s, c] : f.coefficients()) {
        Rational term = Wt(s) * abs(c.constant());
        if (!s.in_z_subsemigroup()) term = term * pow(r.norm_g, static_cast<unsigned>(w_count(s)));
        r.intermediate_bound = r.intermediate_bound + term;
    }
    r.intermediate_holds = r.norm_star_damped <= r.intermediate_bound;
    if (r.norm_g < Q) r.star_bound = r.norm_star_damped <= r.norm_f ? BoundOutcome::holds : BoundOutcome::violated;
    return r;
}

} // namespace ncft
