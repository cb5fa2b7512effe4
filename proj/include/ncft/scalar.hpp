#pragma once

// Exact coefficients: arbitrary-precision rationals and commutative
// polynomials in the formal moment symbols mu_n, nu_n (and word-indexed
// symbols M[s] for fully general moment functions).

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace ncft {

using Integer = mpz_class;

class Rational {
public:
    Rational() = default;
    Rational(long n) : v_(n) {} // NOLINT(google-explicit-constructor)
    Rational(long num, long den) : v_(num, den)
    {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const Integer& n) : v_(n) {}
    Rational(const Integer& num, const Integer& den) : v_(num, den)
    {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }

    // Accepts "p" or "p/q" with optional sign; q must be positive.
    static Rational parse(std::string_view text)
    {
        std::string t(text);
        auto is_int = [](std::string_view s) {
            if (s.empty()) return false;
            std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
            if (i == s.size()) return false;
            return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                               [](unsigned char c) { return std::isdigit(c) != 0; });
        };
        auto slash = t.find('/');
        std::string num = t.substr(0, slash);
        std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
        if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+')
            throw ParseError("malformed rational '" + t + "'");
        Integer n(num[0] == '+' ? num.substr(1) : num, 10);
        Integer d(den, 10);
        if (d == 0) throw ParseError("zero denominator in '" + t + "'");
        return Rational(n, d);
    }

    [[nodiscard]] Integer numerator() const { return v_.get_num(); }
    [[nodiscard]] Integer denominator() const { return v_.get_den(); }
    [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
    [[nodiscard]] bool is_one() const { return v_ == 1; }
    [[nodiscard]] int sign() const { return sgn(v_); }
    [[nodiscard]] bool is_integer() const { return v_.get_den() == 1; }

    [[nodiscard]] std::string str() const { return v_.get_str(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend Rational abs(const Rational& a) { return Rational(mpq_class(::abs(a.v_))); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

    [[nodiscard]] const mpq_class& raw() const { return v_; }

private:
    explicit Rational(mpq_class v) : v_(std::move(v)) {}
    mpq_class v_;
};

inline Rational pow(const Rational& base, unsigned exp)
{
    Rational r(1);
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

// mu, nu: moment sequences of two hat states. word: a symbol M[s] standing for
// the moment of one specific word s; `order` is then the shortlex index of s
// (1 = "z", 2 = "w", 3 = "zz", ...).
enum class Family : std::uint8_t { mu, nu, word };

namespace detail {

inline std::string word_from_index(std::uint64_t index)
{
    // index = 2^len - 1 + bits, first letter most significant, z = 0, w = 1
    std::size_t len = 0;
    while ((std::uint64_t{2} << len) - 1 <= index) ++len;
    std::uint64_t bits = index - ((std::uint64_t{1} << len) - 1);
    std::string s(len, 'z');
    for (std::size_t i = 0; i < len; ++i)
        if ((bits >> (len - 1 - i)) & 1U) s[i] = 'w';
    return s;
}

inline std::uint64_t index_from_word(std::string_view s)
{
    if (s.size() >= 63) throw ParseError("word too long for a moment symbol");
    std::uint64_t bits = 0;
    for (char c : s) {
        if (c != 'z' && c != 'w') throw ParseError(std::string("bad letter '") + c + "'");
        bits = (bits << 1U) | (c == 'w' ? 1U : 0U);
    }
    return ((std::uint64_t{1} << s.size()) - 1) + bits;
}

} // namespace detail

struct MomentSymbol {
    Family family = Family::mu;
    std::uint64_t order = 1;

    static MomentSymbol mu(std::uint64_t n) { return {Family::mu, n}; }
    static MomentSymbol nu(std::uint64_t n) { return {Family::nu, n}; }
    static MomentSymbol of_word(std::string_view letters)
    {
        if (letters.empty()) throw ParseError("moment symbol of the empty word");
        return {Family::word, detail::index_from_word(letters)};
    }

    [[nodiscard]] std::string str() const
    {
        switch (family) {
        case Family::mu: return "mu" + std::to_string(order);
        case Family::nu: return "nu" + std::to_string(order);
        case Family::word: return "M[" + detail::word_from_index(order) + "]";
        }
        return {};
    }

    friend auto operator<=>(const MomentSymbol&, const MomentSymbol&) = default;
};

// Sorted by symbol, exponents >= 1.
using Monomial = std::vector<std::pair<MomentSymbol, unsigned>>;

namespace detail {

inline Monomial monomial_product(const Monomial& a, const Monomial& b)
{
    Monomial out;
    out.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        if (j == b.end() || (i != a.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == a.end() || j->first < i->first) {
            out.push_back(*j++);
        } else {
            out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return out;
}

// Display priority: mu before nu before word symbols, higher order first.
inline bool symbol_outranks(const MomentSymbol& a, const MomentSymbol& b)
{
    if (a.family != b.family) return a.family < b.family;
    return a.order > b.order;
}

// Pure lexicographic term order with the priority above; returns true when
// a should be printed before b. Reproduces the usual "mu3 + 3*mu2*nu1 + ..."
// layout.
inline bool display_before(const Monomial& a, const Monomial& b)
{
    auto ra = a;
    auto rb = b;
    auto by_rank = [](const auto& x, const auto& y) { return symbol_outranks(x.first, y.first); };
    std::sort(ra.begin(), ra.end(), by_rank);
    std::sort(rb.begin(), rb.end(), by_rank);
    std::size_t n = std::min(ra.size(), rb.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (ra[k].first != rb[k].first) return symbol_outranks(ra[k].first, rb[k].first);
        if (ra[k].second != rb[k].second) return ra[k].second > rb[k].second;
    }
    return ra.size() > rb.size();
}

} // namespace detail

class Scalar {
public:
    using Terms = std::map<Monomial, Rational>;

    Scalar() = default;
    Scalar(const Rational& c) // NOLINT(google-explicit-constructor)
    {
        if (!c.is_zero()) terms_.emplace(Monomial{}, c);
    }
    Scalar(long c) : Scalar(Rational(c)) {} // NOLINT(google-explicit-constructor)

    static Scalar symbol(const MomentSymbol& s, unsigned exp = 1)
    {
        Scalar r;
        if (exp == 0) return Scalar(1);
        r.terms_.emplace(Monomial{{s, exp}}, Rational(1));
        return r;
    }
    static Scalar mu(std::uint64_t n) { return symbol(MomentSymbol::mu(n)); }
    static Scalar nu(std::uint64_t n) { return symbol(MomentSymbol::nu(n)); }

    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    // Precondition: is_constant().
    [[nodiscard]] Rational constant() const
    {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    [[nodiscard]] Rational coefficient(const Monomial& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Scalar& operator+=(const Scalar& o)
    {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Scalar& operator-=(const Scalar& o)
    {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Scalar& operator*=(const Scalar& o)
    {
        *this = *this * o;
        return *this;
    }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator-(const Scalar& a)
    {
        Scalar r;
        for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b)
    {
        Scalar r;
        if (a.is_constant() && b.is_constant()) return Scalar(a.constant() * b.constant());
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_term(detail::monomial_product(ma, mb), ca * cb);
        return r;
    }
    friend Scalar operator*(const Scalar& a, const Rational& k)
    {
        if (k.is_zero()) return {};
        Scalar r = a;
        for (auto& entry : r.terms_) entry.second *= k;
        return r;
    }
    friend Scalar operator/(const Scalar& a, const Rational& k) { return a * (Rational(1) / k); }

    friend bool operator==(const Scalar&, const Scalar&) = default;

    template <typename F>
    [[nodiscard]] bool any_symbol(F&& pred) const
    {
        for (const auto& entry : terms_)
            for (const auto& [sym, e] : entry.first)
                if (pred(sym)) return true;
        return false;
    }

    [[nodiscard]] std::string str() const
    {
        if (terms_.empty()) return "0";
        std::vector<const Terms::value_type*> order;
        order.reserve(terms_.size());
        for (const auto& t : terms_) order.push_back(&t);
        std::sort(order.begin(), order.end(),
                  [](auto* a, auto* b) { return detail::display_before(a->first, b->first); });
        std::string out;
        bool first = true;
        for (const auto* t : order) {
            const auto& [mono, coef] = *t;
            bool negative = coef.sign() < 0;
            Rational mag = abs(coef);
            if (first)
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            first = false;
            std::string body;
            for (const auto& [sym, e] : mono) {
                if (!body.empty()) body += "*";
                body += sym.str();
                if (e > 1) body += "^" + std::to_string(e);
            }
            if (body.empty())
                out += mag.str();
            else if (mag.is_one())
                out += body;
            else
                out += mag.str() + "*" + body;
        }
        return out;
    }

    // Inverse of str(): sums of products of rationals and symbols.
    static Scalar parse(std::string_view text);

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

private:
    void add_term(const Monomial& m, const Rational& c)
    {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Terms terms_;
};

inline Scalar pow(const Scalar& base, unsigned exp)
{
    Scalar r(1);
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

namespace detail {

class ScalarParser {
public:
    explicit ScalarParser(std::string_view text) : text_(text) {}

    Scalar parse()
    {
        skip_ws();
        if (at_end()) fail("empty expression");
        Scalar total;
        bool negate = false;
        if (peek() == '-' || peek() == '+') {
            negate = peek() == '-';
            ++pos_;
        }
        total += negate ? -term() : term();
        while (true) {
            skip_ws();
            if (at_end()) break;
            char op = peek();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            ++pos_;
            Scalar t = term();
            total += op == '-' ? -t : t;
        }
        return total;
    }

private:
    Scalar term()
    {
        Scalar acc = factor();
        while (true) {
            skip_ws();
            if (at_end() || peek() != '*') return acc;
            ++pos_;
            acc *= factor();
        }
    }

    Scalar factor()
    {
        skip_ws();
        if (at_end()) fail("expected a factor");
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            std::size_t start = pos_;
            while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) != 0 || peek() == '/'))
                ++pos_;
            try {
                return Scalar(Rational::parse(text_.substr(start, pos_ - start)));
            } catch (const ParseError& e) {
                fail(e.what());
            }
        }
        MomentSymbol sym;
        if (text_.substr(pos_, 2) == "mu" || text_.substr(pos_, 2) == "nu") {
            sym.family = c == 'm' ? Family::mu : Family::nu;
            pos_ += 2;
            sym.order = read_uint();
            if (sym.order == 0) fail("moment order must be >= 1");
        } else if (text_.substr(pos_, 2) == "M[") {
            pos_ += 2;
            std::size_t close = text_.find(']', pos_);
            if (close == std::string_view::npos) fail("unterminated M[");
            try {
                sym = MomentSymbol::of_word(text_.substr(pos_, close - pos_));
            } catch (const ParseError& e) {
                fail(e.what());
            }
            pos_ = close + 1;
        } else {
            fail(std::string("unexpected character '") + c + "'");
        }
        unsigned exp = 1;
        if (!at_end() && peek() == '^') {
            ++pos_;
            exp = static_cast<unsigned>(read_uint());
        }
        return Scalar::symbol(sym, exp);
    }

    std::uint64_t read_uint()
    {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) != 0) ++pos_;
        if (start == pos_) fail("expected digits");
        return std::stoull(std::string(text_.substr(start, pos_ - start)));
    }

    void skip_ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())) != 0) ++pos_;
    }
    [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return text_[pos_]; }
    [[noreturn]] void fail(const std::string& why) const
    {
        throw ParseError("scalar parse error at position " + std::to_string(pos_ + 1) + ": " + why);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Scalar Scalar::parse(std::string_view text) { return detail::ScalarParser(text).parse(); }

using Assignment = std::map<MomentSymbol, Rational>;

inline Rational scalar_eval(const Scalar& p, const Assignment& values)
{
    Rational total;
    for (const auto& [mono, coef] : p.terms()) {
        Rational term = coef;
        for (const auto& [sym, e] : mono) {
            auto it = values.find(sym);
            if (it == values.end()) throw MissingSymbol("no value for " + sym.str());
            term *= pow(it->second, e);
        }
        total += term;
    }
    return total;
}

} // namespace ncft
