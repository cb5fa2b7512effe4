#pragma once

// Command implementations behind tools/ncft. Each command returns its full
// stdout text so it can be tested without spawning a process.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convolve.hpp"
#include "cumulant.hpp"
#include "error.hpp"
#include "mobius.hpp"
#include "partition.hpp"
#include "random.hpp"
#include "scalar.hpp"
#include "sgalgebra.hpp"
#include "word.hpp"

namespace ncft::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

enum class Format { table, json };

inline Format parse_format(const std::string& text)
{
    if (text == "table") return Format::table;
    if (text == "json") return Format::json;
    throw ParseError("unknown format '" + text + "' (expected table or json)");
}

// ---- moment specifications -------------------------------------------------

namespace detail {

inline Rational rational_field(const json& value, const std::string& where)
{
    if (value.is_string()) {
        try {
            return Rational::parse(value.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (value.is_number_integer()) return Rational(value.get<long>());
    throw ParseError(where + ": expected a rational as a string \"p/q\" or an integer, got " + value.dump());
}

inline Family family_field(const json& value)
{
    if (!value.is_string()) throw ParseError("\"family\" must be \"mu\" or \"nu\"");
    const auto name = value.get<std::string>();
    if (name == "mu") return Family::mu;
    if (name == "nu") return Family::nu;
    throw ParseError("unknown family \"" + name + "\" (expected mu or nu)");
}

} // namespace detail

// {"backing": "sequence", "moments": ["0", "1"]}
// {"backing": "symbolic", "family": "mu"}
// {"backing": "general",  "moments": {"z": "1/2", "zw": "3"}}
inline MomentFunction parse_moment_spec(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("backing") || !doc["backing"].is_string())
        throw ParseError("moment spec must be an object with a string \"backing\"");
    const auto backing = doc["backing"].get<std::string>();
    if (backing == "symbolic") {
        if (!doc.contains("family")) throw ParseError("symbolic spec needs \"family\"");
        return MomentFunction::symbolic(detail::family_field(doc["family"]));
    }
    if (!doc.contains("moments")) throw ParseError(backing + " spec needs \"moments\"");
    const json& moments = doc["moments"];
    if (backing == "sequence") {
        if (!moments.is_array()) throw ParseError("sequence \"moments\" must be an array [m1, m2, ...]");
        std::vector<Rational> seq;
        for (std::size_t k = 0; k < moments.size(); ++k)
            seq.push_back(detail::rational_field(moments[k], "moments[" + std::to_string(k) + "]"));
        return MomentFunction::sequence(std::move(seq));
    }
    if (backing == "general") {
        if (!moments.is_object()) throw ParseError("general \"moments\" must be an object {word: value}");
        std::map<Word, Scalar> values;
        for (const auto& [key, value] : moments.items()) {
            Word s = Word::parse(key);
            Rational r = detail::rational_field(value, "moments[\"" + key + "\"]");
            if (s.empty()) {
                if (!r.is_one()) throw ParseError("moment of the empty word \"1\" must be 1, got " + r.str());
                continue;
            }
            values.emplace(s, r);
        }
        return MomentFunction::general(std::move(values));
    }
    throw ParseError("unknown backing \"" + backing + "\" (expected sequence, symbolic or general)");
}

// Inverse of parse_moment_spec for rational-valued specs.
inline ordered_json render_moment_spec(const MomentFunction& M)
{
    ordered_json out;
    const auto& b = M.backing();
    if (const auto* h = std::get_if<SymbolicHat>(&b)) {
        out["backing"] = "symbolic";
        out["family"] = h->family == Family::mu ? "mu" : "nu";
    } else if (const auto* q = std::get_if<SequenceHat>(&b)) {
        out["backing"] = "sequence";
        out["moments"] = ordered_json::array();
        for (const auto& r : q->moments) out["moments"].push_back(r.str());
    } else {
        const auto& g = std::get<GeneralMoments>(b);
        out["backing"] = "general";
        out["moments"] = ordered_json::object();
        for (const auto& [s, v] : g.values) {
            if (!v.is_constant()) throw SymbolicCoefficient("cannot render symbolic general moment at " + s.str());
            out["moments"][s.str()] = v.constant().str();
        }
    }
    return out;
}

// "mu" / "nu" name a symbolic hat state; anything else is a spec file path.
inline MomentFunction load_moment_spec(const std::string& arg)
{
    if (arg == "mu") return MomentFunction::symbolic(Family::mu);
    if (arg == "nu") return MomentFunction::symbolic(Family::nu);
    std::ifstream in(arg);
    if (!in) throw ParseError("cannot open moment spec file '" + arg + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_moment_spec(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(arg + ": " + e.what());
    }
}

// ---- rendering ---------------------------------------------------------------

// Left-aligned columns separated by two spaces; the last column is not padded.
inline std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&](const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    };
    measure(header);
    for (const auto& r : rows) measure(r);
    std::string out;
    auto emit = [&](const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            out += r[c];
            if (c + 1 < r.size()) out += std::string(width[c] - r[c].size() + 2, ' ');
        }
        out += '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
    return out;
}

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---- commands ------------------------------------------------------------------

// Rows (word, M(s), L(s)) for every word of length 1..max_len, or for one word.
inline std::string cmd_cumulants(const MomentFunction& M, std::size_t max_len, const std::optional<Word>& only, Format format)
{
    std::vector<Word> words;
    if (only) {
        if (only->empty()) throw EmptyWord("cumulants are defined for nonempty words");
        max_len = only->size();
        words.push_back(*only);
    } else {
        if (max_len == 0) throw std::invalid_argument("--max-len must be at least 1");
        words = words_up_to(max_len, 1);
    }
    const CumulantFunction L = cumulants_from_moments(M, max_len);
    if (format == Format::json) {
        ordered_json rows = ordered_json::array();
        for (const Word& s : words)
            rows.push_back({{"word", s.str()}, {"moment", M(s).str()}, {"cumulant", L(s).str()}});
        return dump({{"max_len", max_len}, {"rows", rows}});
    }
    std::vector<std::vector<std::string>> rows;
    for (const Word& s : words) rows.push_back({s.str(), M(s).str(), L(s).str()});
    return render_table({"word", "M(s)", "L(s)"}, rows);
}

struct ConvolveRequest {
    std::vector<Word> words;
    std::optional<std::size_t> max_len;
    std::optional<Letter> restrict_to;
    bool classes = false;
};

inline std::vector<Word> convolve_targets(const ConvolveRequest& req)
{
    std::vector<Word> out = req.words;
    if (req.max_len) {
        for (std::size_t n = 1; n <= *req.max_len; ++n) {
            if (req.restrict_to) {
                out.push_back(Word::power(*req.restrict_to, n));
            } else {
                auto layer = words_of_length(n);
                out.insert(out.end(), layer.begin(), layer.end());
            }
        }
    }
    if (req.restrict_to)
        for (const Word& s : out)
            if (s.size() != 0 && ((*req.restrict_to == Letter::z) ? !s.in_z_subsemigroup() : !s.in_w_subsemigroup()))
                throw ParseError("word " + s.str() + " is outside the restriction to " + to_char(*req.restrict_to));
    if (out.empty()) throw ParseError("convolve needs --word or --max-len");
    return out;
}

inline std::string cmd_convolve(const HatState& mu, const HatState& nu, const ConvolveRequest& req, Format format)
{
    if (req.classes) {
        if (!req.max_len) throw ParseError("--classes needs --max-len");
        ordered_json layers = ordered_json::array();
        std::vector<std::vector<std::string>> rows;
        for (std::size_t n = 1; n <= *req.max_len; ++n) {
            ordered_json groups = ordered_json::array();
            for (const auto& cls : convolution_classes(mu, nu, n)) {
                ordered_json members = ordered_json::array();
                std::string joined;
                for (const Word& s : cls) {
                    members.push_back(s.str());
                    joined += (joined.empty() ? "" : " ") + s.str();
                }
                std::string value = filtered_convolve(mu, nu, cls.front()).str();
                groups.push_back({{"words", members}, {"moment", value}});
                rows.push_back({std::to_string(n), joined, value});
            }
            layers.push_back({{"length", n}, {"classes", groups}});
        }
        if (format == Format::json) return dump({{"classes", layers}});
        return render_table({"length", "words", "moment"}, rows);
    }
    const auto targets = convolve_targets(req);
    if (format == Format::json) {
        ordered_json rows = ordered_json::array();
        for (const Word& s : targets) rows.push_back({{"word", s.str()}, {"moment", filtered_convolve(mu, nu, s).str()}});
        return dump({{"rows", rows}});
    }
    std::vector<std::vector<std::string>> rows;
    for (const Word& s : targets) rows.push_back({s.str(), filtered_convolve(mu, nu, s).str()});
    return render_table({"word", "moment"}, rows);
}

// One row per u in AP(s): text form, b(u), a(u), m(u).
inline std::string cmd_mobius(const Word& s, Format format)
{
    const auto elements = admissible_partitions(s);
    if (format == Format::json) {
        ordered_json rows = ordered_json::array();
        for (const Partition& u : *elements)
            rows.push_back({{"partition", u.str()},
                            {"blocks", u.size()},
                            {"a", shuffle_count(u).get_str()},
                            {"m", mobius_closed(u).get_str()}});
        return dump({{"word", s.str()}, {"rows", rows}});
    }
    std::vector<std::vector<std::string>> rows;
    for (const Partition& u : *elements)
        rows.push_back({u.str(), std::to_string(u.size()), shuffle_count(u).get_str(), mobius_closed(u).get_str()});
    return render_table({"partition", "b(u)", "a(u)", "m(u)"}, rows);
}

// Generating-function coefficients M(s)/n(s)! and L(s)/n(s)!.
inline std::string cmd_gf(const MomentFunction& M, std::size_t max_len, Format format)
{
    if (max_len == 0) throw std::invalid_argument("--max-len must be at least 1");
    const TruncatedSeries Mg = moment_gf(M, max_len);
    const TruncatedSeries Lg = cumulant_gf(cumulants_from_moments(M, max_len), max_len);
    const auto words = words_up_to(max_len);
    if (format == Format::json) {
        ordered_json m = ordered_json::object();
        ordered_json l = ordered_json::object();
        for (const Word& s : words) {
            m[s.str()] = Mg[s].str();
            l[s.str()] = Lg[s].str();
        }
        return dump({{"max_len", max_len}, {"M", m}, {"L", l}});
    }
    std::vector<std::vector<std::string>> rows;
    for (const Word& s : words) rows.push_back({s.str(), Mg[s].str(), Lg[s].str()});
    return render_table({"word", "M{z,w}", "L{z,w}"}, rows);
}

// ---- verification suites -------------------------------------------------------

struct Counterexample {
    std::string where;
    std::string lhs;
    std::string rhs;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t max_len = 0;
    std::size_t instances = 0;
    bool pass = true;
    std::optional<Counterexample> counterexample;
    std::string note;
    double wall_seconds = 0;

    // Records the first failure only; later ones leave the report unchanged.
    void fail(std::string where, std::string lhs, std::string rhs)
    {
        if (!pass) return;
        pass = false;
        counterexample = Counterexample{std::move(where), std::move(lhs), std::move(rhs)};
    }
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"additivity", "inversion", "mobius", "gf-identity", "norms"};
    return names;
}

namespace detail {

inline void compare(VerifyReport& r, const std::string& where, const Scalar& lhs, const Scalar& rhs)
{
    if (lhs != rhs) r.fail(where, lhs.str(), rhs.str());
}

inline void absorb(VerifyReport& r, const IdentityReport& id, const std::string& instance)
{
    if (auto bad = id.first_failure()) r.fail(instance + ", " + id.identity + " at " + bad->word.str(), bad->lhs.str(), bad->rhs.str());
}

inline std::string sequence_str(const std::vector<Rational>& seq)
{
    std::string out = "[";
    for (std::size_t k = 0; k < seq.size(); ++k) out += (k ? "," : "") + seq[k].str();
    return out + "]";
}

inline void suite_additivity(VerifyReport& r, RationalSource& rng, std::size_t trials)
{
    for (std::size_t t = 0; t < trials; ++t) {
        auto a = rng.sequence(r.max_len);
        auto b = rng.sequence(r.max_len);
        HatState mu = HatState::sequence(a);
        HatState nu = HatState::sequence(b);
        auto Lmu = cumulants_from_moments(mu.moments(), r.max_len);
        auto Lnu = cumulants_from_moments(nu.moments(), r.max_len);
        auto Lconv = cumulants_from_moments(convolution_moments(mu, nu, r.max_len), r.max_len);
        for (const Word& s : words_up_to(r.max_len, 1))
            compare(r, "trial " + std::to_string(t) + " mu=" + sequence_str(a) + " nu=" + sequence_str(b) + " word " + s.str(),
                    Lconv(s), Lmu(s) + Lnu(s));
        ++r.instances;
    }
}

inline void suite_inversion(VerifyReport& r, RationalSource& rng, std::size_t trials)
{
    for (std::size_t t = 0; t < trials; ++t) {
        MomentFunction M = MomentFunction::general(rng.general(r.max_len));
        CumulantFunction L = cumulants_from_moments(M, r.max_len);
        MomentFunction back = moments_from_cumulants(L, r.max_len);
        const std::string tag = "trial " + std::to_string(t) + " word ";
        for (const Word& s : words_up_to(r.max_len, 1)) {
            compare(r, tag + s.str() + " (M -> L -> M)", back(s), M(s));
            compare(r, tag + s.str() + " (Mobius inversion)", cumulants_via_mobius(M, s), L(s));
            if (w_count(s) != 0) compare(r, tag + s.str() + " (split over C0)", moment_cumulant_split(M, L, s), M(s));
            if (s.in_z_subsemigroup()) compare(r, tag + s.str() + " (classical)", classical_moment_cumulant(M, L, s.size()), M(s));
        }
        ++r.instances;
    }
}

inline void suite_mobius(VerifyReport& r)
{
    for (const Word& s : words_up_to(r.max_len, 1)) {
        const Partition top = Partition::one_block(s);
        for (const Partition& u : *admissible_partitions(s)) {
            Integer rec = mobius_recursive(u, top);
            Integer inc = mobius_incidence_series(u, top);
            Integer closed = mobius_closed(u);
            const std::string where = s.str() + " " + u.str();
            if (rec != inc) r.fail(where + " (recursion vs incidence series)", rec.get_str(), inc.get_str());
            if (rec != closed) r.fail(where + " (recursion vs shuffle count)", rec.get_str(), closed.get_str());
            ++r.instances;
        }
    }
}

inline void suite_gf_identity(VerifyReport& r, RationalSource& rng, std::size_t trials)
{
    auto run = [&](const MomentFunction& M, const std::string& tag) {
        absorb(r, check_delta_identity(M, r.max_len), tag);
        absorb(r, check_cumulant_log_identity(M, r.max_len), tag);
        absorb(r, check_boolean_remark(M, r.max_len), tag);
        ++r.instances;
    };
    run(MomentFunction::symbolic(Family::mu), "symbolic mu");
    for (std::size_t t = 0; t < trials; ++t) {
        auto seq = rng.sequence(r.max_len);
        run(MomentFunction::sequence(seq), "sequence " + sequence_str(seq));
        run(MomentFunction::general(rng.general(r.max_len)), "general trial " + std::to_string(t));
    }
}

// Coefficients are seeded draws scaled by 4^{-(l(s)+1)} so that the norm
// hypotheses are met often enough to exercise the bounds.
inline TruncatedSeries damped_series(RationalSource& rng, std::size_t max_len, bool z_only)
{
    TruncatedSeries f(max_len);
    for (const Word& s : words_up_to(max_len, 1)) {
        if (z_only && !s.in_z_subsemigroup()) continue;
        if (rng.below(2) == 0) continue;
        f.set(s, rng.next() / pow(Rational(4), static_cast<unsigned>(s.size() + 1)));
    }
    return f;
}

inline void suite_norms(VerifyReport& r, RationalSource& rng, std::size_t trials)
{
    static const std::vector<Rational> cs{Rational(1), Rational(3, 2), Rational(2)};
    static const std::vector<Rational> qs{Rational(3, 5), Rational(3, 4), Rational(1), Rational(2)};
    std::size_t inverse_checked = 0;
    std::size_t star_checked = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::string tag = "trial " + std::to_string(t);
        TruncatedSeries f = damped_series(rng, r.max_len, false) + TruncatedSeries::unit(r.max_len);
        TruncatedSeries g = damped_series(rng, r.max_len, true);
        TruncatedSeries g1 = g + TruncatedSeries::unit(r.max_len);
        const Rational c = cs[rng.below(cs.size())];
        const Rational Q = qs[rng.below(qs.size())];

        // algebra
        TruncatedSeries inv = series_invert(f);
        TruncatedSeries unit = TruncatedSeries::unit(r.max_len);
        if (inv != series_invert_triangular(f)) r.fail(tag + " inversion formulas disagree", "factorization", "triangular");
        if (series_convolve(inv, f) != unit || series_convolve(f, inv) != unit)
            r.fail(tag + " f^{-1} is not a two-sided inverse", "f^{-1} f", "1");
        if (star_compose(star_compose(f, g1), series_invert(g1)) != f)
            r.fail(tag + " star-composition roundtrip", "(f_{*g})_{*g^{-1}}", "f");

        // truncated norm bounds
        NormBoundReport p = check_norm_bounds(f, g, Weight::geometric(c), Q);
        const std::string where = tag + " (W = " + c.str() + "^l, Q = " + Q.str() + ")";
        if (p.inverse_bound == BoundOutcome::violated) r.fail(where + " ||f^{-1}||", p.norm_f_inverse.str(), Q.str());
        if (p.star_bound == BoundOutcome::violated) r.fail(where + " ||f_{*g}||~", p.norm_star_damped.str(), p.norm_f.str());
        inverse_checked += p.inverse_bound != BoundOutcome::hypothesis_not_met;
        star_checked += p.star_bound != BoundOutcome::hypothesis_not_met;
        ++r.instances;
    }
    r.note = "norm hypotheses met: inverse bound " + std::to_string(inverse_checked) + "/" + std::to_string(trials) +
             ", star bound " + std::to_string(star_checked) + "/" + std::to_string(trials) +
             "; norms are truncated at max_len, so passes are necessary conditions only";
}

} // namespace detail

inline VerifyReport run_suite(const std::string& suite, std::size_t max_len, std::uint64_t seed, std::size_t trials)
{
    if (max_len < 2) throw std::invalid_argument("--max-len must be at least 2 for verify");
    VerifyReport r;
    r.suite = suite;
    r.seed = seed;
    r.max_len = max_len;
    RationalSource rng(seed);
    const auto start = std::chrono::steady_clock::now();
    if (suite == "additivity")
        detail::suite_additivity(r, rng, trials);
    else if (suite == "inversion")
        detail::suite_inversion(r, rng, trials);
    else if (suite == "mobius")
        detail::suite_mobius(r);
    else if (suite == "gf-identity")
        detail::suite_gf_identity(r, rng, trials);
    else if (suite == "norms")
        detail::suite_norms(r, rng, trials);
    else
        throw UnknownSuite("unknown suite '" + suite + "' (expected additivity, inversion, mobius, gf-identity, norms or all)");
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline std::vector<VerifyReport> run_verify(const std::string& suite, std::size_t max_len, std::uint64_t seed, std::size_t trials)
{
    if (suite != "all") return {run_suite(suite, max_len, seed, trials)};
    std::vector<VerifyReport> out;
    for (const auto& name : suite_names()) out.push_back(run_suite(name, max_len, seed, trials));
    return out;
}

inline bool all_passed(const std::vector<VerifyReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const VerifyReport& r) { return r.pass; });
}

// Wall time varies between runs, so it is only written when `timing` is set.
inline std::string render_reports(const std::vector<VerifyReport>& reports, Format format, bool timing)
{
    if (format == Format::json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : reports) {
            ordered_json j{{"suite", r.suite},         {"seed", r.seed},
                           {"max_len", r.max_len},     {"instances", r.instances},
                           {"pass", r.pass}};
            if (r.counterexample)
                j["counterexample"] = {{"where", r.counterexample->where},
                                       {"lhs", r.counterexample->lhs},
                                       {"rhs", r.counterexample->rhs}};
            if (!r.note.empty()) j["note"] = r.note;
            if (timing) j["wall_seconds"] = r.wall_seconds;
            arr.push_back(j);
        }
        return dump({{"pass", all_passed(reports)}, {"reports", arr}});
    }
    std::string out;
    for (const auto& r : reports) {
        out += std::string(r.pass ? "PASS" : "FAIL") + "  " + r.suite + "  instances=" + std::to_string(r.instances) +
               " max_len=" + std::to_string(r.max_len) + " seed=" + std::to_string(r.seed) + "\n";
        if (r.counterexample) {
            out += "  first counterexample: " + r.counterexample->where + "\n";
            out += "    lhs: " + r.counterexample->lhs + "\n";
            out += "    rhs: " + r.counterexample->rhs + "\n";
        }
        if (!r.note.empty()) out += "  note: " + r.note + "\n";
        if (timing) {
            std::ostringstream t;
            t.precision(3);
            t << std::fixed << r.wall_seconds;
            out += "  wall time: " + t.str() + " s\n";
        }
    }
    return out;
}

} // namespace ncft::cli
