// ncft: command-line front end for the ncft library.
//
// Exit codes: 0 success / all checks pass, 1 a verification failed,
// 2 usage, parse or input error.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncft/cli.hpp"

namespace {

constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct Common {
    std::string format = "table";
};

void add_format(CLI::App* cmd, Common& common)
{
    cmd->add_option("--format,--out", common.format, "Output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    using namespace ncft;
    CLI::App app{"Admissible cumulants, filtered convolution and the semigroup algebra over {z,w}"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common common;

    // cumulants
    std::string cum_moments;
    std::size_t cum_max_len = 3;
    std::string cum_word;
    auto* cum = app.add_subcommand("cumulants", "Moments and admissible cumulants per word");
    cum->add_option("--moments", cum_moments, "Moment spec file, or mu / nu for a symbolic hat state")->required();
    cum->add_option("--max-len", cum_max_len, "Longest word")->capture_default_str();
    cum->add_option("--word", cum_word, "Report a single word instead of all words up to --max-len");
    add_format(cum, common);

    // convolve
    std::string conv_mu = "mu";
    std::string conv_nu = "nu";
    std::vector<std::string> conv_words;
    std::optional<std::size_t> conv_max_len;
    std::string conv_restrict;
    bool conv_classes = false;
    auto* conv = app.add_subcommand("convolve", "Filtered convolution moments of two hat states");
    conv->add_option("--mu", conv_mu, "First hat state: spec file or mu / nu")->capture_default_str();
    conv->add_option("--nu", conv_nu, "Second hat state: spec file or mu / nu")->capture_default_str();
    conv->add_option("--word", conv_words, "Target word (repeatable)");
    conv->add_option("--max-len", conv_max_len, "All words of length 1..N");
    conv->add_option("--restrict", conv_restrict, "Only powers of one letter")->check(CLI::IsMember({"z", "w"}));
    conv->add_flag("--classes", conv_classes, "Group words of each length by equal moment");
    add_format(conv, common);

    // mobius
    std::string mob_word;
    auto* mob = app.add_subcommand("mobius", "Shuffle counts and Möbius values over AP(s)");
    mob->add_option("--word", mob_word, "Parent word")->required();
    add_format(mob, common);

    // gf
    std::string gf_moments;
    std::size_t gf_max_len = 3;
    auto* gf = app.add_subcommand("gf", "Moment and cumulant generating-function coefficients");
    gf->add_option("--moments", gf_moments, "Moment spec file, or mu / nu")->required();
    gf->add_option("--max-len", gf_max_len, "Truncation length")->capture_default_str();
    add_format(gf, common);

    // verify
    std::string ver_suite = "all";
    std::size_t ver_max_len = 5;
    std::uint64_t ver_seed = 1;
    std::size_t ver_trials = 20;
    bool ver_timing = false;
    auto* ver = app.add_subcommand("verify", "Run identity and property suites");
    ver->add_option("--suite", ver_suite, "additivity | inversion | mobius | gf-identity | norms | all")->capture_default_str();
    ver->add_option("--max-len", ver_max_len, "Longest word checked")->capture_default_str();
    ver->add_option("--seed", ver_seed, "Seed for random instances")->capture_default_str();
    ver->add_option("--trials", ver_trials, "Random instances per suite")->capture_default_str();
    ver->add_flag("--timing", ver_timing, "Include wall time in the report (stdout is then not byte-stable)");
    add_format(ver, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        const cli::Format format = cli::parse_format(common.format);
        if (*cum) {
            std::optional<Word> only;
            if (!cum_word.empty()) only = Word::parse(cum_word);
            std::cout << cli::cmd_cumulants(cli::load_moment_spec(cum_moments), cum_max_len, only, format);
        } else if (*conv) {
            cli::ConvolveRequest req;
            for (const auto& w : conv_words) req.words.push_back(Word::parse(w));
            req.max_len = conv_max_len;
            if (!conv_restrict.empty()) req.restrict_to = conv_restrict == "z" ? Letter::z : Letter::w;
            req.classes = conv_classes;
            HatState mu(cli::load_moment_spec(conv_mu));
            HatState nu(cli::load_moment_spec(conv_nu));
            std::cout << cli::cmd_convolve(mu, nu, req, format);
        } else if (*mob) {
            std::cout << cli::cmd_mobius(Word::parse(mob_word), format);
        } else if (*gf) {
            std::cout << cli::cmd_gf(cli::load_moment_spec(gf_moments), gf_max_len, format);
        } else if (*ver) {
            auto reports = cli::run_verify(ver_suite, ver_max_len, ver_seed, ver_trials);
            std::cout << cli::render_reports(reports, format, ver_timing);
            if (!ver_timing)
                for (const auto& r : reports)
                    std::cerr << r.suite << ": " << std::fixed << std::setprecision(3) << r.wall_seconds << " s\n";
            return cli::all_passed(reports) ? 0 : exit_fail;
        }
    } catch (const ncft::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return 0;
}
