// andrica: command-line front end for the prime-gap library.

#include "andrica/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

using andrica::cli::Command;
using andrica::cli::RunConfig;

struct RawOptions
{
    std::string limit;
    std::string top;
    std::string prime_limit;
    std::string segment;
    std::string g_source = "model";
    std::string gauss_variant = "plus-cprime";
    std::string x;
    std::string pi;
    std::string ref;
    std::string out;
    std::string gnuplot;
};

void add_common(CLI::App* sub, RunConfig& cfg, RawOptions& raw)
{
    sub->add_option("--limit", raw.limit, "Upper bound (exclusive); plain or scientific notation");
    sub->add_option("--out", raw.out, "Write output to PATH instead of standard output");
    sub->add_option("--segment", raw.segment, "Sieve segment length in odd entries");
    sub->add_option("--threads", cfg.threads, "Sieve worker threads")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    RawOptions raw;

    CLI::App app{"Prime-gap laboratory: Andrica differences, maximal gaps and heuristic predictors"};
    app.require_subcommand(1);
    app.set_version_flag("--version", andrica::cli::version);

    auto* table1 = app.add_subcommand("table1", "Consecutive-prime pairs with A_n to 9 decimals");
    auto* table2 = app.add_subcommand("table2", "Largest A_n, descending, to 7 decimals");
    auto* records = app.add_subcommand("records", "Maximal-gap records");
    auto* first_gaps = app.add_subcommand("first-gaps", "First occurrence of every gap");
    auto* verify = app.add_subcommand("verify", "Check A_n < 1 for every pair below the limit");
    auto* constants = app.add_subcommand("constants", "Twin-prime constant and derived coefficients");
    auto* predict = app.add_subcommand("predict", "Evaluate one heuristic model");
    auto* figure1 = app.add_subcommand("figure1", "R(x) at maximal gaps with the kernel prediction");
    auto* figure2 = app.add_subcommand("figure2", "R(x) with the Cramer and Shanks variants");

    for (auto* sub : {table1, table2, records, first_gaps, verify, constants, predict, figure1, figure2}) {
        add_common(sub, cfg, raw);
    }
    table2->add_option("--top", raw.top, "Number of rows");
    for (auto* sub : {records, figure1, figure2}) {
        sub->add_option("--ref", raw.ref, "Published record table to merge");
    }
    for (auto* sub : {figure1, figure2}) {
        sub->add_option("--emit-gnuplot", raw.gnuplot, "Also write a gnuplot script to PATH");
        sub->add_option("--gauss-variant", raw.gauss_variant, "plus-cprime | plus-log-cprime")
            ->check(CLI::IsMember({"plus-cprime", "plus-log-cprime"}));
    }
    figure1->add_option("--model", cfg.model, "auto | wolf_exact_pi | wolf_gauss | cramer | granville");
    figure1->add_option("--g-source", raw.g_source, "model | empirical")
        ->check(CLI::IsMember({"model", "empirical"}));
    constants->add_option("--prime-limit", raw.prime_limit, "Truncation bound of the product");

    predict->add_option("MODEL", cfg.model,
                        "g_wolf g_gauss g_cramer granville pf_wolf pf_shanks r_kernel r_shanks r_cramer "
                        "r_main_<wolf_exact_pi|wolf_gauss|cramer|granville>");
    predict->add_option("X", raw.x, "Argument");
    predict->add_option("PI", raw.pi, "pi(x) for models built on the exact prime count");
    predict->add_option("--model", cfg.model, "Same as MODEL");
    predict->add_option("--x", raw.x, "Same as X");
    predict->add_option("--pi", raw.pi, "Same as PI");
    predict->add_option("--gauss-variant", raw.gauss_variant, "plus-cprime | plus-log-cprime")
        ->check(CLI::IsMember({"plus-cprime", "plus-log-cprime"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : andrica::cli::exit_usage;
    }

    const std::pair<CLI::App*, Command> commands[] = {
        {table1, Command::table1},   {table2, Command::table2},     {records, Command::records},
        {first_gaps, Command::first_gaps}, {verify, Command::verify}, {constants, Command::constants},
        {predict, Command::predict}, {figure1, Command::figure1},   {figure2, Command::figure2},
    };
    for (const auto& [sub, cmd] : commands) {
        if (sub->parsed()) {
            cfg.command = cmd;
        }
    }

    try {
        using andrica::cli::parse_count;
        using andrica::cli::parse_real;
        if (!raw.limit.empty()) {
            cfg.limit = parse_count(raw.limit);
        }
        if (!raw.top.empty()) {
            cfg.top_k = parse_count(raw.top);
        }
        if (!raw.prime_limit.empty()) {
            cfg.prime_limit = parse_count(raw.prime_limit);
        } else if (cfg.command == Command::constants && cfg.limit) {
            cfg.prime_limit = *cfg.limit;
        }
        if (!raw.segment.empty()) {
            cfg.segment_length = static_cast<std::size_t>(parse_count(raw.segment));
        }
        if (!raw.x.empty()) {
            cfg.x = parse_real(raw.x);
        }
        if (!raw.pi.empty()) {
            cfg.pi_x = parse_real(raw.pi);
        }
        if (!raw.ref.empty()) {
            cfg.reference_path = raw.ref;
        }
        if (!raw.out.empty()) {
            cfg.output_path = raw.out;
        }
        if (!raw.gnuplot.empty()) {
            cfg.gnuplot_path = raw.gnuplot;
        }
        cfg.g_source = raw.g_source == "empirical" ? andrica::cli::GSource::empirical : andrica::cli::GSource::model;
        cfg.gauss_variant = raw.gauss_variant == "plus-log-cprime" ? andrica::GaussVariant::plus_log_c_prime
                                                                   : andrica::GaussVariant::plus_c_prime;
    } catch (const andrica::cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return andrica::cli::exit_usage;
    }

    return andrica::cli::execute(cfg, std::cout, std::cerr);
}
