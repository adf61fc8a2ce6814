/// @file commands.hpp
/// @brief The command layer behind the `andrica` tool: every subcommand renders its
/// CSV or key=value output into a stream, so it can be driven in-process.
#pragma once

#include "andrica/datasets.hpp"
#include "andrica/gap_scanner.hpp"
#include "andrica/heuristics.hpp"
#include "andrica/prime_engine.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace andrica::cli {

inline constexpr const char* version = "1.0.0";

enum class Command { table1, table2, records, first_gaps, verify, constants, predict, figure1, figure2 };

inline const char* to_string(Command c)
{
    switch (c) {
    case Command::table1: return "table1";
    case Command::table2: return "table2";
    case Command::records: return "records";
    case Command::first_gaps: return "first-gaps";
    case Command::verify: return "verify";
    case Command::constants: return "constants";
    case Command::predict: return "predict";
    case Command::figure1: return "figure1";
    case Command::figure2: return "figure2";
    }
    return "?";
}

enum class GSource { model, empirical };

/// Exit codes of the tool.
enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_data = 3, exit_io = 4 };

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    Command command = Command::table1;
    std::optional<u64> limit;
    u64 top_k = 10;
    std::string model;
    std::optional<std::filesystem::path> reference_path;
    std::optional<std::filesystem::path> output_path;
    std::optional<std::filesystem::path> gnuplot_path;
    GSource g_source = GSource::model;
    std::size_t segment_length = std::size_t{1} << 20;
    unsigned threads = 1;
    u64 prime_limit = 1'000'000;
    std::optional<double> x;
    std::optional<double> pi_x;
    GaussVariant gauss_variant = GaussVariant::plus_c_prime;
};

// ---------------------------------------------------------------------------
// Number parsing and formatting

/// Non-negative integer in plain or scientific notation ("1000000", "1e9", "2.5e6").
/// The value must be an exact integer that fits in 64 bits.
inline u64 parse_count(std::string_view s)
{
    const std::string text(s);
    auto fail = [&]() -> UsageError { return UsageError("not a non-negative integer: '" + text + "'"); };
    std::size_t i = 0;
    u128 mantissa = 0;
    int frac_digits = 0;
    bool any_digit = false;
    bool in_frac = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            any_digit = true;
            if (mantissa > (u128{1} << 100)) {
                throw fail();
            }
            mantissa = mantissa * 10 + static_cast<unsigned>(c - '0');
            if (in_frac) {
                ++frac_digits;
            }
        } else if (c == '.' && !in_frac) {
            in_frac = true;
        } else {
            break;
        }
    }
    if (!any_digit) {
        throw fail();
    }
    int exponent = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') {
            throw fail();
        }
        ++i;
        if (i < s.size() && s[i] == '+') {
            ++i;
        }
        auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), exponent);
        if (ec != std::errc{} || ptr != s.data() + s.size() || exponent < 0 || exponent > 40) {
            throw fail();
        }
    }
    int shift = exponent - frac_digits;
    for (; shift < 0; ++shift) {
        if (mantissa % 10 != 0) {
            throw fail();
        }
        mantissa /= 10;
    }
    for (; shift > 0; --shift) {
        mantissa *= 10;
        if (mantissa > std::numeric_limits<u64>::max()) {
            throw fail();
        }
    }
    if (mantissa > std::numeric_limits<u64>::max()) {
        throw fail();
    }
    return static_cast<u64>(mantissa);
}

inline double parse_real(std::string_view s)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw UsageError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

/// %.<digits>g; "nan" for values outside a model's domain.
inline std::string format_sig(double v, int digits = 12)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string format_fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

namespace detail {

inline SieveOptions sieve_options(const RunConfig& cfg)
{
    if (cfg.threads < 1) {
        throw UsageError("--threads must be at least 1");
    }
    if (cfg.segment_length < 64) {
        throw UsageError("--segment must be at least 64");
    }
    return {cfg.segment_length, cfg.threads, true};
}

inline u64 limit_or(const RunConfig& cfg, u64 fallback)
{
    u64 limit = cfg.limit.value_or(fallback);
    if (limit < 3) {
        throw UsageError("--limit must be at least 3");
    }
    return limit;
}

inline void header(std::ostream& out, const RunConfig& cfg, const std::string& config)
{
    out << "# command=" << to_string(cfg.command) << " version=" << version;
    if (!config.empty()) {
        out << ' ' << config;
    }
    out << '\n';
}

// Evaluates f, mapping domain errors to NaN.
template <typename F>
double guarded(F&& f)
{
    try {
        return f();
    } catch (const std::domain_error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

inline GapRecordTable figure_records(const RunConfig& cfg, u64 limit, std::string& ref_note)
{
    auto computed = max_gap_records(limit, sieve_options(cfg));
    if (!cfg.reference_path) {
        ref_note = "ref=none";
        return computed;
    }
    auto ref = load_reference_table(*cfg.reference_path);
    ref_note = "ref=" + cfg.reference_path->string();
    return merge_records(computed, ref);
}

inline void table1(const RunConfig& cfg, std::ostream& out)
{
    const u64 limit = limit_or(cfg, 114);
    header(out, cfg, "limit=" + std::to_string(limit));
    out << "p_n,p_n1,d_n,A_n\n";
    for_each_gap(limit, [&](const PrimeGap& g, u64) {
        out << g.p << ',' << g.q << ',' << g.d << ',' << format_fixed(andrica_diff(g), 9) << '\n';
    }, sieve_options(cfg));
}

inline void table2(const RunConfig& cfg, std::ostream& out)
{
    const u64 limit = limit_or(cfg, 250);
    if (cfg.top_k < 1) {
        throw UsageError("--top must be at least 1");
    }
    header(out, cfg, "limit=" + std::to_string(limit) + " top=" + std::to_string(cfg.top_k));
    out << "n,p_n,p_n1,d_n,A_n\n";
    for (const auto& pt : top_andrica(limit, cfg.top_k, sieve_options(cfg))) {
        out << pt.n << ',' << pt.gap.p << ',' << pt.gap.q << ',' << pt.gap.d << ',' << format_fixed(pt.a, 7) << '\n';
    }
}

inline void records(const RunConfig& cfg, std::ostream& out)
{
    const u64 limit = limit_or(cfg, 1'000'000);
    std::string ref_note;
    auto table = figure_records(cfg, limit, ref_note);
    header(out, cfg, "limit=" + std::to_string(limit) + " " + ref_note + " source=" + to_string(table.source));
    out << "g,p_L,p_L1,R\n";
    for (const auto& r : table.records) {
        out << r.g << ',' << r.p_L << ',' << r.p_L1 << ',' << format_sig(r.r) << '\n';
    }
}

inline void first_gaps(const RunConfig& cfg, std::ostream& out)
{
    const u64 limit = limit_or(cfg, 1'000'000);
    header(out, cfg, "limit=" + std::to_string(limit));
    out << "d,p_f,A,pf_wolf,pf_shanks\n";
    for (const auto& [d, fo] : first_occurrences(limit, sieve_options(cfg))) {
        const double dd = static_cast<double>(d);
        out << d << ',' << fo.p_f << ',' << format_sig(andrica_diff(fo.p_f, fo.p_f + d)) << ','
            << format_sig(pf_wolf(dd)) << ',' << format_sig(pf_shanks(dd)) << '\n';
    }
}

inline void verify(const RunConfig& cfg, std::ostream& out)
{
    const u64 limit = limit_or(cfg, 1'000'000);
    const auto rep = verify_andrica(limit, sieve_options(cfg));
    out << "all_below_one=" << (rep.all_below_one ? "true" : "false") << " max_A=" << format_fixed(rep.max_a, 9)
        << " at=";
    if (rep.argmax_pair) {
        out << '(' << rep.argmax_pair->p << ',' << rep.argmax_pair->q << ')';
    } else {
        out << "none";
    }
    out << " count=" << rep.count << '\n';
}

inline void constants_cmd(const RunConfig& cfg, std::ostream& out)
{
    const auto est = twin_constant(cfg.prime_limit, sieve_options(cfg));
    const auto k = HeuristicConstants::from_twin_constant(est.value);
    out << "prime_limit=" << est.prime_limit << '\n'
        << "C2=" << format_sig(k.C2) << '\n'
        << "c_prime=" << format_sig(k.c_prime) << '\n'
        << "euler_gamma=" << format_sig(k.euler_gamma) << '\n'
        << "granville_coeff=" << format_sig(k.granville_coeff) << '\n'
        << "tail_bound=" << format_sig(est.tail_bound) << '\n';
}

// pi(x) = #{p < x} for a real x, computed exactly when small enough.
inline double exact_pi_for(double x, const RunConfig& cfg)
{
    if (cfg.pi_x) {
        return *cfg.pi_x;
    }
    if (!(x >= 0.0) || x > 1e10) {
        throw UsageError("this model needs pi(x); pass it with --pi (exact counting is limited to x <= 1e10)");
    }
    return static_cast<double>(prime_count(static_cast<u64>(std::ceil(x)), sieve_options(cfg)));
}

inline void predict(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.model.empty() || !cfg.x) {
        throw UsageError("predict needs a model name and x");
    }
    const std::string& m = cfg.model;
    const double x = *cfg.x;
    const auto k = HeuristicConstants::standard();
    double v = 0.0;
    if (m == "g_wolf") {
        v = g_wolf(x, exact_pi_for(x, cfg), k);
    } else if (m == "g_gauss") {
        v = g_gauss(x, k, cfg.gauss_variant);
    } else if (m == "g_cramer") {
        v = g_cramer(x);
    } else if (m == "granville") {
        v = granville_bound(x, k);
    } else if (m == "pf_wolf") {
        v = pf_wolf(x);
    } else if (m == "pf_shanks") {
        v = pf_shanks(x);
    } else if (m == "r_kernel") {
        v = r_kernel(x);
    } else if (m == "r_shanks") {
        v = r_shanks(x);
    } else if (m == "r_cramer" || m == "r_cramer_form") {
        v = r_cramer_form(x);
    } else if (m.starts_with("r_main_")) {
        auto kind = gap_model_from_string(std::string_view(m).substr(7));
        if (!kind) {
            throw UsageError("unknown gap model in '" + m + "'");
        }
        GapModel model{*kind, k, cfg.gauss_variant};
        std::optional<double> pi;
        if (*kind == GapModelKind::wolf_exact_pi) {
            pi = exact_pi_for(x, cfg);
        }
        v = r_main(x, model, pi);
    } else {
        throw UsageError("unknown model '" + m + "'");
    }
    out << format_sig(v) << '\n';
}

inline void figure1(const RunConfig& cfg, std::ostream& out)
{
    const u64 limit = limit_or(cfg, 1'000'000);
    const std::string model_name = cfg.model.empty() ? "auto" : cfg.model;
    std::optional<GapModelKind> fixed_kind;
    if (model_name != "auto") {
        fixed_kind = gap_model_from_string(model_name);
        if (!fixed_kind) {
            throw UsageError("unknown gap model '" + model_name + "'");
        }
    }
    std::string ref_note;
    const auto table = figure_records(cfg, limit, ref_note);

    std::vector<u64> in_range;
    for (const auto& r : table.records) {
        if (r.p_L < limit) {
            in_range.push_back(r.p_L);
        }
    }
    const bool need_pi = cfg.g_source == GSource::model &&
                         (!fixed_kind || *fixed_kind == GapModelKind::wolf_exact_pi);
    const auto pis = need_pi ? prime_counts_at(in_range, sieve_options(cfg)) : std::vector<u64>{};

    header(out, cfg, "limit=" + std::to_string(limit) + " " + ref_note + " model=" + model_name +
                     " g_source=" + (cfg.g_source == GSource::model ? "model" : "empirical") +
                     " records=" + std::to_string(table.records.size()));
    if (cfg.g_source == GSource::empirical) {
        out << "# R_predicted = kernel applied to the observed record gap\n";
    } else if (!fixed_kind) {
        out << "# R_predicted: wolf_exact_pi for x < " << limit << ", wolf_gauss for x >= " << limit << '\n';
    } else {
        out << "# R_predicted: " << model_name << '\n';
    }
    out << "x,R_empirical,R_predicted\n";
    const auto k = HeuristicConstants::standard();
    std::size_t idx = 0;
    for (const auto& r : table.records) {
        const double x = static_cast<double>(r.p_L);
        const bool sieved = r.p_L < limit;
        const double pi = sieved && need_pi ? static_cast<double>(pis[idx]) : 0.0;
        if (sieved) {
            ++idx;
        }
        double predicted = 0.0;
        if (cfg.g_source == GSource::empirical) {
            predicted = r_kernel(static_cast<double>(r.g));
        } else {
            GapModelKind kind = fixed_kind ? *fixed_kind
                                           : (sieved ? GapModelKind::wolf_exact_pi : GapModelKind::wolf_gauss);
            GapModel model{kind, k, cfg.gauss_variant};
            predicted = guarded([&] {
                if (kind == GapModelKind::wolf_exact_pi && !sieved) {
                    throw std::domain_error("pi(x) not available beyond the sieve limit");
                }
                return r_main(x, model, kind == GapModelKind::wolf_exact_pi ? std::optional<double>(pi)
                                                                            : std::nullopt);
            });
        }
        out << r.p_L << ',' << format_sig(r.r) << ',' << format_sig(predicted) << '\n';
    }
}

inline void figure2(const RunConfig& cfg, std::ostream& out)
{
    const u64 limit = limit_or(cfg, 1'000'000);
    std::string ref_note;
    const auto table = figure_records(cfg, limit, ref_note);
    header(out, cfg, "limit=" + std::to_string(limit) + " " + ref_note +
                     " records=" + std::to_string(table.records.size()));
    out << "# R_cramer = ln^1.5(x)/(2 sqrt x); R_shanks = r_shanks(g_gauss(x))\n";
    out << "x,R_empirical,R_cramer,R_shanks\n";
    const auto k = HeuristicConstants::standard();
    for (const auto& r : table.records) {
        const double x = static_cast<double>(r.p_L);
        const double cramer = guarded([&] { return r_cramer_form(x); });
        const double shanks = guarded([&] { return r_shanks(g_gauss(x, k, cfg.gauss_variant)); });
        out << r.p_L << ',' << format_sig(r.r) << ',' << format_sig(cramer) << ',' << format_sig(shanks) << '\n';
    }
}

} // namespace detail

/// Writes a gnuplot script that renders a figure CSV.
inline void write_gnuplot_script(std::ostream& out, Command cmd, const std::string& data_path)
{
    out << "# gnuplot script for " << to_string(cmd) << " data\n"
        << "set datafile separator ','\n"
        << "set datafile commentschars '#'\n"
        << "set logscale x\n"
        << "set logscale y\n"
        << "set format x '10^{%L}'\n"
        << "set xlabel 'x'\n"
        << "set ylabel 'R(x)'\n"
        << "set key top right\n"
        << "data = '" << data_path << "'\n";
    if (cmd == Command::figure1) {
        out << "plot data using 1:2 with points pt 6 title columnheader(2), \\\n"
            << "     data using 1:3 with lines lw 2 title columnheader(3)\n";
    } else {
        out << "plot data using 1:2 with points pt 6 title columnheader(2), \\\n"
            << "     data using 1:3 with lines lw 2 lc rgb 'red' title columnheader(3), \\\n"
            << "     data using 1:4 with lines lw 2 lc rgb 'dark-green' title columnheader(4)\n";
    }
}

/// Runs one command, writing its output to `out`.
inline void run(const RunConfig& cfg, std::ostream& out)
{
    switch (cfg.command) {
    case Command::table1: detail::table1(cfg, out); break;
    case Command::table2: detail::table2(cfg, out); break;
    case Command::records: detail::records(cfg, out); break;
    case Command::first_gaps: detail::first_gaps(cfg, out); break;
    case Command::verify: detail::verify(cfg, out); break;
    case Command::constants: detail::constants_cmd(cfg, out); break;
    case Command::predict: detail::predict(cfg, out); break;
    case Command::figure1: detail::figure1(cfg, out); break;
    case Command::figure2: detail::figure2(cfg, out); break;
    }
}

/// Runs a command with file handling and error mapping; returns the exit code.
inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        std::ostringstream buffer;
        run(cfg, buffer);
        if (cfg.output_path) {
            std::ofstream file(*cfg.output_path, std::ios::binary);
            if (!file || !(file << buffer.str()) || !file.flush()) {
                throw IoError("cannot write '" + cfg.output_path->string() + "'");
            }
        } else {
            out << buffer.str();
        }
        if (cfg.gnuplot_path) {
            if (cfg.command != Command::figure1 && cfg.command != Command::figure2) {
                throw UsageError("--emit-gnuplot applies to figure1 and figure2 only");
            }
            std::ofstream script(*cfg.gnuplot_path, std::ios::binary);
            const std::string data = cfg.output_path ? cfg.output_path->string()
                                                     : std::string(to_string(cfg.command)) + ".csv";
            write_gnuplot_script(script, cfg.command, data);
            if (!script.flush()) {
                throw IoError("cannot write '" + cfg.gnuplot_path->string() + "'");
            }
        }
        return exit_ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const RangeTooLarge& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const ParseError& e) {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const ValidationError& e) {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const ConsistencyError& e) {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::domain_error& e) {
        err << "data error: " << e.what() << '\n';
        return exit_data;
    }
}

} // namespace andrica::cli
