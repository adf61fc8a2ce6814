#include "andrica/commands.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace andrica;
using namespace andrica::cli;

namespace {

struct Output
{
    int code = 0;
    std::string out;
    std::string err;
};

Output run_cfg(const RunConfig& cfg)
{
    std::ostringstream out;
    std::ostringstream err;
    Output o;
    o.code = execute(cfg, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

std::vector<std::string> data_rows(const std::string& csv)
{
    std::vector<std::string> rows;
    bool seen_columns = false;
    for (const auto& l : lines(csv)) {
        if (l.starts_with("#")) {
            continue;
        }
        if (!seen_columns) {
            seen_columns = true;
            continue;
        }
        rows.push_back(l);
    }
    return rows;
}

RunConfig make(Command c, std::optional<u64> limit = std::nullopt)
{
    RunConfig cfg;
    cfg.command = c;
    cfg.limit = limit;
    return cfg;
}

// Runs the command-line binary and captures stdout and the exit status.
Output run_binary(const std::string& args)
{
    Output o;
    const std::string cmd = std::string(ANDRICA_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        o.code = -1;
        return o;
    }
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) {
        o.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

} // namespace

TEST(ParseCount, PlainAndScientific)
{
    EXPECT_EQ(parse_count("114"), 114u);
    EXPECT_EQ(parse_count("1e9"), 1'000'000'000u);
    EXPECT_EQ(parse_count("1E6"), 1'000'000u);
    EXPECT_EQ(parse_count("2.5e6"), 2'500'000u);
    EXPECT_EQ(parse_count("1e+3"), 1000u);
    EXPECT_EQ(parse_count("1.8e19"), 18'000'000'000'000'000'000ull);
    EXPECT_THROW(parse_count("2.55e1"), UsageError);
    EXPECT_THROW(parse_count("1e20"), UsageError);
    EXPECT_THROW(parse_count("-5"), UsageError);
    EXPECT_THROW(parse_count("abc"), UsageError);
    EXPECT_THROW(parse_count("12x"), UsageError);
    EXPECT_THROW(parse_count("1e-3"), UsageError);
}

TEST(Formatting, SignificantAndFixed)
{
    EXPECT_EQ(format_sig(r_kernel(9)), "0.579709161117");
    EXPECT_EQ(format_sig(std::nan("")), "nan");
    EXPECT_EQ(format_fixed(0.6392818568, 7), "0.6392819");
}

TEST(Table1, ReproducesPublishedRows)
{
    const auto o = run_cfg(make(Command::table1, 114));
    ASSERT_EQ(o.code, 0) << o.err;
    const auto all = lines(o.out);
    ASSERT_GE(all.size(), 2u);
    EXPECT_EQ(all[0], "# command=table1 version=1.0.0 limit=114");
    EXPECT_EQ(all[1], "p_n,p_n1,d_n,A_n");
    const auto rows = data_rows(o.out);
    ASSERT_EQ(rows.size(), 29u);
    EXPECT_EQ(rows.front(), "2,3,1,0.317837245");
    EXPECT_EQ(rows[3], "7,11,4,0.670873479");
    EXPECT_EQ(rows.back(), "109,113,4,0.189839304");

    const auto tiny = data_rows(run_cfg(make(Command::table1, 4)).out);
    ASSERT_EQ(tiny.size(), 1u);
    EXPECT_EQ(tiny[0], "2,3,1,0.317837245");
}

TEST(Table2, ReproducesPublishedRows)
{
    auto cfg = make(Command::table2, 250);
    cfg.top_k = 10;
    const auto rows = data_rows(run_cfg(cfg).out);
    const std::vector<std::string> expected = {
        "4,7,11,4,0.6708735",     "30,113,127,14,0.6392819", "9,23,29,6,0.5893333",  "6,13,17,4,0.5175544",
        "11,31,37,6,0.5149982",   "2,3,5,2,0.5040172",       "8,19,23,4,0.4369326",  "15,47,53,6,0.4244553",
        "46,199,211,12,0.4191031", "34,139,149,10,0.4167295"};
    EXPECT_EQ(rows, expected);

    cfg.top_k = 1;
    const auto one = data_rows(run_cfg(cfg).out);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_TRUE(one[0].starts_with("4,"));

    cfg.top_k = 0;
    EXPECT_EQ(run_cfg(cfg).code, exit_usage);
}

TEST(Records, ComputedAndMerged)
{
    auto rows = data_rows(run_cfg(make(Command::records, 130)).out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_TRUE(rows.back().starts_with("14,113,127,0.639281856"));

    auto cfg = make(Command::records, 1'000'000);
    cfg.reference_path = ANDRICA_FIXTURE;
    const auto merged = run_cfg(cfg);
    ASSERT_EQ(merged.code, 0) << merged.err;
    EXPECT_EQ(data_rows(merged.out).size(), 75u);
    EXPECT_NE(merged.out.find("source=merged"), std::string::npos);
}

TEST(FirstGaps, Columns)
{
    const auto o = run_cfg(make(Command::first_gaps, 1000));
    const auto rows = data_rows(o.out);
    EXPECT_NE(o.out.find("d,p_f,A,pf_wolf,pf_shanks\n"), std::string::npos);
    ASSERT_GE(rows.size(), 6u);
    EXPECT_TRUE(rows[0].starts_with("1,2,"));
    EXPECT_TRUE(rows[2].starts_with("4,7,0.670873479"));
    bool found14 = false;
    for (const auto& r : rows) {
        found14 = found14 || r.starts_with("14,113,");
    }
    EXPECT_TRUE(found14);
}

TEST(Verify, KeyValueLine)
{
    const auto o = run_cfg(make(Command::verify, 1000));
    EXPECT_EQ(o.out, "all_below_one=true max_A=0.670873479 at=(7,11) count=167\n");
    const auto edge = run_cfg(make(Command::verify, 3));
    EXPECT_EQ(edge.out, "all_below_one=true max_A=0.000000000 at=none count=0\n");
    EXPECT_EQ(run_cfg(make(Command::verify, 2)).code, exit_usage);
}

TEST(Constants, KeyValueLines)
{
    auto cfg = make(Command::constants);
    cfg.prime_limit = 1'000'000;
    const auto o = run_cfg(cfg);
    ASSERT_EQ(o.code, 0);
    const auto all = lines(o.out);
    ASSERT_EQ(all.size(), 6u);
    EXPECT_EQ(all[0], "prime_limit=1000000");
    EXPECT_TRUE(all[1].starts_with("C2=1.320323"));
    EXPECT_NEAR(std::stod(all[1].substr(3)), 1.32032363169, 1e-6);
    EXPECT_TRUE(all[4].starts_with("granville_coeff=1.12291"));
    EXPECT_TRUE(all[5].starts_with("tail_bound="));
}

TEST(Predict, Models)
{
    auto cfg = make(Command::predict);
    cfg.model = "r_kernel";
    cfg.x = 9;
    EXPECT_EQ(run_cfg(cfg).out, "0.579709161117\n");

    cfg.model = "r_cramer";
    cfg.x = std::exp(1.0);
    EXPECT_EQ(run_cfg(cfg).out, "0.303265329856\n");

    cfg.model = "g_wolf";
    cfg.x = 1e6;
    EXPECT_EQ(run_cfg(cfg).out, "114.703854564\n");
    cfg.pi_x = 78498;
    EXPECT_EQ(run_cfg(cfg).out, "114.703854564\n");

    cfg.model = "r_main_cramer";
    cfg.pi_x.reset();
    EXPECT_EQ(run_cfg(cfg).out, format_sig(r_cramer_form(1e6)) + "\n");

    cfg.model = "r_main_wolf_exact_pi";
    EXPECT_EQ(run_cfg(cfg).out, format_sig(r_kernel(g_wolf(1e6, 78498))) + "\n");

    cfg.model = "granville";
    cfg.x = std::exp(1.0);
    EXPECT_EQ(run_cfg(cfg).out, "1.12291896713\n");

    cfg.model = "no_such_model";
    EXPECT_EQ(run_cfg(cfg).code, exit_usage);

    cfg.model = "g_gauss";
    cfg.x = 2.0;
    EXPECT_EQ(run_cfg(cfg).code, exit_data);
}

TEST(Figure1, FixtureRows)
{
    auto cfg = make(Command::figure1, 1'000'000);
    cfg.reference_path = ANDRICA_FIXTURE;
    const auto o = run_cfg(cfg);
    ASSERT_EQ(o.code, 0) << o.err;
    const auto rows = data_rows(o.out);
    ASSERT_EQ(rows.size(), 75u);
    EXPECT_TRUE(rows[5].starts_with("113,0.639281856"));
    EXPECT_NE(o.out.find("# R_predicted: wolf_exact_pi for x < 1000000, wolf_gauss for x >= 1000000"),
              std::string::npos);
    // x = 113 uses the exact count pi(113) = 29.
    EXPECT_EQ(rows[5], "113," + format_sig(andrica_diff(113, 127)) + "," + format_sig(r_kernel(g_wolf(113, 29))));
    // Beyond the sieve the Gauss model takes over.
    const double x = 1425172824437699411.0;
    EXPECT_TRUE(rows.back().ends_with("," + format_sig(r_kernel(g_gauss(x)))));
}

TEST(Figure1, EmptyReferenceAndEmpiricalGap)
{
    auto cfg = make(Command::figure1, 130);
    auto rows = data_rows(run_cfg(cfg).out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], "2,0.317837245196,nan");

    cfg.g_source = GSource::empirical;
    rows = data_rows(run_cfg(cfg).out);
    EXPECT_EQ(rows[5], "113," + format_sig(andrica_diff(113, 127)) + "," + format_sig(r_kernel(14)));

    cfg.g_source = GSource::model;
    cfg.model = "cramer";
    rows = data_rows(run_cfg(cfg).out);
    EXPECT_EQ(rows[5], "113," + format_sig(andrica_diff(113, 127)) + "," + format_sig(r_cramer_form(113)));

    cfg.model = "bogus";
    EXPECT_EQ(run_cfg(cfg).code, exit_usage);
}

TEST(Figure2, Columns)
{
    auto cfg = make(Command::figure2, 1'000'000);
    cfg.reference_path = ANDRICA_FIXTURE;
    const auto o = run_cfg(cfg);
    ASSERT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("x,R_empirical,R_cramer,R_shanks\n"), std::string::npos);
    const auto rows = data_rows(o.out);
    ASSERT_EQ(rows.size(), 75u);
    EXPECT_EQ(rows[5], "113," + format_sig(andrica_diff(113, 127)) + "," + format_sig(r_cramer_form(113)) + "," +
                           format_sig(r_shanks(g_gauss(113))));
    // x = 2 lies below the Gauss model's domain.
    EXPECT_TRUE(rows[0].ends_with(",nan"));
}

TEST(Figures, DeterministicAcrossThreadsAndSegments)
{
    for (Command c : {Command::figure1, Command::figure2, Command::table1}) {
        auto cfg = make(c, 2'000'000);
        cfg.reference_path = c == Command::table1 ? std::nullopt : std::optional<std::filesystem::path>(ANDRICA_FIXTURE);
        const auto base = run_cfg(cfg).out;
        cfg.threads = 3;
        cfg.segment_length = 4096;
        EXPECT_EQ(run_cfg(cfg).out, base);
    }
}

TEST(Errors, ExitCodes)
{
    auto cfg = make(Command::figure1, 1000);
    cfg.reference_path = "/nonexistent/table.txt";
    auto o = run_cfg(cfg);
    EXPECT_EQ(o.code, exit_io);
    EXPECT_NE(o.err.find("/nonexistent/table.txt"), std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "andrica_commands_test";
    std::filesystem::create_directories(dir);
    const auto corrupt = dir / "corrupt.txt";
    std::ofstream(corrupt) << "1 2\n2 3\n4 7\n14 115\n";
    cfg.reference_path = corrupt;
    EXPECT_EQ(run_cfg(cfg).code, exit_data);

    const auto conflicting = dir / "conflict.txt";
    std::ofstream(conflicting) << "1 2\n2 3\n4 7\n6 23\n8 89\n10 139\n";
    cfg.reference_path = conflicting;
    o = run_cfg(cfg);
    EXPECT_EQ(o.code, exit_data);
    EXPECT_NE(o.err.find("gap 10"), std::string::npos);

    auto out_cfg = make(Command::table1, 20);
    out_cfg.output_path = "/nonexistent/dir/out.csv";
    o = run_cfg(out_cfg);
    EXPECT_EQ(o.code, exit_io);
    EXPECT_NE(o.err.find("/nonexistent/dir/out.csv"), std::string::npos);
}

TEST(Output, FileAndGnuplotScript)
{
    const auto dir = std::filesystem::temp_directory_path() / "andrica_commands_test";
    std::filesystem::create_directories(dir);
    auto cfg = make(Command::figure2, 10'000);
    cfg.output_path = dir / "fig2.csv";
    cfg.gnuplot_path = dir / "fig2.gp";
    const auto o = run_cfg(cfg);
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(o.out.empty());
    std::ifstream csv(*cfg.output_path);
    std::stringstream body;
    body << csv.rdbuf();
    EXPECT_TRUE(body.str().starts_with("# command=figure2"));
    std::ifstream gp(*cfg.gnuplot_path);
    std::stringstream script;
    script << gp.rdbuf();
    EXPECT_NE(script.str().find(cfg.output_path->string()), std::string::npos);
    EXPECT_NE(script.str().find("using 1:4"), std::string::npos);

    auto wrong = make(Command::table1, 20);
    wrong.gnuplot_path = dir / "t1.gp";
    EXPECT_EQ(run_cfg(wrong).code, exit_usage);
}

TEST(Binary, SubcommandsAndExitCodes)
{
    auto o = run_binary("table1 --limit 114");
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(data_rows(o.out).size(), 29u);

    o = run_binary("predict r_kernel 9");
    EXPECT_EQ(o.out, "0.579709161117\n");

    o = run_binary("verify --limit 1e3");
    EXPECT_EQ(o.out, "all_below_one=true max_A=0.670873479 at=(7,11) count=167\n");

    o = run_binary("figure1 --ref " + std::string(ANDRICA_FIXTURE) + " --threads 2");
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(data_rows(o.out).size(), 75u);

    EXPECT_EQ(run_binary("").code, exit_usage);
    EXPECT_EQ(run_binary("table1 --limit banana").code, exit_usage);
    EXPECT_EQ(run_binary("predict not_a_model 3").code, exit_usage);
    EXPECT_EQ(run_binary("figure1 --ref /nonexistent").code, exit_io);
    EXPECT_EQ(run_binary("--help").code, 0);
}
