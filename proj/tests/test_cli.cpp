#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& cmd_args) {
    std::string cmd = std::string(NORMONE_BIN) + " " + cmd_args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("field-info on builtin field") {
    auto r = run("field-info --field builtin:sqrt2 --out cli_out_info");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0.8813") != std::string::npos);
    CHECK(std::filesystem::exists("cli_out_info/field.json"));
}

TEST_CASE("field-info from a config file") {
    auto r = run(std::string("field-info --field ") + NORMONE_CONFIG_DIR +
                 "/cubic13.json --out cli_out_info2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("cubic-13") != std::string::npos);
    CHECK(r.output.find("1.365") != std::string::npos);
}

TEST_CASE("enumerate writes deterministic CSV") {
    auto r = run("enumerate --field builtin:sqrt2 --bounds 8 --out cli_out_enum");
    CHECK(r.exit_code == 0);
    std::string csv = slurp("cli_out_enum/enum_8.csv");
    CHECK(csv.rfind("h,coord_1,coord_2,t_1,err\n", 0) == 0);
    int rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 5);  // header + 4 classes

    auto r2 = run("enumerate --field builtin:sqrt2 --bounds 8 --workers 3 --out cli_out_enum2");
    CHECK(r2.exit_code == 0);
    CHECK(slurp("cli_out_enum2/enum_8.csv") == csv);

    auto r3 = run("enumerate --field builtin:sqrt2 --bounds 0.5 --out cli_out_enum3");
    CHECK(r3.exit_code == 0);
    std::string csv3 = slurp("cli_out_enum3/enum_0_5.csv");
    CHECK(csv3 == "h,coord_1,coord_2,t_1,err\n");
}

TEST_CASE("weyl subcommand") {
    auto r = run("weyl --field builtin:sqrt2 --bounds 8 --k 1 --out cli_out_weyl");
    CHECK(r.exit_code == 0);
    std::string csv = slurp("cli_out_weyl/weyl.csv");
    CHECK(csv.rfind("r,k_1,re_S,im_S,norm_mag,count\n", 0) == 0);
    CHECK(r.output.find("|S|/n=0.76") != std::string::npos);  // 3.055/4
}

TEST_CASE("error exit codes") {
    CHECK(run("lcheck --field builtin:sqrt2 --s 1.0 --cutoff 10 --out cli_out_l").exit_code == 2);
    CHECK(run("field-info --field /nonexistent/path.json").exit_code == 2);
    CHECK(run("enumerate --field builtin:sqrt2 --bounds 1e3,1e2").exit_code == 2);
    CHECK(run("bogus-subcommand").exit_code == 1);
    CHECK(run("enumerate --field builtin:sqrt2 --bounds 1e9 --memory-budget 1000").exit_code == 3);
    CHECK(run("field-info --field builtin:sqrt12").exit_code == 2);
}

TEST_CASE("oracle subcommand matches") {
    auto r = run("oracle --field builtin:sqrt3 --bounds 50 --box 20 --out cli_out_oracle");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("match=yes") != std::string::npos);
    std::string j = slurp("cli_out_oracle/oracle.json");
    CHECK(j.find("\"match\": true") != std::string::npos);
}

TEST_CASE("discrepancy subcommand") {
    auto r = run("discrepancy --field builtin:sqrt2 --bounds 100,200 --out cli_out_disc");
    CHECK(r.exit_code == 0);
    std::string csv = slurp("cli_out_disc/discrepancy.csv");
    CHECK(csv.rfind("r,dim,grid,dstar,exact\n", 0) == 0);
}

TEST_CASE("precision environment override") {
    auto r = run("field-info --field builtin:sqrt2 --precision-bits 32 --out cli_out_env0");
    CHECK(r.exit_code == 2);  // below the 64-bit floor

    // the environment variable takes precedence over the flag
    setenv("NORMONE_PRECISION_BITS", "128", 1);
    auto r2 = run("field-info --field builtin:sqrt2 --precision-bits 32 --out cli_out_env");
    unsetenv("NORMONE_PRECISION_BITS");
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("\"precision_bits\": 128") != std::string::npos);
}
