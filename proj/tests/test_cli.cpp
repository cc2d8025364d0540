#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "brickelast/io.hpp"

// End-to-end checks of the installed command line binary. Each case spawns
// the real executable (path injected by the build as CLI_BINARY_PATH) and
// inspects exit code and captured output.

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "brickelast_cli_XXXXXX").string();
        char* made = mkdtemp(tmpl.data());
        REQUIRE(made != nullptr);
        path = made;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved

    bool contains(const std::string& needle) const {
        return output.find(needle) != std::string::npos;
    }
};

CliResult run_cli(const TempDir& dir, const std::string& args) {
    std::string capture = dir.file("capture.txt");
    std::string cmd = std::string("\"") + CLI_BINARY_PATH + "\" " + args + " > \"" + capture +
                      "\" 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::ostringstream os;
    os << in.rdbuf();
    r.output = os.str();
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("verify subcommand reports passing checks") {
    TempDir dir;
    auto r = run_cli(dir, "verify --variant full --mesh-check-max 2");
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.contains("PASS full: unisolvency (exact determinant nonzero)"));
    CHECK(r.contains("PASS full: dof map audit n=(2,1,1)"));
    CHECK(r.contains("verify: all checks passed"));
    CHECK(!r.contains("FAIL"));
}

TEST_CASE("verify dumps an element file that round trips") {
    TempDir dir;
    std::string dumped = dir.file("rigid.element");
    auto r = run_cli(dir, "verify --variant rigid --mesh-check-max 1 --dump-element \"" + dumped +
                              "\"");
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.contains("PASS rigid: unisolvency (exact determinant nonzero)"));
    REQUIRE(fs::exists(dumped));
    brickelast::ElementRecord rec = brickelast::load_element_file(dumped);
    CHECK(rec.variant == brickelast::ElementVariant::Rigid);

    // Dumping both variants into one file has no defined meaning.
    auto bad = run_cli(dir, "verify --variant both --dump-element \"" + dir.file("x") + "\"");
    CHECK(bad.exit_code == 2);
    CHECK(bad.contains("usage error"));
}

TEST_CASE("verify rejects a corrupted element file") {
    TempDir dir;
    brickelast::ElementRecord rec =
        brickelast::record_of(brickelast::reference_element(brickelast::ElementVariant::Full));
    auto& bad = rec.stress_basis.back();
    bad.at(1, 2) = bad.at(1, 2) * brickelast::Rational(-1);
    std::string path = dir.file("tampered.element");
    brickelast::dump_element_file(path, rec);

    auto r = run_cli(dir, "verify --element-file \"" + path + "\"");
    CAPTURE(r.output);
    CHECK(r.exit_code == 1);
    CHECK(r.contains("FAIL element-file[full]"));
    CHECK(r.contains("check(s) failed"));
}

TEST_CASE("solve prints system sizes and error report") {
    TempDir dir;
    auto r = run_cli(dir, "solve --n 1,1,1 --recipe shear");
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.contains("variant: full"));
    CHECK(r.contains("mesh: 1 x 1 x 1"));
    CHECK(r.contains("stress dofs: 78, displacement dofs: 12"));
    CHECK(r.contains("solver: dense"));
    CHECK(r.contains("errors: e_sigma = "));
    CHECK(r.contains("divergence identity gap: "));

    // The shear solution lies in the discrete space, so the stress error is
    // at machine precision.
    auto pos = r.output.find("e_sigma = ");
    REQUIRE(pos != std::string::npos);
    double e_sigma = std::stod(r.output.substr(pos + 10));
    CHECK(e_sigma <= 1e-8);
}

TEST_CASE("solve handles rectangular meshes, variants and the trivial recipe") {
    TempDir dir;
    auto r = run_cli(dir, "solve --n 2,1,1 --recipe none --serial");
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.contains("stress dofs: 140, displacement dofs: 24"));
    CHECK(r.contains("solution norms: |sigma| = 0"));

    auto rigid = run_cli(dir, "solve --variant rigid --n 1,1,1 --recipe shear");
    CAPTURE(rigid.output);
    CHECK(rigid.exit_code == 0);
    CHECK(rigid.contains("stress dofs: 72, displacement dofs: 6"));
}

TEST_CASE("solve writes vtk and system dumps on request") {
    TempDir dir;
    std::string vtk = dir.file("sol.vtk");
    std::string sys = dir.file("sys.txt");
    auto r = run_cli(dir, "solve --n 2,1,1 --recipe shear --vtk \"" + vtk +
                              "\" --dump-system \"" + sys + "\"");
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    REQUIRE(fs::exists(vtk));
    REQUIRE(fs::exists(sys));
    std::string vtk_text = read_file(vtk);
    CHECK(vtk_text.find("# vtk DataFile Version 3.0") != std::string::npos);
    CHECK(vtk_text.find("TENSORS stress double") != std::string::npos);
    std::string sys_text = read_file(sys);
    CHECK(sys_text.find("n_stress 140") != std::string::npos);
}

TEST_CASE("convergence with exact capture writes the full csv") {
    TempDir dir;
    std::string csv = dir.file("report.csv");
    auto r = run_cli(dir, "convergence --levels 1,2,3 --recipe shear --csv \"" + csv + "\"");
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.contains("exact capture"));
    REQUIRE(fs::exists(csv));
    std::istringstream lines(read_file(csv));
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "h,e_sigma,e_u,e_div,rate_sigma,rate_u,rate_div");
    int data_rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == 3);
}

TEST_CASE("usage errors exit with code 2") {
    TempDir dir;
    auto short_levels = run_cli(dir, "convergence --levels 1,2");
    CHECK(short_levels.exit_code == 2);
    CHECK(short_levels.contains("usage error"));

    auto bad_flag = run_cli(dir, "solve --definitely-not-a-flag");
    CHECK(bad_flag.exit_code == 2);

    auto no_subcommand = run_cli(dir, "");
    CHECK(no_subcommand.exit_code == 2);

    auto help = run_cli(dir, "--help");
    CHECK(help.exit_code == 0);
    CHECK(help.contains("verify"));
    CHECK(help.contains("solve"));
    CHECK(help.contains("convergence"));
}

TEST_CASE("config files feed options and the command line overrides them") {
    TempDir dir;
    std::string cfg = dir.file("solve.cfg");
    {
        std::ofstream out(cfg);
        out << "[solve]\n";
        out << "recipe = \"none\"\n";
        out << "serial = true\n";
    }
    // Default recipe is trig (prints an error report); the config switches to
    // the trivial recipe, which prints solution norms instead.
    auto from_config = run_cli(dir, "--config \"" + cfg + "\" solve --n 1,1,1");
    CAPTURE(from_config.output);
    CHECK(from_config.exit_code == 0);
    CHECK(from_config.contains("solution norms:"));
    CHECK(!from_config.contains("errors:"));

    auto overridden = run_cli(dir, "--config \"" + cfg + "\" solve --n 1,1,1 --recipe shear");
    CAPTURE(overridden.output);
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.contains("errors: e_sigma = "));
}
