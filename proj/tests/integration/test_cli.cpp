// Drives the dsc executable end to end. DSC_BIN and DSC_CONFIG_DIR come
// from the build.

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status{-1};
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DSC_BIN) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string config(const std::string& name) { return std::string(DSC_CONFIG_DIR) + "/" + name; }

fs::path write_temp(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("dsc_it_" + name);
    std::ofstream(p) << text;
    return p;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

std::size_t fields(const std::string& line) {
    std::size_t n = 1;
    for (char c : line) n += c == ',';
    return n;
}

const std::string kSweep = R"([model]
omega_r_ghz = 6
delta_ghz = 1.2
g_ghz = 6
[environment]
rw_coupling = inductive
kappa_mhz = 1
Z_R_ohm = 30
Z_T_ohm = 50
[sweep]
variable = kappa
start = 1
stop = 30
points = 4
scale = log
)";

} // namespace

TEST_CASE("point: one row with the full column set") {
    const Run r = run("point --config " + config("anchor_point.cfg"));
    CHECK(r.status == 0);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("g_ghz,kappa_mhz,backend,n_virtual,purity,coherence_C", 0) == 0);
    CHECK(fields(lines[1]) == fields(lines[0]));
    CHECK(lines[1].find(",cvs,") != std::string::npos);
}

TEST_CASE("sweep output is byte-identical across repeats and job counts") {
    const fs::path cfg = write_temp("sweep.cfg", kSweep);
    const Run a = run("sweep --config " + cfg.string() + " --jobs 1");
    const Run b = run("sweep --config " + cfg.string() + " --jobs 1");
    const Run c = run("sweep --config " + cfg.string() + " --jobs 3");
    CHECK(a.status == 0);
    CHECK(data_lines(a.out).size() == 5);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);

    const fs::path out = fs::temp_directory_path() / "dsc_it_sweep.csv";
    CHECK(run("sweep --config " + cfg.string() + " --out " + out.string()).status == 0);
    std::ifstream in(out, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == a.out);
    fs::remove(out);
    fs::remove(cfg);
}

TEST_CASE("exit status: 1 for configuration and usage errors") {
    const fs::path bad = write_temp("bad.cfg", kSweep + "[run]\nbogus = 1\n");
    CHECK(run("point --config " + bad.string()).status == 1);
    fs::remove(bad);
    CHECK(run("point --config /nonexistent/x.cfg").status == 1);
    CHECK(run("frobnicate").status == 1);
    CHECK(run("").status == 1);
    CHECK(run("point --config " + config("anchor_point.cfg") + " --backend magic").status == 1);
    CHECK(run("--help").status == 0);
}

TEST_CASE("exit status: 2 when a row fails, with the error recorded") {
    const fs::path big = write_temp("big.cfg", kSweep + "[run]\nbackend = both\n[truncation]\nresonator_dim = 3000\n");
    const Run r = run("point --config " + big.string());
    fs::remove(big);
    CHECK(r.status == 2);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].find(",cvs,") != std::string::npos);
    CHECK(lines[2].find("size_error") != std::string::npos);
}

TEST_CASE("wigner: preamble and an x,p,W grid") {
    const Run r = run("wigner --config " + config("anchor_point.cfg") + " --axis y --outcome -1 --points 11");
    CHECK(r.status == 0);
    CHECK(r.out.find("# axis_theta = ") != std::string::npos);
    CHECK(r.out.find("# probability = ") != std::string::npos);
    const auto lines = data_lines(r.out);
    REQUIRE(lines.size() == 122);
    CHECK(lines[0] == "x,p,W");
    CHECK(fields(lines[1]) == 3);
    CHECK(run("wigner --config " + config("anchor_point.cfg") + " --outcome 0").status == 1);
    CHECK(run("wigner --config " + config("anchor_point.cfg") + " --axis sideways").status == 1);
}

TEST_CASE("circuit: element table for both couplings") {
    const Run ind = run("circuit --config " + config("circuit_inductive.cfg"));
    CHECK(ind.status == 0);
    auto lines = data_lines(ind.out);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "L_c_nH,xi0,omega_cutoff_ghz,kappa_mhz");
    const Run cap = run("circuit --config " + config("circuit_capacitive.cfg"));
    CHECK(cap.status == 0);
    lines = data_lines(cap.out);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "C_c_fF,xi0,omega_cutoff_ghz,kappa_mhz");
}
