#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = ORDSENS_CLI_PATH;
const fs::path kData = ORDSENS_DATA_DIR;

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "ordsens_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " 2>" + (work_dir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json report_for(const std::string& spec, const std::string& name, int expected_exit,
                const std::string& extra = "") {
    const fs::path out = work_dir() / name;
    const int code = run("analyze --spec " + (kData / spec).string() + " --out " + out.string() +
                         (extra.empty() ? "" : " " + extra));
    CHECK(code == expected_exit);
    return json::parse(slurp(out));
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("analyze: golden reports and exit codes") {
    const json f3 = report_for("fock3.json", "fock3.json.out", 2);
    CHECK(f3["so"].get<double>() == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(f3["flags"]["so"].get<bool>());
    CHECK(f3["flags"]["any"].get<bool>());
    CHECK(f3["witnesses"]["d2"].get<double>() == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(f3["nonclassicality_bounds"]["lower"].get<double>() ==
          doctest::Approx(std::sqrt(7.0) - 1.0).epsilon(1e-9));
    CHECK(f3["dim"].get<int>() == 13);
    CHECK(f3["so_route_agreement"].get<double>() < 1e-6);

    const json th = report_for("thermal1.json", "thermal1.json.out", 0);
    CHECK(th["so"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK_FALSE(th["flags"]["any"].get<bool>());
    CHECK(th["purity"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(th["nonclassicality_bounds"]["estimate"].is_null());
    CHECK(th["witnesses"]["q_mandel"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));

    // rho_M with M = 10: S_o = 1.2
    const json rm = report_for("rho_m10.json", "rho_m10.json.out", 2);
    CHECK(rm["so"].get<double>() == doctest::Approx(1.2).epsilon(1e-9));
}

TEST_CASE("analyze: error exit codes") {
    const fs::path out = work_dir() / "never.json";
    CHECK(run("analyze --spec " + (kData / "malformed.json").string() + " --out " + out.string()) ==
          64);
    CHECK(run("analyze --spec " + (kData / "unknown_kind.json").string() + " --out " +
              out.string()) == 64);
    CHECK(run("analyze --spec " + (kData / "bad_weights.json").string() + " --out " +
              out.string()) == 65);
    CHECK(run("analyze --spec " + (kData / "missing.json").string() + " --out " + out.string()) ==
          64);
    // dim too small for the state: truncation
    CHECK(run("analyze --spec " + (kData / "coherent.json").string() + " --out " + out.string() +
              " --dim 8") == 70);
    // CLI usage error
    CHECK(run("analyze --out " + out.string()) == 64);
}

TEST_CASE("analyze: raw dump round-trips S_o") {
    const fs::path out = work_dir() / "cat_report.json";
    const fs::path dump = work_dir() / "cat_rho.json";
    CHECK(run("analyze --spec " + (kData / "even_cat.json").string() + " --out " + out.string() +
              " --dump-state " + dump.string()) == 2);
    const double so_first = json::parse(slurp(out))["so"].get<double>();

    const fs::path out2 = work_dir() / "cat_report2.json";
    CHECK(run("analyze --spec " + dump.string() + " --out " + out2.string()) == 2);
    const double so_second = json::parse(slurp(out2))["so"].get<double>();
    CHECK(so_second == doctest::Approx(so_first).epsilon(1e-9));
}

TEST_CASE("outputs are byte-stable across runs") {
    const fs::path a = work_dir() / "stable_a.json";
    const fs::path b = work_dir() / "stable_b.json";
    run("analyze --spec " + (kData / "even_cat.json").string() + " --out " + a.string());
    run("analyze --spec " + (kData / "even_cat.json").string() + " --out " + b.string());
    CHECK(slurp(a) == slurp(b));

    const fs::path wa = work_dir() / "stable_a.csv";
    const fs::path wb = work_dir() / "stable_b.csv";
    run("wigner --spec " + (kData / "fock1.json").string() + " --out " + wa.string() +
        " --points 64");
    run("wigner --spec " + (kData / "fock1.json").string() + " --out " + wb.string() +
        " --points 64");
    CHECK(slurp(wa) == slurp(wb));
}

TEST_CASE("wigner grids and radial profiles") {
    const fs::path grid_csv = work_dir() / "vacuum_grid.csv";
    CHECK(run("wigner --spec " + (kData / "vacuum.json").string() + " --out " + grid_csv.string() +
              " --extent 5 --points 128") == 0);
    const std::string content = slurp(grid_csv);
    CHECK(content.rfind("# s=0 R=5 n=128\n", 0) == 0);
    const auto rows = csv_rows(grid_csv);
    REQUIRE(rows.size() == 128 * 128);
    double peak = -1e9, mass = 0.0;
    const double h = 10.0 / 128;
    for (const auto& r : rows) {
        REQUIRE(r.size() == 3);
        peak = std::max(peak, std::stod(r[2]));
        mass += std::stod(r[2]) * h * h;
    }
    CHECK(peak == doctest::Approx(2.0 / M_PI).epsilon(1e-2));
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));

    const fs::path radial_csv = work_dir() / "fock1_radial.csv";
    CHECK(run("wigner --spec " + (kData / "fock1.json").string() + " --out " + radial_csv.string() +
              " --radial --points 101") == 0);
    const auto rrows = csv_rows(radial_csv);
    REQUIRE(rrows.size() == 101);
    CHECK(std::stod(rrows[0][0]) == 0.0);
    CHECK(std::stod(rrows[0][1]) == doctest::Approx(-2.0 / M_PI).epsilon(1e-9));
}

TEST_CASE("entropy curves") {
    const fs::path coh_csv = work_dir() / "coherent_entropy.csv";
    CHECK(run("entropy-curve --spec " + (kData / "coherent.json").string() + " --out " +
              coh_csv.string() + " --s-min -1 --s-max 0 --steps 5") == 0);
    for (const auto& row : csv_rows(coh_csv)) {
        REQUIRE(row.size() == 4);
        CHECK(std::stod(row[3]) == doctest::Approx(1.0).epsilon(1e-6));  // sharp bound
    }

    const fs::path th_csv = work_dir() / "thermal_entropy.csv";
    CHECK(run("entropy-curve --spec " + (kData / "thermal1.json").string() + " --out " +
              th_csv.string() + " --s-min -2 --s-max 0 --steps 9") == 0);
    for (const auto& row : csv_rows(th_csv)) {
        const double s = std::stod(row[0]);
        CHECK(std::stod(row[1]) == doctest::Approx(std::log(3.0 - s)).epsilon(1e-6));
    }

    const fs::path f1_csv = work_dir() / "fock1_entropy.csv";
    CHECK(run("entropy-curve --spec " + (kData / "fock1.json").string() + " --out " +
              f1_csv.string() + " --s-min -0.5 --s-max 0 --steps 2") == 0);
    const auto rows = csv_rows(f1_csv);
    CHECK(std::stod(rows[1][3]) == doctest::Approx(3.0).epsilon(1e-6));

    // s > 0 rows are emitted as nan with a nonzero exit
    const fs::path nan_csv = work_dir() / "nan_entropy.csv";
    CHECK(run("entropy-curve --spec " + (kData / "thermal1.json").string() + " --out " +
              nan_csv.string() + " --s-min -0.5 --s-max 0.5 --steps 3") == 1);
    const auto nrows = csv_rows(nan_csv);
    CHECK(nrows[2][1] == "nan");
}

TEST_CASE("channel sweep") {
    const fs::path coh_csv = work_dir() / "coherent_sweep.csv";
    CHECK(run("channel-sweep --spec " + (kData / "coherent.json").string() + " --out " +
              coh_csv.string() + " --lambda 1.0 0.8 --nbar 0.0 1.0") == 0);
    const auto rows = csv_rows(coh_csv);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 6);
        const double lambda = std::stod(row[0]);
        const double so_in = std::stod(row[2]);
        const double so_out = std::stod(row[3]);
        const double bound = std::stod(row[4]);
        const double so_out_bs = std::stod(row[5]);
        CHECK(bound == doctest::Approx(so_in / lambda).epsilon(1e-12));
        CHECK(so_out <= bound + 1e-6);
        CHECK(so_out <= 1.0 + 1e-6);  // classical stays classical
        CHECK(so_out == doctest::Approx(so_out_bs).epsilon(1e-5));
        if (lambda == 1.0) CHECK(so_out == doctest::Approx(so_in).epsilon(1e-6));
    }

    const fs::path cat_csv = work_dir() / "cat_sweep.csv";
    CHECK(run("channel-sweep --spec " + (kData / "even_cat.json").string() + " --out " +
              cat_csv.string() + " --lambda 0.8 --nbar 1.0") == 0);
    const auto crows = csv_rows(cat_csv);
    CHECK(std::stod(crows[0][3]) <= std::stod(crows[0][2]) / 0.8 + 1e-6);
}
