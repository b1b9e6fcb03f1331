#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "wedgeproj/commands.hpp"
#include "wedgeproj/io.hpp"
#include "wedgeproj/projection.hpp"

using namespace wedgeproj;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "wedgeproj-tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliRun {
    int exit_code;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    const fs::path out_path = scratch_dir() / "stdout.txt";
    const std::string cmd = std::string(WEDGEPROJ_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    const int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return {code, slurp(out_path)};
}

/// Report text with the wall-time line removed, for byte comparisons.
std::string strip_wall_time(const std::string& report) {
    std::istringstream in(report);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("wall_time_ms") == std::string::npos) out << line << "\n";
    return out.str();
}

}  // namespace

TEST_CASE("wedge files parse for both kinds and reject malformed input") {
    const WedgeSpec gen = parse_wedge_spec(
        R"({"kind":"generators","ambient_dim":2,"generators":[[1,0],[-1,1]]})");
    REQUIRE(gen.kind == "generators");
    REQUIRE(gen.wedge.ambient_dim() == 2);
    REQUIRE(gen.wedge.count() == 2);
    REQUIRE(gen.wedge.generator(1)[0] == -1.0);

    const WedgeSpec mono = parse_wedge_spec(R"({"kind":"monotone","m":5})");
    REQUIRE(mono.kind == "monotone");
    REQUIRE(mono.monotone_m == 5);
    REQUIRE(mono.wedge.count() == 6);

    REQUIRE_THROWS_AS(parse_wedge_spec("not json"), ParseError);
    REQUIRE_THROWS_AS(parse_wedge_spec(R"({"ambient_dim":2})"), ParseError);
    REQUIRE_THROWS_AS(parse_wedge_spec(R"({"kind":"mystery"})"), ParseError);
    REQUIRE_THROWS_AS(parse_wedge_spec(R"({"kind":"monotone","m":1})"), ParseError);
    REQUIRE_THROWS_AS(
        parse_wedge_spec(R"({"kind":"generators","ambient_dim":2,"generators":[[1,0],[1]]})"),
        ParseError);
    REQUIRE_THROWS_AS(
        parse_wedge_spec(R"({"kind":"generators","ambient_dim":1,"generators":[[1e400]]})"),
        ParseError);
    REQUIRE_THROWS_AS(
        parse_wedge_spec(R"({"kind":"generators","ambient_dim":2,"generators":[]})"),
        ParseError);
}

TEST_CASE("points files accept comments and ragged lines, reject junk") {
    const auto pts = parse_points("# comment\n1 2 3\n\n  4 5\n");
    REQUIRE(pts.size() == 2);
    REQUIRE(pts[0].size() == 3);
    REQUIRE(pts[1].size() == 2);
    REQUIRE(pts[1][1] == 5.0);

    REQUIRE_THROWS_AS(parse_points("1 2\n3 four\n"), ParseError);
    REQUIRE_THROWS_AS(parse_points("# nothing\n"), ParseError);
}

TEST_CASE("content digest matches the reference implementation") {
    REQUIRE(detail::fnv1a_hex("abc") == "e71fa2190541574b");
    REQUIRE(detail::fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("vectors serialize to plain JSON arrays") {
    Vector v(3);
    v << 1.5, -2, 0.25;
    REQUIRE(to_json(v).dump() == "[1.5,-2.0,0.25]");
}

TEST_CASE("decompose output re-feeds as a generators wedge with identical projections") {
    const WedgeSpec spec = parse_wedge_spec(R"({"kind":"monotone","m":4})");
    const WedgeDecomposition split = decompose(spec.wedge, {});

    json gens = json::array();
    for (Index j = 0; j < split.cone_part.count(); ++j)
        gens.push_back(to_json(Vector(split.cone_part.generator(j))));
    for (Index i = 0; i < split.lineality.dim(); ++i) {
        gens.push_back(to_json(Vector(split.lineality.vector(i))));
        gens.push_back(to_json(Vector(-split.lineality.vector(i))));
    }
    json refed{{"kind", "generators"}, {"ambient_dim", 4}, {"generators", gens}};
    const WedgeSpec round = parse_wedge_spec(refed.dump());

    std::mt19937_64 rng(606);
    std::normal_distribution<double> n(0.0, 2.0);
    const WedgeDecomposition rsplit = decompose(round.wedge, {});
    for (int trial = 0; trial < 100; ++trial) {
        Vector x(4);
        for (Index i = 0; i < 4; ++i) x[i] = n(rng);
        const Vector a = project_wedge(spec.wedge, split, x, {}).point;
        const Vector b = project_wedge(round.wedge, rsplit, x, {}).point;
        REQUIRE((a - b).norm() <= 1e-9 * (1.0 + x.norm()));
    }
}

TEST_CASE("cli projects points and reports certified results") {
    const auto wedge = write_file("mono3.json", R"({"kind":"monotone","m":3})");
    const auto points = write_file("pts3.txt", "1 2 3\n3 2 1\n");
    const auto report = scratch_dir() / "project.json";

    const CliRun run = run_cli("project --wedge " + wedge.string() + " --points " +
                               points.string() + " --output " + report.string());
    REQUIRE(run.exit_code == 0);
    REQUIRE(run.out.find("all passed") != std::string::npos);

    const json rep = json::parse(slurp(report));
    REQUIRE(rep["command"] == "project");
    REQUIRE(rep["all_certificates_passed"] == true);
    REQUIRE(rep["results"].size() == 2);
    const auto p0 = rep["results"][0]["point"];
    REQUIRE(p0[0].get<double>() == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(p0[2].get<double>() == Catch::Approx(2.0).margin(1e-9));
    const auto p1 = rep["results"][1]["point"];
    REQUIRE(p1[0].get<double>() == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(rep["results"][0]["certificate"]["passed"] == true);
}

TEST_CASE("cli project rejects mismatched point dimensions") {
    const auto wedge = write_file("mono3b.json", R"({"kind":"monotone","m":3})");
    const auto points = write_file("pts2.txt", "1 2\n");
    const CliRun run =
        run_cli("project --wedge " + wedge.string() + " --points " + points.string());
    REQUIRE(run.exit_code == 2);
}

TEST_CASE("cli decompose emits the known split of the nonincreasing wedge") {
    const auto wedge = write_file("mono3c.json", R"({"kind":"monotone","m":3})");
    const auto report = scratch_dir() / "decompose.json";
    const CliRun run =
        run_cli("decompose --wedge " + wedge.string() + " --output " + report.string());
    REQUIRE(run.exit_code == 0);

    const json rep = json::parse(slurp(report));
    REQUIRE(rep["lineality_dim"] == 1);
    REQUIRE(rep["generating"] == true);
    REQUIRE(rep["cone_part_generators"].size() == 2);
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    REQUIRE(std::abs(std::abs(rep["lineality_basis"][0][0].get<double>()) - inv_sqrt3) < 1e-9);
}

TEST_CASE("cli polar reports rays or inapplicability") {
    const auto wedge = write_file("wide.json",
                                  R"({"kind":"generators","ambient_dim":2,)"
                                  R"("generators":[[1,0],[-1,1]]})");
    const auto report = scratch_dir() / "polar.json";
    const CliRun run = run_cli("polar --wedge " + wedge.string() + " --output " + report.string());
    REQUIRE(run.exit_code == 0);
    const json rep = json::parse(slurp(report));
    REQUIRE(rep["polar_rays"].size() == 2);

    const auto flat = write_file("flat.json",
                                 R"({"kind":"generators","ambient_dim":2,"generators":[[1,0]]})");
    REQUIRE(run_cli("polar --wedge " + flat.string()).exit_code == 3);
    REQUIRE(run_cli("polar --intrinsic --wedge " + flat.string()).exit_code == 0);
}

TEST_CASE("cli check-isotone maps verdicts to exit codes") {
    const auto mono = write_file("mono6.json", R"({"kind":"monotone","m":6})");
    REQUIRE(run_cli("check-isotone --wedge " + mono.string()).exit_code == 0);

    const auto wide = write_file("wide2.json",
                                 R"({"kind":"generators","ambient_dim":2,)"
                                 R"("generators":[[1,0],[-1,1]]})");
    const auto report = scratch_dir() / "isotone.json";
    const CliRun bad =
        run_cli("check-isotone --wedge " + wide.string() + " --output " + report.string());
    REQUIRE(bad.exit_code == 1);
    const json rep = json::parse(slurp(report));
    REQUIRE(rep["verdict"] == "not_isotone");
    REQUIRE(rep["worst_pair"]["inner_product"].get<double>() ==
            Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-9));

    const auto flat = write_file("flat2.json",
                                 R"({"kind":"generators","ambient_dim":2,"generators":[[1,0]]})");
    REQUIRE(run_cli("check-isotone --wedge " + flat.string()).exit_code == 3);
    REQUIRE(run_cli("check-isotone --intrinsic --wedge " + flat.string()).exit_code == 0);
}

TEST_CASE("cli sample exits by violation count and reports pairs verbatim") {
    const auto mono = write_file("mono5.json", R"({"kind":"monotone","m":5})");
    REQUIRE(run_cli("sample --wedge " + mono.string() + " --pairs 500 --seed 42").exit_code == 0);

    const auto wide = write_file("wide3.json",
                                 R"({"kind":"generators","ambient_dim":2,)"
                                 R"("generators":[[1,0],[-1,1]]})");
    const auto report = scratch_dir() / "sample.json";
    const CliRun bad = run_cli("sample --wedge " + wide.string() +
                               " --pairs 3000 --seed 17 --output " + report.string());
    REQUIRE(bad.exit_code == 1);
    const json rep = json::parse(slurp(report));
    REQUIRE(rep["violation_count"].get<int>() >= 1);
    REQUIRE(rep["violations"].size() == rep["violation_count"].get<size_t>());
    REQUIRE(rep["violations"][0].contains("proj_u"));
    REQUIRE(rep["violations"][0]["difference_residual"].get<double>() > 1e-8);
}

TEST_CASE("cli pava projects each line at its own length") {
    const auto points = write_file("ragged.txt", "0 1 0\n1 2 3 4\n7\n");
    const auto report = scratch_dir() / "pava.json";
    const CliRun run =
        run_cli("pava --points " + points.string() + " --output " + report.string());
    REQUIRE(run.exit_code == 0);
    const json rep = json::parse(slurp(report));
    REQUIRE(rep["results"].size() == 3);
    REQUIRE(rep["results"][0]["point"][0].get<double>() == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(rep["results"][1]["point"][0].get<double>() == Catch::Approx(2.5).margin(1e-12));
    REQUIRE(rep["results"][2]["point"][0].get<double>() == 7.0);
    REQUIRE(rep["results"][2]["certificate"].is_null());
}

TEST_CASE("cli surfaces parse failures and bad flags as input errors") {
    const auto junk = write_file("junk.json", "{ not json");
    REQUIRE(run_cli("decompose --wedge " + junk.string()).exit_code == 2);
    REQUIRE(run_cli("decompose --wedge /nonexistent/file.json").exit_code == 2);
    REQUIRE(run_cli("decompose").exit_code == 2);
    REQUIRE(run_cli("frobnicate").exit_code == 2);
    REQUIRE(run_cli("--help").exit_code == 0);

    const auto mono = write_file("mono4.json", R"({"kind":"monotone","m":4})");
    REQUIRE(run_cli("decompose --wedge " + mono.string() + " --eps-feas 0.5").exit_code == 2);
}

TEST_CASE("cli reports are deterministic apart from wall time") {
    const auto wedge = write_file("mono5d.json", R"({"kind":"monotone","m":5})");
    const auto rep1 = scratch_dir() / "det1.json";
    const auto rep2 = scratch_dir() / "det2.json";
    REQUIRE(run_cli("sample --wedge " + wedge.string() + " --pairs 200 --seed 9 --output " +
                    rep1.string())
                .exit_code == 0);
    REQUIRE(run_cli("sample --wedge " + wedge.string() + " --pairs 200 --seed 9 --output " +
                    rep2.string())
                .exit_code == 0);
    const std::string a = strip_wall_time(slurp(rep1));
    const std::string b = strip_wall_time(slurp(rep2));
    REQUIRE(a == b);
    REQUIRE_FALSE(a.empty());

    const auto rep3 = scratch_dir() / "det3.json";
    REQUIRE(run_cli("sample --wedge " + wedge.string() + " --pairs 200 --seed 10 --output " +
                    rep3.string())
                .exit_code == 0);
    REQUIRE(strip_wall_time(slurp(rep3)) != a);
}
