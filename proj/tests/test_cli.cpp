#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "npcure/errors.hpp"
#include "npcure/io.hpp"
#include "npcure/sim.hpp"

using namespace npcure;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "npcure_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(NPCURE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("dataset round-trips through csv at full precision") {
    const SurvivalSample s = gen_sample(ModelTruth::model1(), 200, 3);
    const fs::path p = temp_dir() / "roundtrip.csv";
    write_dataset(p.string(), s);
    const Dataset d = read_dataset(p.string());
    REQUIRE(d.rows.size() == s.size());
    CHECK_FALSE(d.has_group);
    const SurvivalSample back = d.sample_for("");
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back[i].x == s[i].x);
        CHECK(back[i].t == s[i].t);
        CHECK(back[i].status == s[i].status);
    }
}

TEST_CASE("dataset parse errors carry row numbers") {
    const fs::path dir = temp_dir();
    write_file(dir / "neg.csv", "time,status,covariate\n1.0,1,0.5\n-2.0,0,0.1\n");
    try {
        read_dataset((dir / "neg.csv").string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);  // header is row 1
    }
    write_file(dir / "status.csv", "time,status,covariate\n1.0,2,0.5\n2.0,0,0.1\n");
    CHECK_THROWS_AS(read_dataset((dir / "status.csv").string()), ParseError);
    write_file(dir / "nan.csv", "time,status,covariate\n1.0,1,abc\n2.0,0,0.1\n");
    CHECK_THROWS_AS(read_dataset((dir / "nan.csv").string()), ParseError);
    write_file(dir / "unknown.csv", "time,status,covariate,extra\n1.0,1,0.5,9\n2.0,0,0.1,9\n");
    CHECK_THROWS_AS(read_dataset((dir / "unknown.csv").string()), ParseError);
    write_file(dir / "short.csv", "time,status,covariate\n1.0,1,0.5\n");
    CHECK_THROWS_AS(read_dataset((dir / "short.csv").string()), ParseError);
}

TEST_CASE("grouped datasets split into per-group samples") {
    const fs::path p = temp_dir() / "groups.csv";
    write_file(p, "time,status,covariate,group\n"
                  "1.0,1,0.5,a\n2.0,0,0.6,a\n3.0,1,0.7,b\n4.0,0,0.8,b\n5.0,1,0.9,b\n");
    const Dataset d = read_dataset(p.string());
    CHECK(d.has_group);
    CHECK(d.group_labels() == std::vector<std::string>{"a", "b"});
    CHECK(d.sample_for("a").size() == 2);
    CHECK(d.sample_for("b").size() == 3);
    CHECK(d.sample_for("").size() == 5);
}

TEST_CASE("benchmark plan parsing") {
    const fs::path p = temp_dir() / "plan.json";
    write_file(p, R"({"model":2,"sizes":"50,100","replications":7,"seed":11,
                      "x_grid":"-5:5:3","h_grid":"2:10:4","bootstrap":false})");
    const BenchmarkPlanFile f = BenchmarkPlanFile::parse(p.string());
    CHECK(f.plan.model == ModelId::Model2);
    CHECK(f.plan.sample_sizes == std::vector<std::size_t>{50, 100});
    CHECK(f.plan.replications == 7);
    CHECK(f.plan.master_seed == 11);
    CHECK(f.plan.x_grid.size() == 3);
    CHECK(f.plan.h_grid.size() == 4);
    CHECK_FALSE(f.run_bootstrap);
    CHECK(f.run_mise);
    CHECK(f.echo().at("sizes") == "50,100");

    write_file(p, R"({"sizes":[25,75]})");
    CHECK(BenchmarkPlanFile::parse(p.string()).plan.sample_sizes ==
          std::vector<std::size_t>{25, 75});

    write_file(p, R"({"model":3})");
    CHECK_THROWS_AS(BenchmarkPlanFile::parse(p.string()), ParseError);
    write_file(p, R"({"bogus_key":1})");
    CHECK_THROWS_AS(BenchmarkPlanFile::parse(p.string()), ParseError);
    write_file(p, "{nonsense");
    CHECK_THROWS_AS(BenchmarkPlanFile::parse(p.string()), ParseError);
}

TEST_CASE("cli simulate writes data plus sidecar and rejects n = 0") {
    const fs::path dir = temp_dir();
    const fs::path out = dir / "sim.csv";
    CHECK(run_cli("simulate --model 1 --n 100 --seed 5 --out " + out.string()) == 0);
    CHECK(fs::exists(out));
    CHECK(fs::exists(out.string() + ".json"));
    const Dataset d = read_dataset(out.string());
    CHECK(d.rows.size() == 100);

    const fs::path none = dir / "none.csv";
    CHECK(run_cli("simulate --model 1 --n 0 --out " + none.string()) == 2);
    CHECK_FALSE(fs::exists(none));
    CHECK(run_cli("simulate --model 7 --n 10 --out " + none.string()) == 2);
}

TEST_CASE("cli fit reproduces the toy hand value and flags problem cells") {
    const fs::path dir = temp_dir();
    write_file(dir / "toy.csv",
               "time,status,covariate\n1.0,1,0.0\n2.0,1,0.0\n3.0,0,0.0\n");
    const fs::path out = dir / "fit_toy";
    CHECK(run_cli("fit --data " + (dir / "toy.csv").string() +
                  " --h 1000000 --x-grid 0:0:1 --out " + out.string()) == 0);
    const std::string fits = slurp(out / "fits.csv");
    CHECK(fits.find("0.33333333333333") != std::string::npos);

    // all-censored group: cure probability 1 with a warning column set
    write_file(dir / "cens.csv",
               "time,status,covariate\n1.0,0,0.0\n2.0,0,0.1\n3.0,0,0.2\n");
    const fs::path out2 = dir / "fit_cens";
    CHECK(run_cli("fit --data " + (dir / "cens.csv").string() +
                  " --h 1000 --x-grid 0:0:1 --out " + out2.string()) == 0);
    const std::string fits2 = slurp(out2 / "fits.csv");
    CHECK(fits2.find(",1,") != std::string::npos);           // cure probability 1
    CHECK(fits2.find("identifiability") != std::string::npos);

    // missing group label is a usage error
    write_file(dir / "grp.csv", "time,status,covariate,group\n"
                                "1.0,1,0.5,a\n2.0,0,0.6,a\n3.0,1,0.7,a\n");
    CHECK(run_cli("fit --data " + (dir / "grp.csv").string() +
                  " --h 10 --group zzz --out " + (dir / "fit_zzz").string()) == 2);
    // missing bandwidth flags are a usage error; unreadable file a parse error
    CHECK(run_cli("fit --data " + (dir / "grp.csv").string() + " --out " +
                  (dir / "fit_nb").string()) == 2);
    CHECK(run_cli("fit --data " + (dir / "missing.csv").string() + " --h 5 --out " +
                  (dir / "fit_mf").string()) == 3);
}

TEST_CASE("cli diagnose reports per-group censoring") {
    const fs::path dir = temp_dir();
    write_file(dir / "diag.csv", "time,status,covariate,group\n"
                                 "1.0,1,0.5,a\n2.0,0,0.6,a\n3.0,1,0.7,b\n4.0,1,0.8,b\n");
    const fs::path out = dir / "diag_out.csv";
    CHECK(run_cli("diagnose --data " + (dir / "diag.csv").string() + " --out " +
                  out.string()) == 0);
    const std::string report = slurp(out);
    CHECK(report.find("a,2,1,50,") != std::string::npos);
    CHECK(report.find("b,2,0,0,") != std::string::npos);
}

TEST_CASE("cli benchmark outputs are byte-identical across workers and reruns") {
    const fs::path dir = temp_dir();
    const fs::path plan = dir / "bench_plan.json";
    write_file(plan, R"({"model":1,"sizes":"40","replications":10,"seed":77,
                        "x_grid":"-5:5:2","h_grid":"3:12:4","b_grid":"10:30:3",
                        "time_points":32,"bootstrap":false})");
    std::vector<std::string> outputs;
    for (int workers : {1, 4, 8, 1}) {
        const fs::path out = dir / ("bench_w" + std::to_string(workers) +
                                    "_" + std::to_string(outputs.size()));
        CHECK(run_cli("benchmark --plan " + plan.string() + " --out " + out.string() +
                      " --workers " + std::to_string(workers)) == 0);
        outputs.push_back(slurp(out / "mse.csv") + "|" + slurp(out / "mise.csv"));
        CHECK_FALSE(outputs.back().empty());
    }
    for (std::size_t i = 1; i < outputs.size(); ++i) CHECK(outputs[i] == outputs[0]);

    CHECK(run_cli("benchmark --plan " + (dir / "no_plan.json").string() + " --out " +
                  (dir / "bench_x").string()) == 3);
}

TEST_CASE("cli usage errors") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("simulate") == 2);  // --n is required
}
