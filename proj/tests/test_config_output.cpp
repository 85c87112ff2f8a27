#include "hyperns/output.hpp"
#include "hyperns/run_config.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

using namespace hyperns;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const std::string& name) : path(fs::temp_directory_path() / ("hyperns_" + name)) {
        fs::remove_all(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

std::string config_error(const json& j) {
    try {
        (void)parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool mentions(const std::string& message, const std::string& what) { return message.find(what) != std::string::npos; }

}  // namespace

TEST_CASE("empty config gives the defaults") {
    const RunConfig c = parse_config(json::object());
    CHECK(c.grid.n_rho == 64);
    CHECK(c.grid.n_theta == 64);
    CHECK(c.constants.n == 2);
    CHECK(c.solver.T == 5.0);
    CHECK(c.solver.J == 32);
    CHECK(c.solver.delta == 0.5);
    CHECK(c.estimates.size() == default_estimates(c).size());
    CHECK(c.estimates.size() == 18);
    CHECK(c.output_dir == "out");
}

TEST_CASE("dimension sets dependent defaults") {
    const RunConfig c = parse_config(json{{"constants", {{"n", 3}}}});
    CHECK(c.constants.delta_n == 1.0);
    CHECK(c.constants.c0 == 2.0);
    CHECK(c.estimates.empty());
}

TEST_CASE("default G_bound time follows the lattice") {
    const RunConfig c = parse_config(json{{"solver", {{"T", 1.0}, {"J", 8}}}});
    for (const auto& r : c.estimates) {
        if (r.id == EstimateId::G_bound) {
            CHECK(r.params.at("t").get<double>() == 0.25);
        }
    }
    CHECK(mentions(config_error(json{{"constants", {{"n", 3}}}, {"estimates", {{{"id", "LrLq_member"}, {"r", 2.0}, {"q", 2.0}}}}}),
                   "need q = n"));
}

TEST_CASE("malformed configs are rejected with a reason") {
    CHECK(mentions(config_error(json{{"gird", json::object()}}), "unknown key 'gird'"));
    CHECK(mentions(config_error(json{{"solver", {{"J", 2.5}}}}), "solver.J: wrong type"));
    CHECK(mentions(config_error(json{{"solver", {{"seed", -1}}}}), "solver.seed"));
    CHECK(mentions(config_error(json{{"solver", {{"delta", 1.0}}}}), "solver.delta"));
    CHECK(mentions(config_error(json{{"solver", {{"amplitude", 1.2}}}}), "amplitude"));
    CHECK(mentions(config_error(json{{"grid", {{"n_theta", 63}}}}), "n_theta"));
    CHECK(mentions(config_error(json{{"norms", {2.0, "four"}}}), "norms"));
    CHECK(mentions(config_error(json{{"norms", {0.5}}}), "norms"));
    CHECK(mentions(config_error(json{{"estimates", {{{"id", "bogus"}}}}}), "unknown id 'bogus'"));
    CHECK(mentions(config_error(json{{"estimates", {{{"id", "dispersive"}, {"p", 2.0}}}}}), "missing parameter 'q'"));
    CHECK(mentions(config_error(json{{"estimates", {{{"id", "dispersive"}, {"p", 4.0}, {"q", 2.0}}}}}), "inadmissible"));
    CHECK(mentions(config_error(json{{"estimates", {{{"id", "dispersive"}, {"p", 2.0}, {"q", 2.0}, {"r", 1}}}}}),
                   "unknown key 'r'"));
    CHECK(mentions(config_error(json{{"estimates", {{{"id", "G_bound"}, {"alpha", 1.5}, {"gamma", 0.5},
                                                     {"zeta", 0.5}, {"t", 1.25}}}}}),
                   "alpha + zeta < n"));
    CHECK(mentions(config_error(json{{"estimates", {{{"id", "G_bound"}, {"alpha", 0.5}, {"gamma", 0.5},
                                                     {"zeta", 0.5}, {"t", 1.0}}}}}),
                   "lattice time"));
    CHECK(mentions(config_error(json{{"estimates", {{{"id", "LrLq_member"}, {"r", 8.0}, {"q", 4.0}}}}}), "1/r"));
    CHECK(mentions(config_error(json::array()), "expected an object"));
}

TEST_CASE("config files") {
    ScratchDir dir("config_files");
    fs::create_directories(dir.path);
    const fs::path bad = dir.path / "bad.json";
    std::ofstream(bad) << "{ \"solver\": ";
    CHECK_THROWS_AS(load_config(bad.string()), ConfigError);
    CHECK_THROWS_AS(load_config((dir.path / "missing.json").string()), ConfigError);
    const fs::path good = dir.path / "good.json";
    std::ofstream(good) << R"({"solver": {"T": 1.0, "J": 8}, "output_dir": "elsewhere"})";
    const RunConfig c = load_config(good.string());
    CHECK(c.solver.J == 8);
    CHECK(c.output_dir == "elsewhere");
}

TEST_CASE("canonical form round trips and hashes stably") {
    const RunConfig c = parse_config(json{{"solver", {{"T", 2.0}, {"seed", 11}}}, {"norms", {2.0, 6.0}}});
    const json canon = to_json(c);
    CHECK_FALSE(canon.contains("output_dir"));
    const RunConfig back = parse_config(canon);
    CHECK(to_json(back) == canon);
    CHECK(config_hash(canon) == config_hash(to_json(back)));
    CHECK(config_hash(canon).size() == 16);

    RunConfig moved = c;
    moved.output_dir = "somewhere/else";
    CHECK(config_hash(to_json(moved)) == config_hash(canon));
    RunConfig reseeded = c;
    reseeded.solver.seed = 12;
    CHECK(config_hash(to_json(reseeded)) != config_hash(canon));
    // FNV-1a 64 of the empty object "{}"
    CHECK(config_hash(json::object()) == "08f44b07b5901a25");
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(0.1)) == 0.1);
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("csv files carry a header and a sidecar") {
    ScratchDir dir("csv");
    write_csv(dir.path, "table.csv", {"a", "b"}, {{"1", "x,y"}, {"2", "z"}}, "0123456789abcdef");
    CHECK(slurp(dir.path / "table.csv") == "a,b\n1,\"x,y\"\n2,z\n");
    const json meta = json::parse(slurp(dir.path / "table.meta.json"));
    CHECK(meta.at("file") == "table.csv");
    CHECK(meta.at("config_hash") == "0123456789abcdef");
    CHECK(meta.at("columns") == json{"a", "b"});
    CHECK(meta.at("rows") == 2);
    CHECK_THROWS(write_csv(dir.path, "bad.csv", {"a", "b"}, {{"1"}}, "h"));
}

TEST_CASE("reports schema") {
    ScratchDir dir("reports");
    const EstimateReport ok = make_report(EstimateId::dispersive, json{{"p", 2.0}, {"q", 4.0}}, 1.5, 2.0, Bound::upper);
    const EstimateReport bad = make_report(EstimateId::G_bound, json::object(),
                                           std::numeric_limits<double>::quiet_NaN(), 1.3, Bound::upper,
                                           json{{"error", "boom"}, {"left", INFINITY}});
    write_reports(dir.path, {ok, bad}, "h");
    CHECK(slurp(dir.path / "reports.csv") ==
          "estimate_id,params_json,measured,predicted,margin,verdict\n"
          "dispersive,\"{\"\"p\"\":2.0,\"\"q\"\":4.0}\",1.5,2,0.5,pass\n"
          "G_bound,{},nan,1.3,nan,fail\n");
    const json j = report_to_json(bad);
    CHECK(j.at("verdict") == "fail");
    CHECK(j.at("measured") == "nan");
    CHECK(j.at("details").at("left") == "inf");
    CHECK(j.at("details").at("error") == "boom");
}

TEST_CASE("norms schema") {
    ScratchDir dir("norms");
    OneForm zero(hyperns::test::desk_grid());
    const Trajectory u = constant_trajectory(zero, {0.0, 0.25, 1.0});
    write_norms(dir.path, u, {2.0, 4.0}, "h");
    const std::string csv = slurp(dir.path / "norms.csv");
    CHECK(csv.rfind("t,q,norm\n0,2,0\n0.25,2,0\n1,2,0\n0,4,0\n", 0) == 0);
    CHECK(json::parse(slurp(dir.path / "norms.meta.json")).at("rows") == 6);
}

TEST_CASE("iteration log is a list of records") {
    ScratchDir dir("iterations");
    const std::vector<IterationRecord> log{{0, 0.5, 1.0, true}, {1, 0.6, 1e-3, false}};
    write_iterations(dir.path, log, "abc");
    const json j = json::parse(slurp(dir.path / "iterations.json"));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[1].at("k") == 1);
    CHECK(j[1].at("M_k") == 0.6);
    CHECK(j[1].at("residual") == 1e-3);
    CHECK(j[1].at("threshold_ok") == false);
    const json meta = json::parse(slurp(dir.path / "iterations.meta.json"));
    CHECK(meta.at("config_hash") == "abc");
    CHECK(meta.at("rows") == 2);
}
