#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gevlab/pipeline.hpp"
#include "support.hpp"

using namespace gevlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json reference_json() {
    std::ifstream in(std::string(GEVLAB_CONFIG_DIR) + "/reference.json");
    return json::parse(in);
}

std::string parse_error(const json& j) {
    try {
        parse_config(j);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("reference config parses") {
    const RunConfig& cfg = testing::reference_config();
    CHECK(cfg.problem.k == 2);
    CHECK(cfg.problem.s2 == 5);
    CHECK(cfg.problem.r2 == 11);
    CHECK(cfg.geometry.covering.size() == 24);
    CHECK(cfg.geometry.rays.size() == 24);
    CHECK(cfg.initial.size() == std::size_t(cfg.problem.S));
    CHECK(cfg.initial[0].family == InitialDatum::Family::Monomial);
    CHECK(cfg.solver.laplace.Delta == cfg.geometry.Delta);
    CHECK_FALSE(cfg.problem.A_table.empty());
}

TEST_CASE("parse errors name the field") {
    json j = reference_json();
    j["problem"].erase("s2");
    CHECK(parse_error(j).find("problem.s2") != std::string::npos);

    j = reference_json();
    j["problem"]["a1"] = "one";
    CHECK(parse_error(j).find("problem.a1") != std::string::npos);

    j = reference_json();
    j["initial_data"][0]["family"] = "lognormal";
    CHECK(parse_error(j).find("initial_data[0]") != std::string::npos);

    j = reference_json();
    j["initial_data"][1] = {{"family", "polynomial"}, {"coeffs", {1.0, 2.0}}};
    CHECK(parse_error(j).find("initial_data[1]") != std::string::npos);

    j = reference_json();
    j["coeffs"]["sectors"] = {99};
    CHECK(parse_error(j).find("coeffs.sectors") != std::string::npos);

    j = reference_json();
    j["solve"]["z_factor"] = 0.6;
    CHECK(parse_error(j).find("solve.z_factor") != std::string::npos);

    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("complex values accept both spellings") {
    json j = reference_json();
    j["problem"]["a2"] = {{"re", 0.0}, {"im", 1.0}};
    RunConfig cfg = parse_config(j);
    CHECK(cfg.problem.a2 == cplx(0.0, 1.0));
    j["problem"]["a2"] = 2.5;
    CHECK(parse_config(j).problem.a2 == cplx(2.5, 0.0));
    CHECK(complex_to_json(cplx(1.0, -2.0))["im"].get<double>() == -2.0);
}

TEST_CASE("check command is deterministic and gates bad problems") {
    const RunConfig& cfg = testing::reference_config();
    fs::path base = fs::temp_directory_path() / "gevlab_config_test";
    fs::remove_all(base);
    CommandResult a = run_check(cfg, (base / "a").string());
    CommandResult b = run_check(cfg, (base / "b").string());
    CHECK(a.exit_code == kExitOk);
    CHECK(b.exit_code == kExitOk);
    std::string fa = slurp(base / "a" / "assumptions.json");
    CHECK_FALSE(fa.empty());
    CHECK(fa == slurp(base / "b" / "assumptions.json"));
    CHECK(a.summary.dump() == b.summary.dump());

    json j = reference_json();
    j["problem"]["s1"] = 1;
    j["problem"]["s2"] = 1;
    j["problem"]["r1"] = 1;
    j["problem"]["r2"] = 1;
    j["problem"]["forcing"] = json::array();
    j["problem"]["b_coeffs"] = json::array();
    RunConfig bad;
    try {
        bad = parse_config(j);
    } catch (const Error&) {
        FAIL("degenerate problem should parse and fail the assumption check instead");
    }
    CommandResult c = run_check(bad, (base / "c").string());
    CHECK(c.exit_code == kExitAssumption);
    CHECK(c.summary.dump().find("s1*r2 - s2*r1") != std::string::npos);
    CHECK(run_coeffs(bad, (base / "d").string()).exit_code == kExitAssumption);
    fs::remove_all(base);
}
