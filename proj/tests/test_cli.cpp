#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string tool_path() {
    const char* p = std::getenv("KHI_TOOL");
    REQUIRE_MESSAGE(p != nullptr, "KHI_TOOL must point at the binary");
    return p;
}

std::string docs_path() {
    const char* p = std::getenv("KHI_DOCS");
    REQUIRE_MESSAGE(p != nullptr, "KHI_DOCS must point at the docs dir");
    return p;
}

RunResult run(const std::string& args) {
    const std::string cmd = tool_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.size() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << text;
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    REQUIRE_MESSAGE(f.good(), ("missing file: " + path));
    json j;
    f >> j;
    return j;
}

// Minimal validator for the schema subset used by the shipped documents:
// type, required, properties, additionalProperties:false, $ref into $defs,
// minimum / exclusiveMinimum / maximum.
bool validate(const json& schema, const json& value, const json& root,
              std::string& err) {
    if (schema.contains("$ref")) {
        const std::string ref = schema["$ref"].get<std::string>();
        REQUIRE(ref.rfind("#/$defs/", 0) == 0);
        return validate(root["$defs"][ref.substr(8)], value, root, err);
    }
    if (schema.contains("type")) {
        const json& t = schema["type"];
        auto matches = [&](const std::string& name) {
            if (name == "number") return value.is_number();
            if (name == "integer") return value.is_number_integer();
            if (name == "boolean") return value.is_boolean();
            if (name == "string") return value.is_string();
            if (name == "object") return value.is_object();
            if (name == "array") return value.is_array();
            if (name == "null") return value.is_null();
            return false;
        };
        bool ok = false;
        if (t.is_string()) ok = matches(t.get<std::string>());
        else
            for (const auto& name : t)
                ok = ok || matches(name.get<std::string>());
        if (!ok) {
            err = "type mismatch against " + t.dump() + " for " + value.dump();
            return false;
        }
    }
    if (value.is_number()) {
        const double x = value.get<double>();
        if (schema.contains("minimum") &&
            x < schema["minimum"].get<double>()) {
            err = "minimum violated";
            return false;
        }
        if (schema.contains("exclusiveMinimum") &&
            x <= schema["exclusiveMinimum"].get<double>()) {
            err = "exclusiveMinimum violated";
            return false;
        }
        if (schema.contains("maximum") &&
            x > schema["maximum"].get<double>()) {
            err = "maximum violated";
            return false;
        }
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>())) {
                    err = "missing required key " + key.get<std::string>();
                    return false;
                }
        const json props = schema.value("properties", json::object());
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (props.contains(it.key())) {
                if (!validate(props[it.key()], it.value(), root, err))
                    return false;
            } else if (schema.value("additionalProperties", json(true)) ==
                       json(false)) {
                err = "unexpected key " + it.key();
                return false;
            }
        }
    }
    return true;
}

void check_schema(const std::string& schema_file, const json& doc) {
    const json schema = read_json(docs_path() + "/" + schema_file);
    std::string err;
    const bool ok = validate(schema, doc, schema, err);
    CHECK_MESSAGE(ok, (schema_file + ": " + err));
}

}  // namespace

TEST_CASE("analyze emits the frozen reference row") {
    const RunResult r = run("analyze --K 0 --M 1");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "K");
    CHECK(rows[0][8] == "classification");
    REQUIRE(rows[1].size() == 13);
    // 17 significant digits round-trip exactly
    CHECK(std::stod(rows[1][3]) == 0.23606797749978981);
    CHECK(std::stod(rows[1][5]) == 0.48586827175664576);
    CHECK(rows[1][8] == "InUniformWindow");
    CHECK(std::stod(rows[1][7]) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("analyze window endpoints give vanishing roots") {
    const RunResult r = run(
        "analyze --K 1 --M 1 --M 1.7320508075688772 --M 0.5");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    // M = K: marginal; M = sqrt(K^2+2): marginal; M below: stable
    CHECK(std::abs(std::stod(rows[1][3])) < 1e-10);
    CHECK(std::abs(std::stod(rows[2][3])) < 1e-10);
    CHECK(rows[3][8] == "BelowWindow");
    CHECK(rows[3][5].empty());   // no X1 column value
    CHECK(rows[3][9].empty());   // no C1 either
}

TEST_CASE("analyze with an empty sweep exits 1") {
    CHECK(run("analyze").exit_code == 1);
    CHECK(run("analyze --K 0").exit_code == 1);
}

TEST_CASE("flags win over config values") {
    write_file("cli_cfg_override.json",
               R"({"analyze": {"k_values": [0], "m_values": [0.5]}})");
    const RunResult r =
        run("analyze --config cli_cfg_override.json --M 1");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][1]) == 1.0);
}

TEST_CASE("unknown config keys are rejected") {
    write_file("cli_cfg_unknown.json",
               R"({"analyze": {"k_values": [0], "m_valuess": [1]}})");
    CHECK(run("analyze --config cli_cfg_unknown.json").exit_code == 2);
    write_file("cli_cfg_unknown2.json",
               R"({"background": {"speed": 1.0}})");
    CHECK(run("analyze --config cli_cfg_unknown2.json").exit_code == 2);
}

TEST_CASE("mode emits fields and a schema-valid metadata report") {
    write_file("cli_cfg_mode.json",
               R"({"background": {"v1_plus": 1.0, "eps0": 0.1},
                   "mode": {"eta": 1.0, "x1_count": 3, "x2_count": 5}})");
    const RunResult r =
        run("mode --config cli_cfg_mode.json --summary cli_mode_meta.json");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == std::vector<std::string>{"x1", "x2", "field", "value"});
    // zero background deformation: e-columns vanish identically
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][2].rfind("e", 0) == 0)
            CHECK(std::stod(rows[i][3]) == 0.0);
    }
    const json meta = read_json("cli_mode_meta.json");
    check_schema("mode_metadata.schema.json", meta);
    CHECK(meta["on_shell"].get<bool>());
    CHECK(meta["residuals"]["max"].get<double>() <= 1e-10);
    CHECK(meta["residuals"]["interior"].get<double>() <= 1e-10);
}

TEST_CASE("mode without an unstable root exits 1") {
    write_file("cli_cfg_mode_stable.json",
               R"({"background": {"v1_plus": 0.5, "g11_plus": 1.0},
                   "mode": {"eta": 1.0}})");
    CHECK(run("mode --config cli_cfg_mode_stable.json").exit_code == 1);
}

TEST_CASE("mode rejects a non-decaying frequency request") {
    write_file("cli_cfg_mode2.json",
               R"({"background": {"v1_plus": 1.0, "eps0": 0.1}})");
    CHECK(run("mode --config cli_cfg_mode2.json --tau-re -1 --tau-im 0")
              .exit_code == 2);
    CHECK(run("mode --config cli_cfg_mode2.json --eta 0").exit_code == 2);
}

TEST_CASE("simulate produces a schema-valid summary matching the rate") {
    write_file("cli_cfg_sim.json",
               R"({"background": {"v1_plus": 1.0, "eps0": 0.1},
                   "simulate": {"eta": 1.0, "N": 96, "L": 20.0, "T": 2.0}})");
    const RunResult r = run(
        "simulate --config cli_cfg_sim.json --output cli_sim.csv "
        "--summary cli_sim.json --plot-data cli_sim");
    CHECK(r.exit_code == 0);
    const json summary = read_json("cli_sim.json");
    check_schema("simulate_summary.schema.json", summary);
    CHECK(summary["relative_error"].get<double>() <= 0.02);
    CHECK(summary["predicted_rate"].get<double>() ==
          doctest::Approx(0.48586827175664576));

    const auto rows = parse_csv(
        [] {
            std::ifstream f("cli_sim.csv");
            std::stringstream ss;
            ss << f.rdbuf();
            return ss.str();
        }());
    REQUIRE(rows.size() > 10);
    CHECK(rows[0] ==
          std::vector<std::string>{"t", "log_norm", "energy", "residual"});
    CHECK(rows[1][3].empty());      // no centered stencil at the ends
    CHECK(!rows[5][3].empty());
    // plot emission: two-column series
    std::ifstream plot("cli_sim_lognorm.dat");
    REQUIRE(plot.good());
    double a = 0.0, b = 0.0;
    plot >> a >> b;
    CHECK(a == 0.0);
    CHECK(std::isfinite(b));
}

TEST_CASE("simulate rejects a CFL-violating step before stepping") {
    write_file("cli_cfg_sim2.json",
               R"({"background": {"v1_plus": 1.0, "eps0": 0.1},
                   "simulate": {"eta": 1.0, "N": 96, "L": 20.0,
                                "T": 1.0, "dt": 1.0}})");
    CHECK(run("simulate --config cli_cfg_sim2.json").exit_code == 2);
}

TEST_CASE("hadamard table grows along the band list") {
    write_file("cli_cfg_had.json",
               R"({"background": {"v1_plus": 1.0, "eps0": 0.1},
                   "hadamard": {"j": 3, "k": 3, "t0": 1.0,
                                "n_values": [5, 10, 20], "alpha": 2.0}})");
    const RunResult r =
        run("hadamard --config cli_cfg_had.json --summary cli_had.json");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][0] == "n");
    CHECK(rows[0][9] == "log10_ratio");
    double prev = -1.0;
    for (size_t i = 1; i < rows.size(); ++i) {
        const double ratio = std::stod(rows[i][9]);
        CHECK(ratio > prev);
        prev = ratio;
    }
    const json summary = read_json("cli_had.json");
    check_schema("hadamard_summary.schema.json", summary);
    CHECK(summary["n_star"].get<long>() >= 1);
}

TEST_CASE("hadamard rejects invalid regularity and missing background") {
    write_file("cli_cfg_had2.json",
               R"({"background": {"v1_plus": 1.0, "eps0": 0.1}})");
    CHECK(run("hadamard --config cli_cfg_had2.json --j 2 --k 3")
              .exit_code == 2);
    write_file("cli_cfg_had3.json", R"({"hadamard": {"j": 3, "k": 3}})");
    CHECK(run("hadamard --config cli_cfg_had3.json").exit_code == 2);
}

TEST_CASE("identical invocations are byte-identical") {
    const RunResult a = run("analyze --K 0 --K 1 --M 0.5 --M 1 --M 1.3");
    const RunResult b = run("analyze --K 0 --K 1 --M 0.5 --M 1 --M 1.3");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("json table format mirrors the csv rows") {
    const RunResult r = run("analyze --K 0 --M 1 --format json");
    CHECK(r.exit_code == 0);
    const json arr = json::parse(r.out);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 1);
    CHECK(arr[0]["x1_sq"].get<double>() == 0.23606797749978981);
    CHECK(arr[0]["classification"] == "InUniformWindow");
}
