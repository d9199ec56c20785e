#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "hjreach/value_io.hpp"

using namespace hjreach;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "hjreach_value_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("dump round trip is bit exact") {
    const Grid g = make_grid({-1, -3.14159}, {1, 3.14159}, {7, 9}, {false, true});
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 1e3);
    std::vector<double> vals(g.node_count());
    for (auto& v : vals) v = n(rng);
    vals[3] = -0.0;
    vals[4] = 5e-324;
    const ValueFn v(g, vals);

    const auto path = scratch("roundtrip.json");
    save_value(path, v, {"x", "theta"});
    CHECK(fs::exists(dump_payload_path(path)));
    CHECK(fs::file_size(dump_payload_path(path)) == vals.size() * 8);

    const ValueDump back = load_value(path);
    CHECK(back.value.grid() == g);
    CHECK(back.dim_names == std::vector<std::string>{"x", "theta"});
    for (std::size_t i = 0; i < vals.size(); ++i) {
        CHECK(std::memcmp(&vals[i], &back.value.values()[i], sizeof(double)) == 0);
    }
}

TEST_CASE("metadata carries the documented fields") {
    const Grid g = make_grid({0}, {1}, {3}, {false});
    const auto path = scratch("meta.json");
    save_value(path, ValueFn(g, 1.5));
    std::ifstream in(path);
    const auto meta = nlohmann::json::parse(in);
    CHECK(meta.at("dims") == 1);
    CHECK(meta.at("dtype") == "f64");
    CHECK(meta.at("order") == "row-major");
    CHECK(meta.at("node_counts") == nlohmann::json::array({3}));
    CHECK(meta.at("periodic") == nlohmann::json::array({false}));
}

TEST_CASE("load rejects damaged dumps") {
    const Grid g = make_grid({0}, {1}, {3}, {false});
    const auto path = scratch("short.json");
    save_value(path, ValueFn(g, 2.0));
    fs::resize_file(dump_payload_path(path), 16);
    CHECK_THROWS(load_value(path));

    CHECK_THROWS(load_value(scratch("missing.json")));
    CHECK_THROWS(save_value(scratch("wrong_ext.bin"), ValueFn(g, 0.0)));
}
