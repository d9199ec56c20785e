#include "hjreach/value_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace hjreach {

namespace {

using nlohmann::json;

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t out = 0;
        for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xFFU) << (8 * (7 - i));
        return out;
    }
}

}  // namespace

std::filesystem::path dump_payload_path(const std::filesystem::path& meta_path) {
    auto p = meta_path;
    p.replace_extension(".bin");
    return p;
}

void save_value(const std::filesystem::path& meta_path, const ValueFn& value,
                const std::vector<std::string>& dim_names) {
    if (meta_path.extension() != ".json") {
        throw std::invalid_argument("dump metadata path must end in .json: " + meta_path.string());
    }
    const Grid& g = value.grid();
    if (!dim_names.empty() && dim_names.size() != g.dim_count()) {
        throw std::invalid_argument("dim name count does not match grid");
    }
    json meta;
    meta["dims"] = g.dim_count();
    meta["lower"] = g.lower();
    meta["upper"] = g.upper();
    meta["node_counts"] = g.node_counts();
    meta["periodic"] = g.periodic();
    meta["dtype"] = "f64";
    meta["order"] = "row-major";
    if (!dim_names.empty()) meta["dim_names"] = dim_names;

    if (meta_path.has_parent_path()) std::filesystem::create_directories(meta_path.parent_path());
    {
        std::ofstream out(meta_path);
        if (!out) throw std::runtime_error("cannot write " + meta_path.string());
        out << meta.dump(2) << '\n';
    }

    const auto payload = dump_payload_path(meta_path);
    std::ofstream out(payload, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + payload.string());
    std::vector<std::uint64_t> words(value.size());
    const auto values = value.values();
    for (std::size_t i = 0; i < words.size(); ++i) {
        words[i] = to_little_endian(std::bit_cast<std::uint64_t>(values[i]));
    }
    out.write(reinterpret_cast<const char*>(words.data()),
              static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
    if (!out) throw std::runtime_error("short write to " + payload.string());
}

ValueDump load_value(const std::filesystem::path& meta_path) {
    std::ifstream in(meta_path);
    if (!in) throw std::runtime_error("cannot open " + meta_path.string());
    json meta;
    try {
        meta = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed dump metadata " + meta_path.string() + ": " + e.what());
    }
    if (meta.value("dtype", "") != "f64" || meta.value("order", "") != "row-major") {
        throw std::runtime_error("unsupported dump encoding in " + meta_path.string());
    }
    Grid grid(meta.at("lower").get<std::vector<double>>(),
              meta.at("upper").get<std::vector<double>>(),
              meta.at("node_counts").get<std::vector<std::size_t>>(),
              meta.at("periodic").get<std::vector<bool>>());
    if (meta.at("dims").get<std::size_t>() != grid.dim_count()) {
        throw std::runtime_error("dump dims field disagrees with bounds in " + meta_path.string());
    }
    std::vector<std::string> names;
    if (meta.contains("dim_names")) names = meta["dim_names"].get<std::vector<std::string>>();

    const auto payload = dump_payload_path(meta_path);
    std::ifstream bin(payload, std::ios::binary | std::ios::ate);
    if (!bin) throw std::runtime_error("cannot open " + payload.string());
    const auto bytes = static_cast<std::size_t>(bin.tellg());
    if (bytes != grid.node_count() * sizeof(std::uint64_t)) {
        throw std::runtime_error("payload size mismatch in " + payload.string());
    }
    bin.seekg(0);
    std::vector<std::uint64_t> words(grid.node_count());
    bin.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
    std::vector<double> values(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        values[i] = std::bit_cast<double>(to_little_endian(words[i]));
    }
    return {ValueFn(std::move(grid), std::move(values)), std::move(names)};
}

}  // namespace hjreach
