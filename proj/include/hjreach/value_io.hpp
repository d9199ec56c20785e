#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hjreach/grid.hpp"

namespace hjreach {

/// A value function loaded from disk together with its optional dim names.
struct ValueDump {
    ValueFn value;
    std::vector<std::string> dim_names;
};

/// Path of the binary payload that sits next to a metadata file.
std::filesystem::path dump_payload_path(const std::filesystem::path& meta_path);

/**
 * Writes `<stem>.json` (grid metadata) and `<stem>.bin` (little-endian f64,
 * row-major). `meta_path` must end in ".json".
 */
void save_value(const std::filesystem::path& meta_path, const ValueFn& value,
                const std::vector<std::string>& dim_names = {});

ValueDump load_value(const std::filesystem::path& meta_path);

}  // namespace hjreach
