#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "liouville/model.hpp"
#include "liouville/settings.hpp"
#include "liouville/solution.hpp"
#include "liouville/verify.hpp"

namespace liouville::io {

using nlohmann::json;

/// {"genus": 0, "elliptic": [{"position": [x, y], "eta": η}, ...],
///  "parabolic": [{"position": [x, y]}, ...], "periods": [[x, y], [x, y]],
///  "settings": {...}}. Throws Parse naming the offending field; the
/// result is not topology-checked.
[[nodiscard]] SourceConfiguration config_from_json(const json& j);
[[nodiscard]] json to_json(const SourceConfiguration& config);

/// Missing keys keep their defaults.
[[nodiscard]] SolverSettings settings_from_json(const json& j, SolverSettings base = {});
[[nodiscard]] json to_json(const SolverSettings& settings);

/// Throws Io when unreadable, Parse when malformed.
[[nodiscard]] json read_json(const std::filesystem::path& path);
/// Written to a sibling temporary and renamed into place.
void write_json_atomic(const std::filesystem::path& path, const json& j);

/// Line 1 "nx,ny,origin_re,origin_im,spacing"; then one line per row j
/// (bottom first) of nx values. Shortest round-trip decimal, locale-free.
void write_csv(const std::filesystem::path& path, const ScalarField& field);
[[nodiscard]] ScalarField read_csv(const std::filesystem::path& path, bool periodic = false);

/// Binary P6, one pixel per cell, top row first, linear blue–white–red map
/// over [min, max] of the field.
void write_ppm(const std::filesystem::path& path, const ScalarField& field);

[[nodiscard]] json to_json(const Diagnostics& d);
[[nodiscard]] json to_json(const VerificationReport& report);

[[nodiscard]] const char* to_string(Method m);

}  // namespace liouville::io
