#pragma once

#include <string>
#include <vector>

#include "efdiv/cli.hpp"
#include "json.hpp"

namespace efdiv::cli {

using Report = nlohmann::ordered_json;

/// Shortest text that parses back to exactly `x`.
[[nodiscard]] std::string number_text(double x);

/// JSON is emitted as-is; CSV and plain flatten objects to `key.sub` and
/// arrays to `key[i]`. Numbers always use the shortest round-trip form.
[[nodiscard]] std::string render(const Report& report, Format format);

[[nodiscard]] std::string render_repro(const std::vector<ReproRow>& rows, bool all_pass, Format format);

}  // namespace efdiv::cli
