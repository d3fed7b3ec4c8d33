#pragma once

#include <string>
#include <vector>

#include "crkfr/driver.hpp"

namespace crkfr {

/// Parses an INI run configuration with sections [run] [mesh] [scheme]
/// [limiter] [boundary] [physics] [output]. Overrides have the form
/// "section.key=value" and are applied before validation. Unknown sections or
/// keys, missing required keys and invalid values throw ConfigError.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {});

/// Every accepted key as "section.key".
const std::vector<std::string>& config_keys();

}  // namespace crkfr
