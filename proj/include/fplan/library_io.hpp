#pragma once

#include <string>

#include "fplan/funnel.hpp"

namespace fplan {

// Versioned single-document library format (format_version 1). Doubles are
// serialized with shortest round-trip formatting, so load(save(lib)) == lib.
void save_library(const FunnelLibrary& lib, const std::string& path);
FunnelLibrary load_library(const std::string& path);

std::string library_to_string(const FunnelLibrary& lib);
FunnelLibrary library_from_string(const std::string& text);

}  // namespace fplan
