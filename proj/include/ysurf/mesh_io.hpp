#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "ysurf/types.hpp"

namespace ysurf {

/// Mesh exchange document. Floats are written in shortest round-trip form, so
/// read -> write reproduces a document byte for byte.
nlohmann::json surface_to_json(const YSurface& surface);
YSurface surface_from_json(const nlohmann::json& doc);

std::string dump_document(const nlohmann::json& doc);

void write_surface(const YSurface& surface, const std::string& path);
YSurface read_surface(const std::string& path);

}  // namespace ysurf
