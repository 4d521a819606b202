#pragma once

#include <map>
#include <string>

#include "gqe/geometry.hpp"

namespace gqe {

// Canonical geometry text format:
//   geometry v1
//   points <P>
//   lines <L>
//   <space-separated ascending point ids, one line per geometry line>
// '#' starts a comment.  Round trips are bit-exact.
void export_geometry(const Geometry& g, const std::string& path);
Geometry import_geometry(const std::string& path);

std::string geometry_to_string(const Geometry& g);
Geometry geometry_from_string(const std::string& text);

// Sidecar model files: "key value" per line, '#' comments.
void write_model_file(const std::string& path, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_model_file(const std::string& path);

// Serialized point/line map files for covers: one integer per line, row i
// holding the image of id i.
void write_map_file(const std::string& path, const std::vector<int>& map);
std::vector<int> read_map_file(const std::string& path);

}  // namespace gqe
