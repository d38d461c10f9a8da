#pragma once

#include <string>

#include "solidangle/manifold.hpp"

namespace solidangle {

// Manifold specification files:
//   {"kind":"circle"}
//   {"kind":"torus_knot","p":2,"q":3,"R":2.0,"r":0.5}
//   {"kind":"polyline","points":[[x,y,z],...]}
//   {"kind":"flat_torus4","R":2.0,"r":0.5}
// Unknown or missing fields raise ConfigError. The result is validated.
ManifoldPtr parse_manifold(const std::string& text);
ManifoldPtr load_manifold(const std::string& path);

}  // namespace solidangle
