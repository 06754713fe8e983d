#pragma once

#include <map>
#include <sstream>
#include <string>

#include "mobnet/network.hpp"

namespace mobnet {

// Graphviz rendering of a network: every universe node (isolates included),
// one labeled edge per ordered institution pair with its total flow.
// Node and edge ordering is lexicographic, so output is reproducible.
inline std::string export_dot(const Network& net) {
  std::ostringstream os;
  os << "digraph mobility_" << net.year() << " {\n";
  for (const std::string& node : net.nodes()) {
    os << "  \"" << node << "\";\n";
  }
  std::map<std::pair<std::string, std::string>, std::int64_t> totals;
  for (const auto& [key, count] : net.weights()) {
    totals[{key.src, key.dst}] += count;
  }
  for (const auto& [arc, weight] : totals) {
    os << "  \"" << arc.first << "\" -> \"" << arc.second << "\" [label=" << weight << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace mobnet
