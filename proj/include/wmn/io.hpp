#pragma once

#include "wmn/topology.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace wmn {

// Topology file: JSON object with keys area, links[{a,b,id}], nodes[{id,x,y}],
// radios_per_node, tx_range. Keys are written in sorted order.
void write_topology(std::ostream& os, const MeshTopology& topo);
MeshTopology read_topology(std::istream& is);

MeshTopology load_topology(const std::filesystem::path& path);
void save_topology(const std::filesystem::path& path, const MeshTopology& topo);

void write_global_metrics(std::ostream& os, const GlobalMetrics& m);

// Fixed 6-decimal rendering used by every CSV writer.
std::string format_real(double x);

std::string read_text_file(const std::filesystem::path& path);
// Creates parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Naive comma split; fields never contain commas.
std::vector<std::vector<std::string>> parse_csv(std::istream& is);

} // namespace wmn
