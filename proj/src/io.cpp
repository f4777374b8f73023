#include "wmn/io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace wmn {

using nlohmann::json;

void write_topology(std::ostream& os, const MeshTopology& topo)
{
    json j;
    j["area"] = {{"height", topo.area.height}, {"width", topo.area.width}};
    j["radios_per_node"] = topo.radios_per_node;
    j["tx_range"] = topo.tx_range;
    j["nodes"] = json::array();
    for (const Node& n : topo.nodes)
        j["nodes"].push_back({{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y}});
    j["links"] = json::array();
    for (const Link& l : topo.links)
        j["links"].push_back({{"a", l.a}, {"b", l.b}, {"id", l.id}});
    os << j.dump(1) << '\n';
}

MeshTopology read_topology(std::istream& is)
{
    MeshTopology topo;
    try {
        const json j = json::parse(is);
        topo.area.width = j.at("area").at("width").get<double>();
        topo.area.height = j.at("area").at("height").get<double>();
        topo.radios_per_node = j.at("radios_per_node").get<unsigned>();
        topo.tx_range = j.at("tx_range").get<double>();
        for (const auto& n : j.at("nodes"))
            topo.nodes.push_back({n.at("id").get<NodeId>(), {n.at("x").get<double>(), n.at("y").get<double>()}});
        for (const auto& l : j.at("links"))
            topo.links.push_back({l.at("id").get<LinkId>(), l.at("a").get<NodeId>(), l.at("b").get<NodeId>()});
    } catch (const json::exception& e) {
        throw Error(fmt::format("[topology] malformed topology file: {}", e.what()));
    }
    check_structure(topo);
    return topo;
}

MeshTopology load_topology(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("[topology] cannot open {}", path.string()));
    return read_topology(in);
}

void save_topology(const std::filesystem::path& path, const MeshTopology& topo)
{
    std::ostringstream os;
    write_topology(os, topo);
    write_text_file(path, os.str());
}

void write_global_metrics(std::ostream& os, const GlobalMetrics& m)
{
    json j;
    j["clustering_coefficient"] = m.clustering_coefficient;
    j["connected"] = m.connected;
    j["density"] = m.density;
    j["geo_diameter_m"] = m.geo_diameter;
    j["hop_diameter"] = m.hop_diameter;
    j["min_eccentricity_m"] = m.min_eccentricity;
    os << j.dump(1) << '\n';
}

std::string format_real(double x)
{
    return fmt::format("{:.6f}", x);
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(fmt::format("cannot open {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(fmt::format("cannot write {}", path.string()));
    out << text;
}

std::vector<std::vector<std::string>> parse_csv(std::istream& is)
{
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> row;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            row.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace wmn
