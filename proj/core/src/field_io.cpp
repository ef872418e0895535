#include "aclab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace aclab {

namespace {

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& field) {
    const auto& g = field.grid();
    nlohmann::json meta = {{"dim", g.dim()},
                           {"points_per_axis", g.points()},
                           {"extent", g.extent()},
                           {"epsilon", field.epsilon()},
                           {"time", field.time()}};
    out << meta.dump() << '\n';
    for (double v : field.values()) {
        std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
        char buf[8];
        std::memcpy(buf, &bits, 8);
        out.write(buf, 8);
    }
    if (!out) throw std::runtime_error("failed to write field");
}

ScalarField read_field(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("field snapshot is missing its header");
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("bad field header: ") + e.what());
    }
    for (const char* k : {"dim", "points_per_axis", "extent", "epsilon", "time"})
        if (!meta.contains(k)) throw std::runtime_error(std::string("field header lacks '") + k + "'");
    Grid g(meta["dim"].get<int>(), meta["points_per_axis"].get<int>(), meta["extent"].get<double>());
    std::vector<double> v(g.size());
    for (auto& x : v) {
        char buf[8];
        if (!in.read(buf, 8)) throw std::runtime_error("field snapshot is truncated");
        std::uint64_t bits;
        std::memcpy(&bits, buf, 8);
        x = std::bit_cast<double>(to_little(bits));
    }
    return ScalarField(g, std::move(v), meta["epsilon"].get<double>(), meta["time"].get<double>());
}

void write_field(const std::filesystem::path& path, const ScalarField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_field(out, field);
}

ScalarField read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_field(in);
}

}  // namespace aclab
