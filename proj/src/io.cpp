#include "wwl/io.hpp"

#include <cstring>
#include <fstream>

namespace wwl {

namespace {
template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
}  // namespace

void write_wwl1(const std::string& path, const RealField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("write_wwl1: cannot open " + path);
    os.write("WWL1", 4);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid->nx()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid->ny()));
    put<double>(os, f.grid->lx());
    put<double>(os, f.grid->ly());
    put<double>(os, f.grid->eps());
    put<double>(os, f.grid->sigma());
    put<std::uint8_t>(os, static_cast<std::uint8_t>(f.parity));
    os.write(reinterpret_cast<const char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!os) throw ConfigError("write_wwl1: short write to " + path);
}

RealField read_wwl1(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("read_wwl1: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "WWL1", 4) != 0)
        throw ConfigError("read_wwl1: bad magic in " + path);
    const auto nx = get<std::uint32_t>(is);
    const auto ny = get<std::uint32_t>(is);
    const double lx = get<double>(is);
    const double ly = get<double>(is);
    const double eps = get<double>(is);
    const double sigma = get<double>(is);
    const auto ptag = get<std::uint8_t>(is);
    if (!is) throw ConfigError("read_wwl1: truncated header in " + path);
    auto grid = Grid::create(lx, ly, static_cast<int>(nx), static_cast<int>(ny), eps, sigma);
    RealField f(grid, static_cast<Parity>(ptag));
    is.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
    if (!is) throw ConfigError("read_wwl1: truncated samples in " + path);
    return f;
}

}  // namespace wwl
