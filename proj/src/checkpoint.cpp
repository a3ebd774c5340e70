#include "lpns/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace lpns {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization assumes a little-endian host");
static_assert(sizeof(double) == 8);

constexpr char kMagic[4] = {'L', 'P', 'N', 'S'};

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const RealVectorField& f) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_checkpoint: cannot open " + path.string());

    const Grid& g = f.grid();
    os.write(kMagic, sizeof kMagic);
    put_u32(os, kCheckpointVersion);
    put_u32(os, static_cast<std::uint32_t>(g.dim()));
    put_u32(os, static_cast<std::uint32_t>(g.points_per_axis()));
    const double period = g.period();
    os.write(reinterpret_cast<const char*>(&period), sizeof period);
    for (int m = 0; m < g.dim(); ++m) {
        auto c = f.component(m);
        os.write(reinterpret_cast<const char*>(c.data()),
                 static_cast<std::streamsize>(c.size() * sizeof(double)));
    }
    if (!os) throw std::runtime_error("write_checkpoint: write failed for " + path.string());
}

RealVectorField read_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_checkpoint: cannot open " + path.string());

    char magic[4] = {};
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("read_checkpoint: bad magic in " + path.string());

    const std::uint32_t version = get_u32(is);
    if (version != kCheckpointVersion)
        throw std::runtime_error("read_checkpoint: unsupported version " + std::to_string(version));

    const std::uint32_t d = get_u32(is);
    const std::uint32_t n = get_u32(is);
    double period = 0.0;
    is.read(reinterpret_cast<char*>(&period), sizeof period);
    if (!is) throw std::runtime_error("read_checkpoint: truncated header in " + path.string());

    RealVectorField f(make_grid(static_cast<int>(d), static_cast<int>(n), period));
    for (int m = 0; m < f.dim(); ++m) {
        auto c = f.component(m);
        is.read(reinterpret_cast<char*>(c.data()),
                static_cast<std::streamsize>(c.size() * sizeof(double)));
    }
    if (!is) throw std::runtime_error("read_checkpoint: truncated payload in " + path.string());
    is.peek();
    if (!is.eof()) throw std::runtime_error("read_checkpoint: trailing bytes in " + path.string());
    return f;
}

}  // namespace lpns
