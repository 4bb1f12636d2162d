#include "feas/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "feas/errors.hpp"

namespace feas::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

constexpr char magic[4] = {'F', 'E', 'A', 'S'};
constexpr std::uint8_t format_version = 1;

void put_u64(std::ofstream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}

void put_f64(std::ofstream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), 8);
}

} // namespace

void write_snapshot(const State& s, double alpha, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open snapshot for writing: " + path);
    const Grid& g = s.rho.grid();
    os.write(magic, 4);
    const std::uint8_t ver = format_version;
    const std::uint8_t nd = static_cast<std::uint8_t>(g.ndims());
    os.write(reinterpret_cast<const char*>(&ver), 1);
    os.write(reinterpret_cast<const char*>(&nd), 1);
    for (int a = 0; a < g.ndims(); ++a) put_u64(os, static_cast<std::uint64_t>(g.size(a)));
    put_f64(os, s.time);
    put_f64(os, alpha);
    os.write(reinterpret_cast<const char*>(s.rho.values().data()),
             static_cast<std::streamsize>(8 * g.total()));
    os.write(reinterpret_cast<const char*>(s.u.values().data()),
             static_cast<std::streamsize>(8 * g.total()));
    if (!os) throw IoError("short write: " + path);
}

SnapshotData read_snapshot_full(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open snapshot: " + path);
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, magic, 4) != 0) throw IoError("bad snapshot magic: " + path);
    std::uint8_t ver = 0, nd = 0;
    is.read(reinterpret_cast<char*>(&ver), 1);
    is.read(reinterpret_cast<char*>(&nd), 1);
    if (!is) throw IoError("truncated snapshot header: " + path);
    if (ver != format_version)
        throw IoError("unsupported snapshot version " + std::to_string(ver) + ": " + path);
    if (nd != 1 && nd != 2) throw IoError("snapshot ndims must be 1 or 2: " + path);

    std::uint64_t sizes[2] = {0, 0};
    for (int a = 0; a < nd; ++a) is.read(reinterpret_cast<char*>(&sizes[a]), 8);
    double time = 0.0, alpha = 0.0;
    is.read(reinterpret_cast<char*>(&time), 8);
    is.read(reinterpret_cast<char*>(&alpha), 8);
    if (!is) throw IoError("truncated snapshot header: " + path);

    const Grid g = nd == 1 ? Grid::line(static_cast<int>(sizes[0]))
                           : Grid::plane(static_cast<int>(sizes[0]), static_cast<int>(sizes[1]));
    const long n = g.total();
    std::vector<double> rho(static_cast<std::size_t>(n)), u(static_cast<std::size_t>(n));
    is.read(reinterpret_cast<char*>(rho.data()), static_cast<std::streamsize>(8 * n));
    is.read(reinterpret_cast<char*>(u.data()), static_cast<std::streamsize>(8 * n));
    if (!is) {
        const auto got = is.gcount();
        throw IoError("truncated snapshot payload: " + path + " (expected " +
                      std::to_string(16 * n) + " bytes of field data, last read got " +
                      std::to_string(got) + ")");
    }
    SnapshotData out{{Field::from_values(g, std::move(rho)), Field::from_values(g, std::move(u)), time},
                     alpha};
    return out;
}

State read_snapshot(const std::string& path) { return read_snapshot_full(path).state; }

} // namespace feas::io
