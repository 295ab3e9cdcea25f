#include "obslab/io/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace obslab {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field dumps are little-endian; big-endian hosts are unsupported");

constexpr int64_t kMagic = 0x314C46'42414C47LL;  // "GLAB" "FL1" tag
constexpr int64_t kVersion = 1;

struct Header {
    int64_t magic;
    int64_t version;
    int64_t dim;
    int64_t count;
    double h;
    double radius;
    double gamma;
    double reserved;
};
static_assert(sizeof(Header) == 8 * 8);

}  // namespace

void write_field(const std::string& path, const GridField& field, double gamma) {
    const GridDomain& dom = field.domain();
    Header hd{kMagic, kVersion, dom.dim(), dom.box_size(),
              dom.spacing(), dom.radius(), gamma, 0.0};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(&hd), sizeof(hd));
    out.write(reinterpret_cast<const char*>(field.values().data()),
              static_cast<std::streamsize>(sizeof(double) * field.values().size()));
    if (!out) throw std::runtime_error("short write: " + path);
}

LoadedField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open field dump: " + path);
    Header hd{};
    in.read(reinterpret_cast<char*>(&hd), sizeof(hd));
    if (!in || hd.magic != kMagic)
        throw std::invalid_argument("not a field dump: " + path);
    if (hd.version != kVersion)
        throw std::invalid_argument("unsupported field dump version");

    auto dom = std::make_shared<GridDomain>(
        build_domain(static_cast<int>(hd.dim), hd.h, hd.radius));
    if (dom->box_size() != hd.count)
        throw std::invalid_argument("field dump count disagrees with its lattice header");

    LoadedField out{GridField(dom), hd.gamma};
    in.read(reinterpret_cast<char*>(out.field.values().data()),
            static_cast<std::streamsize>(sizeof(double) * out.field.values().size()));
    if (!in) throw std::invalid_argument("truncated field dump: " + path);
    return out;
}

}  // namespace obslab
