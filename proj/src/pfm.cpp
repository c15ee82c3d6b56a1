#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cfstereo/io.hpp"

namespace cfstereo {
namespace {

std::uint32_t byteswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0x0000ff00u) | ((v << 8) & 0x00ff0000u) | (v << 24);
}

std::string next_token(std::istream& in, const std::string& what) {
    std::string tok;
    if (!(in >> tok)) throw FormatError("PFM header truncated while reading " + what);
    return tok;
}

}  // namespace

Grid2D read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open PFM file '" + path.string() + "'");

    const std::string tag = next_token(in, "the type tag");
    if (tag == "PF") throw FormatError("'" + path.string() + "' is a color PFM (PF); expected grayscale (Pf)");
    if (tag != "Pf") throw FormatError("'" + path.string() + "' is not a PFM file (tag '" + tag + "')");

    long width = 0, height = 0;
    double scale = 0;
    try {
        width = std::stol(next_token(in, "the width"));
        height = std::stol(next_token(in, "the height"));
        scale = std::stod(next_token(in, "the scale"));
    } catch (const std::logic_error&) {
        throw FormatError("malformed PFM header in '" + path.string() + "'");
    }
    if (width <= 0 || height <= 0) throw FormatError("PFM dimensions must be positive");
    if (scale == 0 || !std::isfinite(scale)) throw FormatError("PFM scale must be a non-zero number");
    in.get();  // single whitespace byte ends the header

    const auto w = static_cast<std::size_t>(width), h = static_cast<std::size_t>(height);
    std::vector<std::uint32_t> raw(w * h);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
    if (static_cast<std::size_t>(in.gcount()) != raw.size() * 4) {
        throw FormatError("PFM payload truncated in '" + path.string() + "'");
    }

    const bool file_little = scale < 0;
    const bool host_little = std::endian::native == std::endian::little;
    Grid2D out({h, w});
    for (std::size_t fy = 0; fy < h; ++fy) {
        const std::size_t y = h - 1 - fy;
        for (std::size_t x = 0; x < w; ++x) {
            std::uint32_t bits = raw[fy * w + x];
            if (file_little != host_little) bits = byteswap32(bits);
            out(y, x) = static_cast<Real>(std::bit_cast<float>(bits));
        }
    }
    return out;
}

void write_pfm(const std::filesystem::path& path, const Grid2D& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write PFM file '" + path.string() + "'");
    const std::size_t h = map.dim(0), w = map.dim(1);
    std::ostringstream header;
    header << "Pf\n" << w << ' ' << h << "\n-1\n";
    out << header.str();

    const bool host_little = std::endian::native == std::endian::little;
    std::vector<std::uint32_t> raw(w * h);
    for (std::size_t fy = 0; fy < h; ++fy) {
        const std::size_t y = h - 1 - fy;
        for (std::size_t x = 0; x < w; ++x) {
            std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(map(y, x)));
            if (!host_little) bits = byteswap32(bits);
            raw[fy * w + x] = bits;
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
    if (!out) throw FormatError("failed writing PFM file '" + path.string() + "'");
}

std::size_t count_nonfinite(const Grid2D& map) {
    std::size_t n = 0;
    for (Real v : map.values()) n += !std::isfinite(v);
    return n;
}

}  // namespace cfstereo
