#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "cfstereo/io.hpp"

namespace cfstereo {
namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

// Reads one header integer, skipping whitespace and '#' comments.
long header_int(std::istream& in, const std::string& file) {
    int c = in.peek();
    while (c != EOF) {
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
        c = in.peek();
    }
    long v = 0;
    if (!(in >> v)) throw FormatError("malformed PNM header in '" + file + "'");
    return v;
}

}  // namespace

Grid2D read_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    const std::string file = path.string();
    if (!in) throw FormatError("cannot open image '" + file + "'");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P') throw FormatError("'" + file + "' is not a PGM/PPM file");
    if (magic[1] == '2' || magic[1] == '3') {
        throw FormatError("'" + file + "' is an ASCII PNM (P" + std::string(1, magic[1]) +
                          "); convert it to binary P5/P6, e.g. with `pnmtopnm` or ImageMagick");
    }
    if (magic[1] != '5' && magic[1] != '6') throw FormatError("unsupported PNM variant P" + std::string(1, magic[1]));
    const bool color = magic[1] == '6';

    const long width = header_int(in, file);
    const long height = header_int(in, file);
    const long maxval = header_int(in, file);
    if (width <= 0 || height <= 0) throw FormatError("PNM dimensions must be positive in '" + file + "'");
    if (maxval <= 0 || maxval > 65535) throw FormatError("PNM maxval must be in 1..65535 in '" + file + "'");
    in.get();

    const std::size_t w = static_cast<std::size_t>(width), h = static_cast<std::size_t>(height);
    const std::size_t channels = color ? 3 : 1;
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(w * h * channels * bytes_per_sample);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw FormatError("PNM payload truncated in '" + file + "'");

    auto sample = [&](std::size_t i) -> double {
        const double v = bytes_per_sample == 2 ? static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1])
                                               : static_cast<double>(raw[i]);
        return v / static_cast<double>(maxval);
    };
    Grid2D out({h, w});
    for (std::size_t i = 0; i < w * h; ++i) {
        out.data()[i] = color ? static_cast<Real>(kLumaR * sample(3 * i) + kLumaG * sample(3 * i + 1) +
                                                  kLumaB * sample(3 * i + 2))
                              : static_cast<Real>(sample(i));
    }
    return out;
}

void write_pgm(const std::filesystem::path& path, const Grid2D& image, unsigned maxval) {
    if (maxval == 0 || maxval > 65535) throw FormatError("PGM maxval must be in 1..65535");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write image '" + path.string() + "'");
    out << "P5\n" << image.dim(1) << ' ' << image.dim(0) << '\n' << maxval << '\n';
    const bool wide = maxval > 255;
    std::vector<unsigned char> raw;
    raw.reserve(image.size() * (wide ? 2 : 1));
    for (Real v : image.values()) {
        const double c = std::clamp(static_cast<double>(v), 0.0, 1.0);
        const auto s = static_cast<std::uint32_t>(std::lround(c * maxval));
        if (wide) raw.push_back(static_cast<unsigned char>(s >> 8));
        raw.push_back(static_cast<unsigned char>(s & 0xff));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw FormatError("failed writing image '" + path.string() + "'");
}

}  // namespace cfstereo
