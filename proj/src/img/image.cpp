#include "propaxis/img/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "propaxis/common/error.hpp"

namespace propaxis::img {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
bool next_header_token(std::istream& in, std::string& token) {
    token.clear();
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) break;
    }
    if (c == EOF) return false;
    do {
        token.push_back(static_cast<char>(c));
        c = in.get();
    } while (c != EOF && !std::isspace(c));
    return true;
}

int parse_positive(const std::string& token, const std::string& path, const char* what) {
    for (char ch : token)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            raise(ErrorKind::Malformed, path + ": non-numeric " + what + " in header");
    const long v = std::strtol(token.c_str(), nullptr, 10);
    if (v <= 0 || v > 1 << 20)
        raise(ErrorKind::Malformed, path + ": " + what + " out of range");
    return static_cast<int>(v);
}

} // namespace

RasterImage load_image(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::Io, "cannot read " + path);

    std::string magic;
    if (!next_header_token(f, magic)) raise(ErrorKind::Malformed, path + ": empty file");
    if (magic != "P5" && magic != "P6")
        raise(ErrorKind::Unsupported, path + ": unsupported magic number '" + magic + "'");

    std::string tok;
    if (!next_header_token(f, tok)) raise(ErrorKind::Malformed, path + ": missing width");
    const int width = parse_positive(tok, path, "width");
    if (!next_header_token(f, tok)) raise(ErrorKind::Malformed, path + ": missing height");
    const int height = parse_positive(tok, path, "height");
    if (!next_header_token(f, tok)) raise(ErrorKind::Malformed, path + ": missing maxval");
    const int maxval = parse_positive(tok, path, "maxval");
    if (maxval != 255)
        raise(ErrorKind::Unsupported, path + ": only maxval 255 is supported");

    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    RasterImage img(width, height);
    if (magic == "P5") {
        f.read(reinterpret_cast<char*>(img.luma.data()), static_cast<std::streamsize>(pixels));
        if (static_cast<std::size_t>(f.gcount()) != pixels)
            raise(ErrorKind::Malformed, path + ": truncated pixel payload");
    } else {
        std::vector<std::uint8_t> rgb(pixels * 3);
        f.read(reinterpret_cast<char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
        if (static_cast<std::size_t>(f.gcount()) != rgb.size())
            raise(ErrorKind::Malformed, path + ": truncated pixel payload");
        for (std::size_t i = 0; i < pixels; ++i) {
            const double y =
                0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
            img.luma[i] = static_cast<std::uint8_t>(std::lround(y));
        }
    }
    return img;
}

void save_pgm(const RasterImage& image, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::Io, "cannot write " + path);
    f << "P5\n" << image.width << " " << image.height << "\n255\n";
    f.write(reinterpret_cast<const char*>(image.luma.data()),
            static_cast<std::streamsize>(image.luma.size()));
}

RasterImage resize_area(const RasterImage& image, int new_width, int new_height) {
    if (new_width < 1 || new_height < 1)
        raise(ErrorKind::Domain, "resize_area: target dimensions must be positive");
    RasterImage out(new_width, new_height);
    const double sx = static_cast<double>(image.width) / new_width;
    const double sy = static_cast<double>(image.height) / new_height;
    for (int oy = 0; oy < new_height; ++oy) {
        const double y0 = oy * sy, y1 = (oy + 1) * sy;
        for (int ox = 0; ox < new_width; ++ox) {
            const double x0 = ox * sx, x1 = (ox + 1) * sx;
            double acc = 0.0;
            for (int y = static_cast<int>(y0); y < y1 && y < image.height; ++y) {
                const double cy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
                for (int x = static_cast<int>(x0); x < x1 && x < image.width; ++x) {
                    const double cx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
                    acc += cx * cy * image.at(x, y);
                }
            }
            out.at(ox, oy) = static_cast<std::uint8_t>(
                std::clamp(std::lround(acc / (sx * sy)), 0L, 255L));
        }
    }
    return out;
}

RasterImage resize_bilinear(const RasterImage& image, int new_width, int new_height) {
    if (new_width < 1 || new_height < 1)
        raise(ErrorKind::Domain, "resize_bilinear: target dimensions must be positive");
    RasterImage out(new_width, new_height);
    const double sx = static_cast<double>(image.width) / new_width;
    const double sy = static_cast<double>(image.height) / new_height;
    for (int oy = 0; oy < new_height; ++oy) {
        double fy = (oy + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(image.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, image.height - 1);
        const double wy = fy - y0;
        for (int ox = 0; ox < new_width; ++ox) {
            double fx = (ox + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(image.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, image.width - 1);
            const double wx = fx - x0;
            const double v = (1 - wy) * ((1 - wx) * image.at(x0, y0) + wx * image.at(x1, y0)) +
                             wy * ((1 - wx) * image.at(x0, y1) + wx * image.at(x1, y1));
            out.at(ox, oy) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

RasterImage normalize_max_side(const RasterImage& image, int target) {
    const int longer = std::max(image.width, image.height);
    if (longer == target) return image;
    const double scale = static_cast<double>(target) / longer;
    int nw, nh;
    if (image.width >= image.height) {
        nw = target;
        nh = std::max(1, static_cast<int>(std::lround(image.height * scale)));
    } else {
        nh = target;
        nw = std::max(1, static_cast<int>(std::lround(image.width * scale)));
    }
    return longer > target ? resize_area(image, nw, nh) : resize_bilinear(image, nw, nh);
}

} // namespace propaxis::img
