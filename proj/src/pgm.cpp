#include "noduleseg/pgm.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nseg {
namespace {

[[noreturn]] void fail(const std::filesystem::path& path, long offset, const std::string& what) {
    std::ostringstream os;
    os << path.string() << ": " << what << " (at byte offset " << offset << ")";
    throw DecodeError(os.str());
}

// Skips whitespace and '#' comment lines between header tokens.
void skip_ws(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            while (c != '\n' && c != EOF) c = in.get();
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            in.get();
        } else {
            return;
        }
    }
}

long read_uint(std::istream& in, const std::filesystem::path& path, const char* field) {
    skip_ws(in);
    long v = 0;
    bool got = false;
    while (std::isdigit(in.peek())) {
        v = v * 10 + (in.get() - '0');
        got = true;
        if (v > 1'000'000'000L) fail(path, static_cast<long>(in.tellg()), std::string(field) + " out of range");
    }
    if (!got) fail(path, static_cast<long>(in.tellg()), std::string("missing or non-numeric ") + field);
    return v;
}

}  // namespace

GrayImage load_gray_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        fail(path, 0, std::string("unsupported magic \"") + magic[0] + magic[1] + "\", expected P5");

    long w = read_uint(in, path, "width");
    long h = read_uint(in, path, "height");
    long maxval = read_uint(in, path, "maxval");
    if (w <= 0 || h <= 0) fail(path, static_cast<long>(in.tellg()), "non-positive dimensions");
    if (maxval <= 0 || maxval > 65535) fail(path, static_cast<long>(in.tellg()), "maxval 0 or > 65535");

    // Exactly one whitespace byte separates the header from the payload.
    int sep = in.get();
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
        fail(path, static_cast<long>(in.tellg()), "missing header/payload separator");

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    const bool wide = maxval > 255;
    const size_t n = img.size();
    std::vector<unsigned char> raw(n * (wide ? 2 : 1));
    long payload_at = static_cast<long>(in.tellg());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        fail(path, payload_at + static_cast<long>(in.gcount()), "truncated payload");

    if (wide) {
        for (size_t i = 0; i < n; ++i)
            img.pixels[i] = static_cast<uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    } else {
        for (size_t i = 0; i < n; ++i) img.pixels[i] = raw[i];
    }
    return img;
}

void save_gray_image(const GrayImage& img, const std::filesystem::path& path) {
    uint16_t maxval = 0;
    for (uint16_t p : img.pixels) maxval = std::max(maxval, p);
    const bool wide = maxval > 255;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n" << (wide ? 65535 : 255) << "\n";
    if (wide) {
        std::vector<unsigned char> raw(img.size() * 2);
        for (size_t i = 0; i < img.size(); ++i) {
            raw[2 * i] = static_cast<unsigned char>(img.pixels[i] >> 8);
            raw[2 * i + 1] = static_cast<unsigned char>(img.pixels[i] & 0xff);
        }
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    } else {
        std::vector<unsigned char> raw(img.size());
        for (size_t i = 0; i < img.size(); ++i) raw[i] = static_cast<unsigned char>(img.pixels[i]);
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    }
    if (!out) throw IoError("write failed for " + path.string());
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
    std::vector<unsigned char> raw(mask.bits.size());
    for (size_t i = 0; i < mask.bits.size(); ++i) raw[i] = mask.bits[i] ? 255 : 0;
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

BinaryMask load_mask(const std::filesystem::path& path) {
    GrayImage img = load_gray_image(path);
    BinaryMask mask(img.width, img.height);
    for (size_t i = 0; i < img.size(); ++i) mask.bits[i] = img.pixels[i] >= 128 ? 1 : 0;
    return mask;
}

}  // namespace nseg
