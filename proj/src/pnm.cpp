#include "conicpose/pnm.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace conicpose {

PnmParseError::PnmParseError(const std::string& msg, size_t off)
    : std::runtime_error(msg + " (byte offset " + std::to_string(off) + ")"), offset(off) {}

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::istream& in) : in_(in) {}

    int get() {
        const int c = in_.get();
        if (c != EOF) ++offset_;
        return c;
    }

    // Skips whitespace and '#' comments, then reads one unsigned decimal field.
    long read_field(const char* what) {
        int c = get();
        while (true) {
            if (c == '#') {
                while (c != '\n' && c != EOF) c = get();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                c = get();
                continue;
            } else {
                break;
            }
        }
        if (c == EOF) throw PnmParseError(std::string("missing ") + what, offset_);
        if (c < '0' || c > '9')
            throw PnmParseError(std::string("malformed ") + what, offset_ - 1);
        long value = 0;
        while (c >= '0' && c <= '9') {
            value = value * 10 + (c - '0');
            if (value > 1000000000L)
                throw PnmParseError(std::string("overflow in ") + what, offset_);
            c = get();
        }
        // the single whitespace terminating the field was just consumed
        if (c == EOF) throw PnmParseError("truncated header", offset_);
        return value;
    }

    size_t offset() const { return offset_; }

private:
    std::istream& in_;
    size_t offset_ = 0;
};

std::vector<double> read_samples(std::istream& in, size_t count, long maxval, size_t base) {
    std::vector<double> out(count);
    const double inv = 1.0 / static_cast<double>(maxval);
    if (maxval <= 255) {
        std::vector<uint8_t> raw(count);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
        if (static_cast<size_t>(in.gcount()) != count)
            throw PnmParseError("truncated pixel data", base + static_cast<size_t>(in.gcount()));
        for (size_t i = 0; i < count; ++i) out[i] = raw[i] * inv;
    } else {
        std::vector<uint8_t> raw(2 * count);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(2 * count));
        if (static_cast<size_t>(in.gcount()) != 2 * count)
            throw PnmParseError("truncated pixel data", base + static_cast<size_t>(in.gcount()));
        for (size_t i = 0; i < count; ++i) {
            const unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
            out[i] = v * inv;
        }
    }
    return out;
}

}  // namespace

PnmImage read_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    HeaderReader hdr(in);
    const int m0 = hdr.get();
    const int m1 = hdr.get();
    if (m0 != 'P' || (m1 != '5' && m1 != '6'))
        throw PnmParseError("bad magic, expected P5 or P6", 0);
    const bool color = (m1 == '6');

    const long width = hdr.read_field("width");
    const long height = hdr.read_field("height");
    const long maxval = hdr.read_field("maxval");
    if (width <= 0 || height <= 0)
        throw PnmParseError("non-positive image dimensions", hdr.offset());
    if (maxval <= 0 || maxval > 65535)
        throw PnmParseError("maxval out of range [1,65535]", hdr.offset());

    const size_t pixels = static_cast<size_t>(width) * static_cast<size_t>(height);
    if (color) {
        ColorImage img(static_cast<int>(width), static_cast<int>(height));
        img.data = read_samples(in, 3 * pixels, maxval, hdr.offset());
        return img;
    }
    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    img.data = read_samples(in, pixels, maxval, hdr.offset());
    return img;
}

GrayImage read_gray(const std::filesystem::path& path) {
    PnmImage img = read_pnm(path);
    if (std::holds_alternative<GrayImage>(img)) return std::get<GrayImage>(std::move(img));
    return to_gray(std::get<ColorImage>(img));
}

namespace {

void write_payload(std::ostream& out, const std::vector<double>& data, int maxval) {
    if (maxval <= 255) {
        std::vector<uint8_t> raw(data.size());
        for (size_t i = 0; i < data.size(); ++i)
            raw[i] = static_cast<uint8_t>(std::lround(data[i] * maxval));
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    } else {
        std::vector<uint8_t> raw(2 * data.size());
        for (size_t i = 0; i < data.size(); ++i) {
            const unsigned v = static_cast<unsigned>(std::lround(data[i] * maxval));
            raw[2 * i] = static_cast<uint8_t>(v >> 8);
            raw[2 * i + 1] = static_cast<uint8_t>(v & 0xff);
        }
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    }
}

void write_pnm_impl(const std::filesystem::path& path, char magic, int w, int h,
                    const std::vector<double>& data, int maxval) {
    if (maxval < 1 || maxval > 65535) throw std::invalid_argument("maxval out of range");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << 'P' << magic << '\n' << w << ' ' << h << '\n' << maxval << '\n';
    write_payload(out, data, maxval);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_pgm(const GrayImage& img, const std::filesystem::path& path, int maxval) {
    write_pnm_impl(path, '5', img.width, img.height, img.data, maxval);
}

void write_ppm(const ColorImage& img, const std::filesystem::path& path, int maxval) {
    write_pnm_impl(path, '6', img.width, img.height, img.data, maxval);
}

}  // namespace conicpose
