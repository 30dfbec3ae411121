#include "hazstereo/io/pfm.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hazstereo/core/error.hpp"

namespace hazstereo {

namespace {

constexpr bool kHostLittle = std::endian::native == std::endian::little;

void append(std::vector<uint8_t>& out, const std::string& s) {
    out.insert(out.end(), s.begin(), s.end());
}

uint32_t byteswap32(uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
}

struct Cursor {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;

    // whitespace-delimited header token; PFM allows any blank separator
    std::string token() {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        const size_t start = pos;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
        if (start == pos) raise(Errc::MalformedHeader, "pfm: truncated header");
        return std::string(bytes.begin() + start, bytes.begin() + pos);
    }
};

} // namespace

std::vector<uint8_t> write_pfm(const ImageF& image, float scale) {
    if (image.channels() != 1 && image.channels() != 3)
        raise(Errc::ShapeMismatch, "pfm supports 1 or 3 channels");
    if (image.width() <= 0 || image.height() <= 0)
        raise(Errc::ShapeMismatch, "pfm needs positive dimensions");
    if (!(scale > 0.f)) raise(Errc::InvalidConfig, "pfm scale magnitude must be positive");

    std::vector<uint8_t> out;
    append(out, image.channels() == 3 ? "PF\n" : "Pf\n");
    append(out, std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n");
    // negative scale = little-endian payload; we always write host order
    char buf[48];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, kHostLittle ? -scale : scale);
    append(out, std::string(buf, p) + "\n");

    const size_t row_bytes = static_cast<size_t>(image.width()) * image.channels() * sizeof(float);
    for (int y = image.height() - 1; y >= 0; --y) {
        const auto* row = reinterpret_cast<const uint8_t*>(image.row(y));
        out.insert(out.end(), row, row + row_bytes);
    }
    return out;
}

PfmImage read_pfm(const std::vector<uint8_t>& bytes) {
    Cursor cur{bytes};
    const std::string magic = cur.token();
    int channels = 0;
    if (magic == "PF")
        channels = 3;
    else if (magic == "Pf")
        channels = 1;
    else
        raise(Errc::MalformedHeader, "pfm: bad magic '" + magic + "'");

    auto parse_int = [&](const std::string& t) {
        int v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || p != t.data() + t.size())
            raise(Errc::MalformedHeader, "pfm: bad dimension '" + t + "'");
        return v;
    };
    const int w = parse_int(cur.token());
    const int h = parse_int(cur.token());
    if (w <= 0 || h <= 0) raise(Errc::MalformedHeader, "pfm: non-positive dimensions");

    const std::string scale_tok = cur.token();
    float scale = 0.f;
    auto [sp, sec] = std::from_chars(scale_tok.data(), scale_tok.data() + scale_tok.size(), scale);
    if (sec != std::errc{} || sp != scale_tok.data() + scale_tok.size() || scale == 0.f)
        raise(Errc::MalformedHeader, "pfm: bad scale '" + scale_tok + "'");
    const bool payload_little = scale < 0.f;

    // exactly one whitespace byte separates header and payload
    if (cur.pos >= bytes.size() || !std::isspace(bytes[cur.pos]))
        raise(Errc::MalformedHeader, "pfm: missing header terminator");
    ++cur.pos;

    PfmImage pfm;
    pfm.scale = std::fabs(scale);
    pfm.image = ImageF(w, h, channels);
    const size_t need = static_cast<size_t>(w) * h * channels * sizeof(float);
    if (bytes.size() - cur.pos < need)
        raise(Errc::TruncatedPayload, "pfm: payload has " + std::to_string(bytes.size() - cur.pos) +
                                          " bytes, needs " + std::to_string(need));

    const size_t row_bytes = static_cast<size_t>(w) * channels * sizeof(float);
    size_t pos = cur.pos;
    for (int y = h - 1; y >= 0; --y) {
        std::memcpy(pfm.image.row(y), bytes.data() + pos, row_bytes);
        pos += row_bytes;
    }
    if (payload_little != kHostLittle) {
        auto* words = reinterpret_cast<uint32_t*>(pfm.image.data());
        for (size_t i = 0; i < pfm.image.size(); ++i) words[i] = byteswap32(words[i]);
    }
    return pfm;
}

std::vector<uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) raise(Errc::IoError, "cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) raise(Errc::IoError, "read failed: " + path);
    return bytes;
}

void write_file_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) raise(Errc::IoError, "cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) raise(Errc::IoError, "write failed: " + path);
}

void write_pfm_file(const std::string& path, const ImageF& image, float scale) {
    write_file_bytes(path, write_pfm(image, scale));
}

ImageF read_pfm_file(const std::string& path) { return read_pfm(read_file_bytes(path)).image; }

} // namespace hazstereo
