#include "tspkit/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "tspkit/errors.hpp"

namespace tspkit {

namespace {

struct Reader {
    std::vector<std::uint8_t> bytes;

    void require(std::size_t offset, std::size_t count, const char* what) const {
        if (offset + count > bytes.size())
            throw ParseError(std::string("wav: truncated while reading ") + what, offset);
    }
    std::uint32_t u32(std::size_t offset, const char* what) const {
        require(offset, 4, what);
        std::uint32_t v;
        std::memcpy(&v, bytes.data() + offset, 4);
        return v;
    }
    std::uint16_t u16(std::size_t offset, const char* what) const {
        require(offset, 2, what);
        std::uint16_t v;
        std::memcpy(&v, bytes.data() + offset, 2);
        return v;
    }
    bool tag_is(std::size_t offset, const char* tag) const {
        require(offset, 4, tag);
        return std::memcmp(bytes.data() + offset, tag, 4) == 0;
    }
};

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.insert(out.end(), {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                           static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)});
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.insert(out.end(), {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8)});
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

} // namespace

SampledSignal read_wav(const std::string& path, std::string* warning) {
    Reader r;
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("wav: cannot open " + path);
        r.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    if (!r.tag_is(0, "RIFF")) throw ParseError("wav: missing RIFF tag", 0);
    r.u32(4, "RIFF size");
    if (!r.tag_is(8, "WAVE")) throw ParseError("wav: missing WAVE tag", 8);

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    std::size_t data_offset = 0, data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= r.bytes.size()) {
        const std::size_t chunk_start = pos;
        const std::uint32_t size = r.u32(pos + 4, "chunk size");
        const std::size_t body = pos + 8;
        if (r.tag_is(pos, "fmt ")) {
            if (size < 16) throw ParseError("wav: fmt chunk too small", chunk_start);
            r.require(body, 16, "fmt chunk");
            format = r.u16(body, "format code");
            channels = r.u16(body + 2, "channel count");
            rate = r.u32(body + 4, "sample rate");
            bits = r.u16(body + 14, "bits per sample");
            if (format == kFormatExtensible) {
                if (size < 40) throw ParseError("wav: extensible fmt chunk too small", chunk_start);
                // The first two GUID bytes hold the actual format code.
                format = r.u16(body + 24, "extensible sub-format");
            }
            have_fmt = true;
        } else if (r.tag_is(pos, "data")) {
            data_offset = body;
            data_size = size;
            r.require(body, size, "data chunk");
        }
        pos = body + size + (size & 1);
    }

    if (!have_fmt) throw ParseError("wav: no fmt chunk", r.bytes.size());
    if (data_offset == 0) throw ParseError("wav: no data chunk", r.bytes.size());
    if (channels == 0) throw ParseError("wav: zero channels", data_offset);
    if (rate == 0) throw ParseError("wav: zero sample rate", data_offset);

    std::size_t bytes_per_sample;
    if (format == kFormatPcm && bits == 16) bytes_per_sample = 2;
    else if (format == kFormatPcm && bits == 24) bytes_per_sample = 3;
    else if (format == kFormatFloat && bits == 32) bytes_per_sample = 4;
    else
        throw UnsupportedFormatError("wav: unsupported codec (format " + std::to_string(format) +
                                     ", " + std::to_string(bits) + " bits)");

    if (channels > 1 && warning)
        *warning = "multichannel file; using the first of " + std::to_string(channels) +
                   " channels";

    const std::size_t frame = bytes_per_sample * channels;
    const std::size_t n = data_size / frame;
    SampledSignal out;
    out.sample_rate_hz = static_cast<int>(rate);
    out.samples.resize(n);
    const std::uint8_t* p = r.bytes.data() + data_offset;
    for (std::size_t i = 0; i < n; ++i, p += frame) {
        if (bytes_per_sample == 2) {
            std::int16_t v;
            std::memcpy(&v, p, 2);
            out.samples[i] = static_cast<double>(v) / 32768.0;
        } else if (bytes_per_sample == 3) {
            const std::int32_t v =
                static_cast<std::int32_t>((static_cast<std::uint32_t>(p[0]) << 8 |
                                           static_cast<std::uint32_t>(p[1]) << 16 |
                                           static_cast<std::uint32_t>(p[2]) << 24)) >> 8;
            out.samples[i] = static_cast<double>(v) / 8388608.0;
        } else {
            float v;
            std::memcpy(&v, p, 4);
            out.samples[i] = v;
        }
    }
    return out;
}

void write_wav(const std::string& path, const SampledSignal& signal, WavFormat format) {
    if (signal.sample_rate_hz <= 0) throw ConfigError("wav: invalid sample rate");

    const bool is_float = format == WavFormat::float32;
    const std::uint16_t bytes_per_sample = format == WavFormat::pcm16 ? 2
                                           : format == WavFormat::pcm24 ? 3
                                                                        : 4;
    const auto rate = static_cast<std::uint32_t>(signal.sample_rate_hz);
    const auto data_size = static_cast<std::uint32_t>(signal.size() * bytes_per_sample);

    std::vector<std::uint8_t> out;
    out.reserve(64 + data_size);
    put_tag(out, "RIFF");
    const std::uint32_t fmt_size = is_float ? 18 : 16;
    const std::uint32_t fact_size = is_float ? 12 : 0;  // fact chunk incl. header
    put_u32(out, 4 + (8 + fmt_size) + fact_size + 8 + data_size + (data_size & 1));
    put_tag(out, "WAVE");

    put_tag(out, "fmt ");
    put_u32(out, fmt_size);
    put_u16(out, is_float ? kFormatFloat : kFormatPcm);
    put_u16(out, 1);  // mono
    put_u32(out, rate);
    put_u32(out, rate * bytes_per_sample);
    put_u16(out, bytes_per_sample);
    put_u16(out, static_cast<std::uint16_t>(bytes_per_sample * 8));
    if (is_float) put_u16(out, 0);  // cbSize

    if (is_float) {
        put_tag(out, "fact");
        put_u32(out, 4);
        put_u32(out, static_cast<std::uint32_t>(signal.size()));
    }

    put_tag(out, "data");
    put_u32(out, data_size);
    for (double x : signal.samples) {
        if (format == WavFormat::pcm16) {
            const auto v = static_cast<std::int16_t>(
                std::clamp<long long>(std::llround(x * 32768.0), -32768, 32767));
            put_u16(out, static_cast<std::uint16_t>(v));
        } else if (format == WavFormat::pcm24) {
            const auto v = static_cast<std::int32_t>(
                std::clamp<long long>(std::llround(x * 8388608.0), -8388608, 8388607));
            out.push_back(static_cast<std::uint8_t>(v));
            out.push_back(static_cast<std::uint8_t>(v >> 8));
            out.push_back(static_cast<std::uint8_t>(v >> 16));
        } else {
            const auto v = static_cast<float>(x);
            std::uint32_t bits;
            std::memcpy(&bits, &v, 4);
            put_u32(out, bits);
        }
    }
    if (data_size & 1) out.push_back(0);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("wav: cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw DataError("wav: write failed for " + path);
}

} // namespace tspkit
