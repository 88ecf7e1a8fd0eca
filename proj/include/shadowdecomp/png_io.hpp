#pragma once

#include <png.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "image.hpp"

namespace shadowdecomp {

namespace detail {

class PngReader {
public:
    explicit PngReader(const std::filesystem::path& path) : path_(path) {
        image_.version = PNG_IMAGE_VERSION;
        if (!std::filesystem::exists(path)) {
            throw IoError("cannot read '" + path.string() + "': file does not exist");
        }
        if (png_image_begin_read_from_file(&image_, path.string().c_str()) == 0) {
            throw IoError("cannot decode '" + path.string() + "': " + image_.message);
        }
        if (image_.format & PNG_FORMAT_FLAG_LINEAR) {
            throw IoError("'" + path.string() + "': 16-bit PNG is not supported");
        }
    }
    ~PngReader() { png_image_free(&image_); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;

    [[nodiscard]] bool color() const noexcept { return (image_.format & PNG_FORMAT_FLAG_COLOR) != 0; }
    [[nodiscard]] bool alpha() const noexcept { return (image_.format & PNG_FORMAT_FLAG_ALPHA) != 0; }
    [[nodiscard]] std::size_t width() const noexcept { return image_.width; }
    [[nodiscard]] std::size_t height() const noexcept { return image_.height; }

    /// Decodes to 8-bit samples in `format`; returns interleaved bytes.
    std::vector<std::uint8_t> read(png_uint_32 format) {
        image_.format = format;
        std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image_));
        if (png_image_finish_read(&image_, nullptr, buffer.data(), 0, nullptr) == 0) {
            throw IoError("cannot decode '" + path_.string() + "': " + image_.message);
        }
        return buffer;
    }

private:
    std::filesystem::path path_;
    png_image image_{};
};

inline std::uint8_t quantize(double v) noexcept {
    // std::round rounds half away from zero.
    return static_cast<std::uint8_t>(std::round(clamp01(v) * 255.0));
}

inline void write_png(const std::filesystem::path& path, std::size_t width, std::size_t height,
                      png_uint_32 format, const std::vector<std::uint8_t>& bytes) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0, nullptr) == 0) {
        const std::string message = image.message;
        png_image_free(&image);
        throw IoError("cannot write '" + path.string() + "': " + message);
    }
}

}  // namespace detail

/// Loads an 8-bit RGB PNG; each byte v becomes v/255.
[[nodiscard]] inline ImageBuf load_image(const std::filesystem::path& path) {
    detail::PngReader reader(path);
    if (!reader.color() || reader.alpha()) {
        throw IoError("'" + path.string() + "': expected a 3-channel RGB image");
    }
    const auto bytes = reader.read(PNG_FORMAT_RGB);
    std::vector<double> data(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) data[i] = bytes[i] / 255.0;
    return ImageBuf(reader.width(), reader.height(), std::move(data));
}

/// Loads a mask PNG (gray or RGB, optional alpha); channel 0 is used, scaled to [0,1].
[[nodiscard]] inline MaskBuf load_mask(const std::filesystem::path& path) {
    detail::PngReader reader(path);
    png_uint_32 format = PNG_FORMAT_GRAY;
    std::size_t stride = 1;
    if (reader.color()) {
        format = reader.alpha() ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
        stride = reader.alpha() ? 4 : 3;
    } else if (reader.alpha()) {
        format = PNG_FORMAT_GA;
        stride = 2;
    }
    const auto bytes = reader.read(format);
    std::vector<double> data(reader.width() * reader.height());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = bytes[i * stride] / 255.0;
    return MaskBuf(reader.width(), reader.height(), std::move(data));
}

/// Loads a mask and binarizes it: values >= 0.5 become 1, the rest 0.
[[nodiscard]] inline MaskBuf load_binary_mask(const std::filesystem::path& path) {
    MaskBuf mask = load_mask(path);
    for (double& v : mask.data()) v = v >= 0.5 ? 1.0 : 0.0;
    return mask;
}

/// Writes an 8-bit RGB PNG; values are clamped to [0,1] and rounded half away from zero.
inline void save_image(const ImageBuf& img, const std::filesystem::path& path) {
    const auto src = img.data();
    std::vector<std::uint8_t> bytes(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) bytes[i] = detail::quantize(src[i]);
    detail::write_png(path, img.width(), img.height(), PNG_FORMAT_RGB, bytes);
}

/// Writes a single-channel 8-bit PNG with value round(clamp(v) * 255). Used for masks and mattes.
inline void save_mask(const MaskBuf& mask, const std::filesystem::path& path) {
    const auto src = mask.data();
    std::vector<std::uint8_t> bytes(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) bytes[i] = detail::quantize(src[i]);
    detail::write_png(path, mask.width(), mask.height(), PNG_FORMAT_GRAY, bytes);
}

/// Lossless sidecar: raw little-endian float32 samples, row-major, channels interleaved. No header.
template <std::size_t C>
void save_float_sidecar(const Raster<C>& raster, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (double v : raster.data()) {
        auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        const char bytes[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                               static_cast<char>((bits >> 16) & 0xff), static_cast<char>((bits >> 24) & 0xff)};
        out.write(bytes, 4);
    }
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

/// Reads a float32 sidecar; the dimensions come from the caller since the file has no header.
template <std::size_t C>
[[nodiscard]] Raster<C> load_float_sidecar(const std::filesystem::path& path, std::size_t width,
                                           std::size_t height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    const std::size_t count = width * height * C;
    std::vector<char> raw(count * 4);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()) || in.peek() != std::ifstream::traits_type::eof()) {
        throw IoError("'" + path.string() + "': sidecar size does not match " + std::to_string(width) + "x" +
                      std::to_string(height) + "x" + std::to_string(C) + " float32 samples");
    }
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto* b = reinterpret_cast<const unsigned char*>(raw.data() + 4 * i);
        const std::uint32_t bits = b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
        data[i] = std::bit_cast<float>(bits);
    }
    return Raster<C>(width, height, std::move(data));
}

}  // namespace shadowdecomp
