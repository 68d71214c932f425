#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mdq::io {

/// CRC-32 (IEEE 802.3, reflected polynomial 0xEDB88320) of `bytes`.
std::uint32_t crc32(const std::uint8_t* bytes, std::size_t len);

/// Little-endian byte sink for the dataset and checkpoint formats.
class ByteWriter {
public:
    void u8(std::uint8_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f32(float v);
    void f64(double v);
    void raw(const void* data, std::size_t len);

    /// Length-prefixed (u32) UTF-8 string.
    void str(const std::string& s);

    /// Appends the CRC-32 of everything written so far. Call last.
    void append_crc();

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

/// Little-endian cursor over an in-memory file image. Reads past the end
/// throw truncation_error.
class ByteReader {
public:
    ByteReader(const std::uint8_t* bytes, std::size_t len) : bytes_(bytes), len_(len) {}
    explicit ByteReader(const std::vector<std::uint8_t>& bytes)
        : ByteReader(bytes.data(), bytes.size()) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    float f32();
    double f64();
    void raw(void* out, std::size_t len);
    std::string str();

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return len_ - pos_; }

private:
    void need(std::size_t len) const;

    const std::uint8_t* bytes_;
    std::size_t len_;
    std::size_t pos_ = 0;
};

/// Whole-file read/write; failures raise io_error naming the path.
std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_text_file(const std::string& path, const std::string& text);

/// Validates the trailing CRC-32 of a container file: the last 4 bytes
/// must equal the CRC of everything before them. Throws truncation_error
/// when the file cannot hold a checksum, checksum_error on mismatch.
void check_trailing_crc(const std::vector<std::uint8_t>& bytes);

} // namespace mdq::io
