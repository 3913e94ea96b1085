#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hstm {

// Minimal POSIX ustar writer: regular files only, names up to 100 characters,
// 512-byte records, two zero blocks at the end. Readable by standard tar.
class TarWriter {
public:
    explicit TarWriter(const std::filesystem::path& path);
    ~TarWriter();

    TarWriter(const TarWriter&) = delete;
    TarWriter& operator=(const TarWriter&) = delete;

    void add(const std::string& name, std::span<const uint8_t> data, uint64_t mtime_s);
    // Writes the trailer and closes the file; add() is invalid afterwards.
    void finish();

private:
    struct Impl;
    Impl* impl_;
};

struct TarEntry {
    std::string name;
    std::vector<uint8_t> data;
};

// Reads every regular file from a ustar archive, in file order. Verifies
// header checksums and rejects truncation and duplicate names.
std::vector<TarEntry> read_tar(const std::filesystem::path& path);

}  // namespace hstm
