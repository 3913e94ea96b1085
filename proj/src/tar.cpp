#include "hstm/tar.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

namespace hstm {

namespace {

constexpr size_t kBlock = 512;

struct UstarHeader {
    char name[100];
    char mode[8];
    char uid[8];
    char gid[8];
    char size[12];
    char mtime[12];
    char chksum[8];
    char typeflag;
    char linkname[100];
    char magic[6];
    char version[2];
    char uname[32];
    char gname[32];
    char devmajor[8];
    char devminor[8];
    char prefix[155];
    char padding[12];
};
static_assert(sizeof(UstarHeader) == kBlock);

unsigned header_checksum(const UstarHeader& h) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(&h);
    unsigned sum = 0;
    for (size_t i = 0; i < kBlock; ++i)
        // The checksum field itself counts as spaces.
        sum += (i >= 148 && i < 156) ? ' ' : bytes[i];
    return sum;
}

UstarHeader make_header(const std::string& name, uint64_t size, uint64_t mtime_s) {
    UstarHeader h{};
    std::memcpy(h.name, name.data(), name.size());
    std::snprintf(h.mode, sizeof h.mode, "%07o", 0644);
    std::snprintf(h.uid, sizeof h.uid, "%07o", 0);
    std::snprintf(h.gid, sizeof h.gid, "%07o", 0);
    std::snprintf(h.size, sizeof h.size, "%011llo", static_cast<unsigned long long>(size));
    std::snprintf(h.mtime, sizeof h.mtime, "%011llo",
                  static_cast<unsigned long long>(mtime_s));
    h.typeflag = '0';
    std::memcpy(h.magic, "ustar", 6);
    h.version[0] = '0';
    h.version[1] = '0';
    std::snprintf(h.uname, sizeof h.uname, "%s", "hstm");
    std::snprintf(h.gname, sizeof h.gname, "%s", "hstm");
    // chksum: six octal digits, a NUL, then a space.
    std::snprintf(h.chksum, 8, "%06o", header_checksum(h));
    h.chksum[7] = ' ';
    return h;
}

uint64_t parse_octal(const char* field, size_t len, const char* what) {
    uint64_t value = 0;
    bool seen = false;
    for (size_t i = 0; i < len; ++i) {
        char c = field[i];
        if (c == '\0') break;
        if (c == ' ') {
            if (seen) break;
            continue;
        }
        if (c < '0' || c > '7')
            throw std::runtime_error(std::string("bad octal digit in tar ") + what);
        value = value * 8 + static_cast<uint64_t>(c - '0');
        seen = true;
    }
    return value;
}

}  // namespace

struct TarWriter::Impl {
    std::ofstream out;
    std::filesystem::path path;
    std::set<std::string> names;
    bool finished = false;
};

TarWriter::TarWriter(const std::filesystem::path& path) : impl_(new Impl) {
    impl_->path = path;
    impl_->out.open(path, std::ios::binary | std::ios::trunc);
    if (!impl_->out) {
        delete impl_;
        throw std::runtime_error("cannot create archive: " + path.string());
    }
}

TarWriter::~TarWriter() { delete impl_; }

void TarWriter::add(const std::string& name, std::span<const uint8_t> data,
                    uint64_t mtime_s) {
    if (impl_->finished) throw std::logic_error("archive already finished");
    if (name.empty() || name.size() > 100)
        throw std::invalid_argument("tar member name must be 1..100 characters, got \"" +
                                    name + "\"");
    if (!impl_->names.insert(name).second)
        throw std::invalid_argument("duplicate tar member name: " + name);

    UstarHeader h = make_header(name, data.size(), mtime_s);
    impl_->out.write(reinterpret_cast<const char*>(&h), kBlock);
    impl_->out.write(reinterpret_cast<const char*>(data.data()),
                     static_cast<std::streamsize>(data.size()));
    size_t tail = data.size() % kBlock;
    if (tail) {
        char zeros[kBlock] = {};
        impl_->out.write(zeros, static_cast<std::streamsize>(kBlock - tail));
    }
    if (!impl_->out)
        throw std::runtime_error("write failed: " + impl_->path.string());
}

void TarWriter::finish() {
    if (impl_->finished) return;
    char zeros[kBlock] = {};
    impl_->out.write(zeros, kBlock);
    impl_->out.write(zeros, kBlock);
    impl_->out.close();
    if (!impl_->out)
        throw std::runtime_error("write failed: " + impl_->path.string());
    impl_->finished = true;
}

std::vector<TarEntry> read_tar(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open archive: " + path.string());

    std::vector<TarEntry> entries;
    std::set<std::string> seen;
    UstarHeader h;
    bool saw_trailer = false;
    while (in.read(reinterpret_cast<char*>(&h), kBlock)) {
        const auto* raw = reinterpret_cast<const unsigned char*>(&h);
        bool all_zero = true;
        for (size_t i = 0; i < kBlock && all_zero; ++i) all_zero = raw[i] == 0;
        if (all_zero) {
            saw_trailer = true;
            break;
        }

        uint64_t declared = parse_octal(h.chksum, sizeof h.chksum, "checksum");
        if (declared != header_checksum(h))
            throw std::runtime_error("tar header checksum mismatch in " + path.string());

        std::string name(h.name, strnlen(h.name, sizeof h.name));
        uint64_t size = parse_octal(h.size, sizeof h.size, "size");

        std::vector<uint8_t> data(size);
        if (size != 0 &&
            !in.read(reinterpret_cast<char*>(data.data()),
                     static_cast<std::streamsize>(size)))
            throw std::runtime_error("tar truncated inside member " + name);
        size_t tail = size % kBlock;
        if (tail) {
            auto pad = static_cast<std::streamsize>(kBlock - tail);
            in.ignore(pad);
            // ignore() stopping at EOF sets only eofbit, so count the bytes.
            if (in.gcount() != pad)
                throw std::runtime_error("tar truncated inside member " + name);
        }
        if (in.bad()) throw std::runtime_error("read failed: " + path.string());

        if (h.typeflag != '0' && h.typeflag != '\0') continue;  // non-files skipped
        if (!seen.insert(name).second)
            throw std::runtime_error("duplicate tar member name: " + name);
        entries.push_back({std::move(name), std::move(data)});
    }
    // A well-formed archive ends with two zero blocks, never at bare EOF.
    if (!saw_trailer)
        throw std::runtime_error("tar truncated before trailer in " + path.string());
    return entries;
}

}  // namespace hstm
