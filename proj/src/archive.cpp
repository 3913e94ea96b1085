#include "hstm/archive.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "hstm/tar.hpp"
#include "hstm/zstd_codec.hpp"

namespace hstm {

namespace {

std::string member_name(uint64_t window_seq, size_t block_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "w%08llu_b%02zu.gbz",
                  static_cast<unsigned long long>(window_seq), block_index);
    return buf;
}

}  // namespace

std::string manifest_to_json(const ArchiveManifest& m) {
    nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
    for (const auto& b : m.blocks) {
        blocks.push_back({{"name", b.name},
                          {"packets", b.packets},
                          {"nnz", b.nnz},
                          {"ts_first_us", b.ts_first_us},
                          {"ts_last_us", b.ts_last_us},
                          {"stream_id", b.stream_id},
                          {"stream_seq", b.stream_seq}});
    }
    nlohmann::ordered_json j = {{"window_seq", m.window_seq},
                                {"total_packets", m.total_packets},
                                {"created_us", m.created_us},
                                {"partial", m.partial},
                                {"block_size", m.block_size},
                                {"blocks", std::move(blocks)}};
    return j.dump(2) + "\n";
}

ArchiveManifest manifest_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        ArchiveManifest m;
        m.window_seq = j.at("window_seq").get<uint64_t>();
        m.total_packets = j.at("total_packets").get<uint64_t>();
        m.created_us = j.at("created_us").get<uint64_t>();
        m.partial = j.at("partial").get<bool>();
        m.block_size = j.at("block_size").get<uint64_t>();
        for (const auto& b : j.at("blocks")) {
            ArchiveBlockInfo info;
            info.name = b.at("name").get<std::string>();
            info.packets = b.at("packets").get<uint64_t>();
            info.nnz = b.at("nnz").get<uint64_t>();
            info.ts_first_us = b.at("ts_first_us").get<uint64_t>();
            info.ts_last_us = b.at("ts_last_us").get<uint64_t>();
            info.stream_id = b.at("stream_id").get<uint32_t>();
            info.stream_seq = b.at("stream_seq").get<uint64_t>();
            m.blocks.push_back(std::move(info));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("manifest missing required field: ") +
                                 e.what());
    }
}

ArchiveManifest write_archive(const std::filesystem::path& path,
                              const std::vector<ArchiveBlock>& blocks,
                              const ArchiveWindowMeta& meta) {
    if (blocks.empty())
        throw std::invalid_argument("refusing to write an archive with no blocks");

    ArchiveManifest manifest;
    manifest.window_seq = meta.window_seq;
    manifest.partial = meta.partial;
    manifest.block_size = meta.block_size;

    std::vector<std::vector<uint8_t>> members;
    members.reserve(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        members.push_back(zstd_compress(serialize_matrix(b.matrix, b.meta),
                                        meta.zstd_level));
        manifest.total_packets += b.meta.packet_count;
        // Archive bytes must be a pure function of the packets, so creation
        // time is the newest packet timestamp rather than the wall clock.
        manifest.created_us = std::max(manifest.created_us, b.meta.ts_last_us);
        manifest.blocks.push_back({member_name(meta.window_seq, i), b.meta.packet_count,
                                   b.matrix.nnz(), b.meta.ts_first_us, b.meta.ts_last_us,
                                   b.stream_id, b.stream_seq});
    }

    const uint64_t mtime_s = manifest.created_us / 1'000'000;
    std::string manifest_text = manifest_to_json(manifest);
    TarWriter writer(path);
    writer.add("manifest.json",
               std::span(reinterpret_cast<const uint8_t*>(manifest_text.data()),
                         manifest_text.size()),
               mtime_s);
    for (size_t i = 0; i < members.size(); ++i)
        writer.add(manifest.blocks[i].name, members[i], mtime_s);
    writer.finish();
    return manifest;
}

ArchiveContents read_archive(const std::filesystem::path& path) {
    auto entries = read_tar(path);
    if (entries.empty() || entries[0].name != "manifest.json")
        throw std::runtime_error("archive has no leading manifest.json: " +
                                 path.string());

    ArchiveContents contents;
    contents.manifest = manifest_from_json(
        std::string(entries[0].data.begin(), entries[0].data.end()));

    std::map<std::string, const TarEntry*> by_name;
    for (size_t i = 1; i < entries.size(); ++i) by_name[entries[i].name] = &entries[i];
    if (by_name.size() != contents.manifest.blocks.size())
        throw std::runtime_error("archive holds " + std::to_string(by_name.size()) +
                                 " blob members, manifest lists " +
                                 std::to_string(contents.manifest.blocks.size()));

    for (const auto& info : contents.manifest.blocks) {
        auto it = by_name.find(info.name);
        if (it == by_name.end())
            throw std::runtime_error("archive member missing: " + info.name);
        auto decoded = deserialize_matrix(zstd_decompress(it->second->data));
        if (decoded.matrix.nnz() != info.nnz ||
            decoded.meta.packet_count != info.packets)
            throw std::runtime_error("archive member " + info.name +
                                     " disagrees with its manifest row");
        contents.blocks.push_back({std::move(decoded.matrix), decoded.meta,
                                   info.stream_id, info.stream_seq});
    }
    return contents;
}

}  // namespace hstm
