#include "omni/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "OMNI file payload is little-endian; big-endian hosts need byte swaps");

namespace omni {

static constexpr char k_magic[4] = {'O', 'M', 'N', 'I'};

void write_embedding_file(const std::filesystem::path& path, const Mat& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OmniError("io_error", "cannot open for writing: " + path.string());
    out.write(k_magic, 4);
    const uint32_t version = k_embedding_file_version;
    const uint32_t count = static_cast<uint32_t>(data.rows);
    const uint32_t dim = static_cast<uint32_t>(data.cols);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&count), 4);
    out.write(reinterpret_cast<const char*>(&dim), 4);
    std::vector<float> payload(data.data.size());
    for (size_t i = 0; i < data.data.size(); ++i) payload[i] = static_cast<float>(data.data[i]);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(float)));
    if (!out) throw OmniError("io_error", "write failed: " + path.string());
}

Mat read_embedding_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OmniError("io_error", "cannot open for reading: " + path.string());

    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4) throw OmniError("truncated_payload", "truncated payload");
    if (std::memcmp(magic, k_magic, 4) != 0) throw OmniError("bad_magic", "bad magic");

    uint32_t version = 0;
    uint32_t count = 0;
    uint32_t dim = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (in.gcount() != 4) throw OmniError("truncated_payload", "truncated payload");
    if (version != k_embedding_file_version)
        throw OmniError("unsupported_version", "unsupported version");
    in.read(reinterpret_cast<char*>(&count), 4);
    if (in.gcount() != 4) throw OmniError("truncated_payload", "truncated payload");
    in.read(reinterpret_cast<char*>(&dim), 4);
    if (in.gcount() != 4) throw OmniError("truncated_payload", "truncated payload");

    const size_t n_values = static_cast<size_t>(count) * static_cast<size_t>(dim);
    std::vector<float> payload(n_values);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(n_values * sizeof(float)));
    if (static_cast<size_t>(in.gcount()) != n_values * sizeof(float))
        throw OmniError("truncated_payload", "truncated payload");

    Mat data(static_cast<int>(count), static_cast<int>(dim));
    for (size_t i = 0; i < n_values; ++i) data.data[i] = static_cast<double>(payload[i]);
    return data;
}

}  // namespace omni
