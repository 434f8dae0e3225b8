#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "omni/numerics.hpp"

namespace omni {

// Error with a stable machine-readable code; the CLI maps these to
// error JSON on stderr.
struct OmniError : std::runtime_error {
    std::string code;
    OmniError(std::string code_, const std::string& msg)
        : std::runtime_error(msg), code(std::move(code_)) {}
};

// OMNI embedding container:
//   magic  "OMNI" (4 bytes)
//   version u32 = 1, little-endian
//   count   u32
//   dim     u32
//   payload count*dim float32 little-endian, row-major
//
// Read errors: bad_magic, unsupported_version, truncated_payload.
void write_embedding_file(const std::filesystem::path& path, const Mat& data);
Mat read_embedding_file(const std::filesystem::path& path);

constexpr uint32_t k_embedding_file_version = 1;

}  // namespace omni
