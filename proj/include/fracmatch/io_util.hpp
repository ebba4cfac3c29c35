#pragma once

#include <string>

namespace fracmatch {

/// Writes content to path via a temp file and rename, so readers never see a
/// partially written file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace fracmatch
