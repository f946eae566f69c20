#pragma once

#include <string>

namespace xorwl {

/// Whole-file helpers; both throw FormatError on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace xorwl
