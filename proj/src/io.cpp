#include "xorwl/io.hpp"

#include <fstream>
#include <sstream>

#include "xorwl/error.hpp"

namespace xorwl {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out << content;
  if (!out) throw FormatError("short write to " + path);
}

}  // namespace xorwl
