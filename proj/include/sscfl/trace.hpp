#pragma once

#include <fstream>
#include <string>

namespace sscfl {

/// JSON-lines trace output. One record per LP / restricted-BIP solve; the
/// harness enables it with --trace.
class TraceSink {
 public:
  explicit TraceSink(const std::string& path) {
    if (!path.empty()) out_.open(path, std::ios::trunc);
  }

  bool enabled() const { return out_.is_open(); }

  void emit(const std::string& json_line) {
    if (out_.is_open()) out_ << json_line << '\n';
  }

 private:
  std::ofstream out_;
};

}  // namespace sscfl
