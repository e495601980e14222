#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rment/core.hpp"

namespace rment {

// Parse failure with the 1-based line number of the offending JSONL record.
struct DemoParseError : std::runtime_error {
  int line;
  DemoParseError(int line_, const std::string& what_) : std::runtime_error(what_), line(line_) {}
};

// One demonstration per line:
//   {"demo_id": "d1", "steps": [{"s": 0, "a": 1}, ...], "raw": [[...], ...]}
// The "raw" field is present only when the demo carries continuous states.
void write_demos_jsonl(std::ostream& out, const std::vector<Demonstration>& demos);
std::vector<Demonstration> read_demos_jsonl(std::istream& in);

void write_demos_file(const std::string& path, const std::vector<Demonstration>& demos);
std::vector<Demonstration> read_demos_file(const std::string& path);

}  // namespace rment
