#include "rment/demo_io.hpp"

#include <fstream>
#include <ostream>

#include "json.hpp"

namespace rment {

namespace {
using ordered_json = nlohmann::ordered_json;
}

void write_demos_jsonl(std::ostream& out, const std::vector<Demonstration>& demos) {
  for (const auto& d : demos) {
    ordered_json j;
    j["demo_id"] = d.demo_id;
    auto& steps = j["steps"] = ordered_json::array();
    for (const Step& st : d.steps) steps.push_back({{"s", st.s}, {"a", st.a}});
    if (!d.raw_states.empty()) j["raw"] = d.raw_states;
    out << j.dump() << '\n';
  }
}

std::vector<Demonstration> read_demos_jsonl(std::istream& in) {
  std::vector<Demonstration> demos;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DemoParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    Demonstration d;
    try {
      d.demo_id = j.at("demo_id").get<std::string>();
      for (const auto& js : j.at("steps")) {
        d.steps.push_back(Step{js.at("s").get<int>(), js.at("a").get<int>()});
      }
      if (j.contains("raw")) d.raw_states = j["raw"].get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
      throw DemoParseError(line_no, std::string("bad demo record: ") + e.what());
    }
    demos.push_back(std::move(d));
  }
  return demos;
}

void write_demos_file(const std::string& path, const std::vector<Demonstration>& demos) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_demos_jsonl(out, demos);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<Demonstration> read_demos_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_demos_jsonl(in);
}

}  // namespace rment
