#include "detmcvi_cli/instance.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "detmcvi/ctp.hpp"
#include "detmcvi/fsc.hpp"
#include "detmcvi/maze.hpp"
#include "detmcvi/sort.hpp"
#include "json.hpp"

namespace detmcvi::cli {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path);
}

LoadedInstance ParseInstance(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  LoadedInstance loaded;
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("instance JSON syntax error at byte " +
                        std::to_string(e.byte));
    }
    if (j.contains("nodes")) {
      auto model = std::make_unique<CtpModel>(CtpFromJson(text));
      loaded.domain = "ctp";
      loaded.default_horizon = model->DefaultHorizon();
      loaded.model = std::move(model);
      return loaded;
    }
    if (j.contains("n")) {
      if (!j["n"].is_number_integer())
        throw FormatError("sort instance needs an integer \"n\"");
      try {
        auto model = std::make_unique<SortModel>(j["n"].get<int>());
        loaded.domain = "sort";
        loaded.default_horizon = model->DefaultHorizon();
        loaded.model = std::move(model);
      } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid sort instance: ") + e.what());
      }
      return loaded;
    }
    throw FormatError("unrecognized instance JSON");
  }
  auto model = std::make_unique<MazeModel>(MazeFromAscii(text));
  loaded.domain = "maze";
  loaded.default_horizon = model->DefaultHorizon();
  loaded.model = std::move(model);
  return loaded;
}

LoadedInstance LoadInstance(const std::string& path) {
  return ParseInstance(ReadFile(path));
}

}  // namespace detmcvi::cli
