#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "detmcvi/model.hpp"

namespace detmcvi::cli {

/// A loaded problem instance together with its identity.
struct LoadedInstance {
  std::string domain;  // "ctp", "maze" or "sort"
  std::unique_ptr<DetPomdpModel> model;
  int default_horizon = 1;
};

/// Detects the format from the contents: JSON with "nodes" is a CTP
/// instance, JSON with "n" a Sort instance, anything else an ASCII maze.
/// Throws FormatError on malformed input.
LoadedInstance ParseInstance(std::string_view text);
LoadedInstance LoadInstance(const std::string& path);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace detmcvi::cli
