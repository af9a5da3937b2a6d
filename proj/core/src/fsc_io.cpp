#include <sstream>
#include <string>

#include "detmcvi/fsc.hpp"
#include "json.hpp"

namespace detmcvi {

using nlohmann::json;

std::string ExportJson(const Fsc& fsc) {
  json nodes = json::array();
  for (const auto& node : fsc.nodes()) {
    json edges = json::object();
    for (const auto& [obs, target] : node.edges)
      edges[std::to_string(obs.token)] = target;
    nodes.push_back({{"action", node.action}, {"edges", std::move(edges)}});
  }
  json doc = {{"start", fsc.start()}, {"nodes", std::move(nodes)}};
  if (fsc.is_tree()) doc["tree"] = true;
  return doc.dump(1) + "\n";
}

namespace {

std::uint64_t ParseToken(const std::string& key) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(key, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || key.empty() || key.front() == '-')
    throw FormatError("observation key '" + key + "' is not a token");
  return value;
}

}  // namespace

Fsc ImportJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError("FSC JSON syntax error at byte " +
                      std::to_string(e.byte) + ": " + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("start"))
      throw FormatError("FSC JSON needs \"start\" and \"nodes\"");
    std::vector<FscNode> nodes;
    for (const auto& item : doc.at("nodes")) {
      FscNode node;
      node.action = item.at("action").get<ActionId>();
      if (node.action < 0) throw FormatError("negative action in FSC JSON");
      if (item.contains("edges")) {
        for (const auto& [key, target] : item.at("edges").items())
          node.edges.emplace_back(ObservationId{ParseToken(key)},
                                  target.get<NodeIndex>());
      }
      nodes.push_back(std::move(node));
    }
    const bool tree = doc.value("tree", false);
    return Fsc::FromNodes(std::move(nodes), doc.at("start").get<NodeIndex>(),
                          tree);
  } catch (const json::exception& e) {
    throw FormatError(std::string("FSC JSON schema error: ") + e.what());
  } catch (const std::logic_error& e) {
    throw FormatError(std::string("FSC JSON invalid: ") + e.what());
  }
}

namespace {

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string ExportDot(const Fsc& fsc, const DetPomdpModel* model) {
  std::ostringstream out;
  out << "digraph fsc {\n  node [shape=diamond];\n";
  for (std::size_t v = 0; v < fsc.size(); ++v) {
    const auto& node = fsc.nodes()[v];
    const std::string label =
        model ? model->ActionName(node.action) : "a" + std::to_string(node.action);
    out << "  n" << v << " [label=\"" << Escape(label) << "\"";
    if (static_cast<NodeIndex>(v) == fsc.start()) out << ", penwidth=2";
    out << "];\n";
  }
  for (std::size_t v = 0; v < fsc.size(); ++v) {
    for (const auto& [obs, target] : fsc.nodes()[v].edges) {
      const std::string label =
          model ? model->ObservationName(obs) : std::to_string(obs.token);
      out << "  n" << v << " -> n" << target << " [label=\"" << Escape(label)
          << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace detmcvi
