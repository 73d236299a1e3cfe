#pragma once

#include <string>

#include "json.hpp"

namespace trackscore::cli {

/// JSON record of how an output was produced:
///   {"command", "version", "timestamp", "parameters": {...}, "outputs": {...}}
/// `timestamp` is UTC ISO-8601 and is the only field that differs between reruns.
class Manifest {
 public:
  explicit Manifest(std::string command);

  nlohmann::json& parameters() { return doc_["parameters"]; }
  nlohmann::json& outputs() { return doc_["outputs"]; }
  const nlohmann::json& document() const { return doc_; }

  /// Writes the document, pretty-printed, to `path`. Throws std::runtime_error on I/O failure.
  void write(const std::string& path) const;

 private:
  nlohmann::json doc_;
};

/// `<output>.manifest.json`
std::string sidecar_path(const std::string& output);

}  // namespace trackscore::cli
