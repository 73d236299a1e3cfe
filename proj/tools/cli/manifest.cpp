#include "manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

namespace trackscore::cli {

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace

Manifest::Manifest(std::string command) {
  doc_["command"] = std::move(command);
  doc_["version"] = TRACKSCORE_VERSION;
  doc_["timestamp"] = utc_now();
  doc_["parameters"] = nlohmann::json::object();
  doc_["outputs"] = nlohmann::json::object();
}

void Manifest::write(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write manifest '" + path + "'");
  os << doc_.dump(2) << '\n';
  if (!os) throw std::runtime_error("failed writing manifest '" + path + "'");
}

std::string sidecar_path(const std::string& output) { return output + ".manifest.json"; }

}  // namespace trackscore::cli
