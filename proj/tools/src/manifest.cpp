#include "hawkes_cli/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "hawkes/error.hpp"

#ifndef HAWKES_VERSION
#define HAWKES_VERSION "unknown"
#endif

namespace hawkes::cli {

std::string tool_version() { return HAWKES_VERSION; }

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256: init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

void RunManifest::add_input(const std::filesystem::path& p) { inputs.emplace_back(p.string(), sha256_file(p)); }

void RunManifest::add_outputs(const std::filesystem::path& root, const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) outputs.emplace_back(std::filesystem::relative(f, root).generic_string(), sha256_file(f));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "hawkes";
  j["version"] = tool_version();
  j["command"] = command;
  j["config"] = config;
  j["results"] = results.is_null() ? nlohmann::json::object() : results;
  j["inputs"] = nlohmann::json::array();
  for (const auto& [p, d] : inputs) j["inputs"].push_back({{"path", p}, {"sha256", d}});
  j["outputs"] = nlohmann::json::array();
  for (const auto& [p, d] : outputs) j["outputs"].push_back({{"path", p}, {"sha256", d}});
  j["warnings"] = warnings;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.results = j.value("results", nlohmann::json::object());
    for (const auto& e : j.value("inputs", nlohmann::json::array()))
      m.inputs.emplace_back(e.at("path").get<std::string>(), e.at("sha256").get<std::string>());
    for (const auto& e : j.value("outputs", nlohmann::json::array()))
      m.outputs.emplace_back(e.at("path").get<std::string>(), e.at("sha256").get<std::string>());
    m.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void RunManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << to_json().dump(2) << "\n";
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("manifest " + path.string() + ": " + e.what());
  }
}

}  // namespace hawkes::cli
