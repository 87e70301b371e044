#include "inspectkit/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inspectkit/bridge/live.hpp"
#include "inspectkit/core/error.hpp"

namespace inspectkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool env_present(const char* name) {
  const char* v = std::getenv(name);
  return v && *v;
}

}  // namespace

ServiceConfig ServiceConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("config file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(path.string() + ": expected an object");

  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  ServiceConfig c;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "corpus_dir") {
        c.corpus_dir = resolve(value.get<std::string>());
      } else if (key == "fixture_dir") {
        if (!value.is_null()) c.fixture_dir = resolve(value.get<std::string>());
      } else if (key == "live_mode") {
        c.live_mode = value.get<bool>();
      } else if (key == "listen_address") {
        c.listen_address = value.get<std::string>();
      } else if (key == "image_ref_name") {
        c.image_ref_name = value.get<std::string>();
      } else if (key == "image_url_base") {
        c.image_url_base = value.get<std::string>();
      } else if (key == "design_api") {
        c.design_api = value.get<std::string>();
      } else if (key == "code_host_api") {
        c.code_host_api = value.get<std::string>();
      } else if (key == "rules_file") {
        c.rules_file = resolve(value.get<std::string>());
      } else if (key == "model_file") {
        c.model_file = resolve(value.get<std::string>());
      } else if (key == "static_dir") {
        c.static_dir = resolve(value.get<std::string>());
      } else if (key == "trend_rules") {
        c.trend_rules.clear();
        for (const auto& [slug_text, threshold] : value.items()) {
          auto cat = parse_category(slug_text);
          if (!cat) throw ParseError("trend_rules: unknown category '" + slug_text + "'");
          c.trend_rules.push_back({*cat, threshold.get<double>()});
        }
      } else {
        throw ParseError("unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return c;
}

std::vector<std::string> ServiceConfig::violations() const {
  std::vector<std::string> out;
  if (live_mode && fixture_dir) out.push_back("live_mode and fixture_dir are mutually exclusive");
  if (live_mode && !env_present(kDesignTokenEnv)) {
    out.push_back(std::string("live mode requires ") + kDesignTokenEnv);
  }
  if (live_mode && !env_present(kCodeHostTokenEnv)) {
    out.push_back(std::string("live mode requires ") + kCodeHostTokenEnv);
  }
  try {
    listen_endpoint();
  } catch (const InvalidArgument& e) {
    out.push_back(e.what());
  }
  for (const auto& r : trend_rules) {
    if (!(r.threshold >= 0 && r.threshold <= 1)) {
      out.push_back("trend threshold for " + std::string(slug(r.category)) + " outside [0,1]");
    }
  }
  if (image_ref_name.rfind("refs/", 0) != 0) out.push_back("image_ref_name must start with refs/");
  return out;
}

fs::path ServiceConfig::model_path() const { return model_file.value_or(corpus_dir / "model.json"); }

std::pair<std::string, int> ServiceConfig::listen_endpoint() const {
  auto colon = listen_address.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw InvalidArgument("listen address must be host:port, got '" + listen_address + "'");
  }
  int port = -1;
  const char* first = listen_address.data() + colon + 1;
  const char* last = listen_address.data() + listen_address.size();
  auto [p, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || p != last || port < 0 || port > 65535) {
    throw InvalidArgument("invalid port in listen address '" + listen_address + "'");
  }
  return {listen_address.substr(0, colon), port};
}

std::unique_ptr<DesignToolTransport> ServiceConfig::make_design_transport() const {
  if (live_mode) return std::make_unique<LiveDesignTool>(ApiEndpoint{design_api, token_from_env(kDesignTokenEnv)});
  if (fixture_dir) return std::make_unique<FixtureDesignTool>(*fixture_dir);
  throw InvalidArgument("no transport configured: pass --fixtures or enable live mode");
}

std::unique_ptr<CodeHostTransport> ServiceConfig::make_code_host_transport() const {
  if (live_mode) return std::make_unique<LiveCodeHost>(ApiEndpoint{code_host_api, token_from_env(kCodeHostTokenEnv)});
  if (fixture_dir) return std::make_unique<FixtureCodeHost>(*fixture_dir);
  throw InvalidArgument("no transport configured: pass --fixtures or enable live mode");
}

std::unique_ptr<git::ObjectStore> ServiceConfig::make_image_store(const std::string& repo) const {
  if (live_mode) {
    return std::make_unique<LiveGitDataStore>(ApiEndpoint{code_host_api, token_from_env(kCodeHostTokenEnv)}, repo);
  }
  if (fixture_dir) {
    if (!fs::is_directory(*fixture_dir)) {
      throw TransportError("fixture directory unreachable: " + fixture_dir->string());
    }
    return std::make_unique<git::LooseObjectStore>(fixture_image_store_dir(*fixture_dir, repo));
  }
  throw InvalidArgument("no transport configured: pass --fixtures or enable live mode");
}

}  // namespace inspectkit
