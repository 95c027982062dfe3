#pragma once

// Command-line driver. Exit codes: 0 success, 1 I/O or input-data error,
// 2 configuration error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "guiagent/backends.hpp"
#include "guiagent/http_client.hpp"

namespace guiagent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string interpreter = "scripted";
  std::string locator = "oracle";
  std::optional<BackendConfig> interpreter_http;
  std::optional<BackendConfig> locator_http;
  std::string records;
  std::string env;
  std::string out;
  int max_steps = 0;  // 0 keeps each task's own budget
  int parallelism = 1;
  std::uint64_t seed = 0;
  bool allow_network = false;
};

/// Replaces ${NAME} with the environment variable's value; unset variables
/// are a ConfigError.
std::string interpolate_env(std::string_view text);

/// Reads a JSON config file. Relative paths are resolved against the file's
/// directory. Keys: interpreter, locator, records, env, out, max_steps,
/// parallelism, seed, allow_network, http: {interpreter, locator}.
CliConfig load_config(const std::filesystem::path& path);

/// Builtin names: scripted, scripted:PATH, always-click:SPEC, http.
/// `default_scripts` backs the bare "scripted" name.
std::shared_ptr<const Interpreter> make_interpreter(const std::string& spec, const CliConfig& cfg,
                                                    const ScriptedInterpreter::Scripts* default_scripts);
/// Builtin names: oracle, naive, noisy:SIGMA[,SEED], http.
std::shared_ptr<const Locator> make_locator(const std::string& spec, const CliConfig& cfg);

int cmd_ground(const CliConfig& cfg, std::ostream& err);
int cmd_replay(const CliConfig& cfg, std::ostream& err);
int cmd_run(const CliConfig& cfg, std::ostream& err);
int cmd_parse(std::string_view text, ScreenDims dims, std::ostream& out);
/// Renders every screen of a task suite and writes grounding.jsonl and
/// offline.jsonl fixtures derived from the gold walks.
int cmd_export(const CliConfig& cfg, std::ostream& err);

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace guiagent::cli
