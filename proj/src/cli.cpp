#include "guiagent/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "guiagent/evaluation.hpp"
#include "guiagent/records.hpp"
#include "guiagent/suite.hpp"
#include "guiagent/util.hpp"
#include "text_util.hpp"

namespace guiagent::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string interpolate_env(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 2, "${") == 0) {
      const auto close = text.find('}', i + 2);
      if (close == std::string_view::npos) throw ConfigError("unterminated ${ in config");
      const std::string name(text.substr(i + 2, close - i - 2));
      const char* value = std::getenv(name.c_str());
      if (!value) throw ConfigError("environment variable " + name + " is not set");
      out += value;
      i = close + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

namespace {

json interpolate_all(const json& j) {
  if (j.is_string()) return interpolate_env(j.get<std::string>());
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto& [k, v] : out.items()) v = interpolate_all(v);
    return out;
  }
  return j;
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (base / p).lexically_normal().string();
}

/// Filesystem-safe version of an id.
std::string file_stem(std::string_view id) {
  std::string s(id);
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return s.empty() ? "_" : s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_out(const CliConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("--out is required");
}

void write_report(const fs::path& out, const json& summary, const std::vector<json>& rows) {
  write_file(out / "summary.json", dump(summary));
  std::string lines;
  for (const json& r : rows) lines += r.dump() + "\n";
  write_file(out / "records.jsonl", lines);
}

/// Maps exceptions to exit codes with a message on `err`.
template <typename F>
int guarded(std::ostream& err, F body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sim::SpecError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BackendError& e) {
    if (e.kind() == BackendError::Kind::Config) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

CliConfig load_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!j.is_object()) throw ConfigError(path.string() + ": config must be an object");
  j = interpolate_all(j);
  const fs::path base = path.parent_path();
  CliConfig cfg;
  try {
    cfg.interpreter = j.value("interpreter", cfg.interpreter);
    cfg.locator = j.value("locator", cfg.locator);
    cfg.records = resolve(base, j.value("records", std::string()));
    cfg.env = resolve(base, j.value("env", std::string()));
    cfg.out = resolve(base, j.value("out", std::string()));
    cfg.max_steps = j.value("max_steps", cfg.max_steps);
    cfg.parallelism = j.value("parallelism", cfg.parallelism);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.allow_network = j.value("allow_network", cfg.allow_network);
    if (auto http = j.find("http"); http != j.end()) {
      if (http->contains("interpreter")) cfg.interpreter_http = backend_config_from_json(http->at("interpreter"));
      if (http->contains("locator")) cfg.locator_http = backend_config_from_json(http->at("locator"));
    }
    // Scripted paths are relative to the config file as well.
    if (cfg.interpreter.rfind("scripted:", 0) == 0) {
      cfg.interpreter = "scripted:" + resolve(base, cfg.interpreter.substr(9));
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const BackendError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return cfg;
}

std::shared_ptr<const Interpreter> make_interpreter(const std::string& spec, const CliConfig& cfg,
                                                    const ScriptedInterpreter::Scripts* default_scripts) {
  if (spec == "scripted") {
    if (!default_scripts) throw ConfigError("'scripted' needs a script path here (scripted:PATH)");
    return std::make_shared<ScriptedInterpreter>(*default_scripts);
  }
  if (spec.rfind("scripted:", 0) == 0) {
    const fs::path p = spec.substr(9);
    json j;
    try {
      j = json::parse(read_text_file(p));
    } catch (const json::exception& e) {
      throw ConfigError(p.string() + ": " + e.what());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    return std::make_shared<ScriptedInterpreter>(load_scripts(j));
  }
  if (spec.rfind("always-click:", 0) == 0) {
    return std::make_shared<AlwaysClickInterpreter>(make_interpreter(spec.substr(13), cfg, default_scripts));
  }
  if (spec == "http") {
    if (!cfg.allow_network) throw ConfigError("http interpreter requires --allow-network");
    if (!cfg.interpreter_http) throw ConfigError("http interpreter requires http.interpreter in the config");
    cfg.interpreter_http->validate();
    return std::make_shared<HttpInterpreter>(*cfg.interpreter_http);
  }
  throw ConfigError("unknown interpreter '" + spec + "'");
}

std::shared_ptr<const Locator> make_locator(const std::string& spec, const CliConfig& cfg) {
  if (spec == "oracle") return std::make_shared<OracleLocator>();
  if (spec == "naive") return std::make_shared<NaiveLocator>();
  if (spec.rfind("noisy:", 0) == 0) {
    const std::string args = spec.substr(6);
    const auto comma = args.find(',');
    double sigma = 0;
    std::uint64_t seed = cfg.seed;
    try {
      std::size_t used = 0;
      const std::string s = args.substr(0, comma);
      sigma = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      if (comma != std::string::npos) {
        const std::string t = args.substr(comma + 1);
        seed = std::stoull(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad noisy locator spec '" + spec + "' (noisy:SIGMA[,SEED])");
    }
    if (!(sigma >= 0)) throw ConfigError("noisy locator sigma must be non-negative");
    return std::make_shared<NoisyLocator>(sigma, seed);
  }
  if (spec == "http") {
    if (!cfg.allow_network) throw ConfigError("http locator requires --allow-network");
    if (!cfg.locator_http) throw ConfigError("http locator requires http.locator in the config");
    cfg.locator_http->validate();
    return std::make_shared<HttpLocator>(*cfg.locator_http);
  }
  throw ConfigError("unknown locator '" + spec + "'");
}

int cmd_ground(const CliConfig& cfg, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.records.empty()) throw ConfigError("--records is required");
    require_out(cfg);
    const auto locator = make_locator(cfg.locator, cfg);
    const auto records = load_grounding_records(cfg.records);
    const MetricReport report = grounding_accuracy(records, *locator, cfg.parallelism);
    json summary = report_summary_json(report);
    summary["locator"] = locator->name();
    std::vector<json> rows;
    for (const auto& r : report.per_record) rows.push_back(record_result_to_json(r));
    write_report(cfg.out, summary, rows);
    return kExitOk;
  });
}

int cmd_replay(const CliConfig& cfg, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.records.empty()) throw ConfigError("--records is required");
    require_out(cfg);
    const std::vector<json> raw = read_jsonl(cfg.records);
    MetricReport report;
    json summary;
    if (!raw.empty() && raw.front().contains("gt_sequence")) {
      report = score_omni(load_omni_records(cfg.records));
      summary = report_summary_json(report);
    } else {
      const auto records = load_offline_records(cfg.records);
      const auto scripts = gold_scripts(records);
      const auto interpreter = make_interpreter(cfg.interpreter, cfg, &scripts);
      const auto locator = make_locator(cfg.locator, cfg);
      report = replay_offline(records, *interpreter, *locator, cfg.parallelism);
      summary = report_summary_json(report);
      summary["interpreter"] = interpreter->name();
      summary["locator"] = locator->name();
    }
    std::vector<json> rows;
    for (const auto& r : report.per_record) rows.push_back(record_result_to_json(r));
    write_report(cfg.out, summary, rows);
    return kExitOk;
  });
}

int cmd_run(const CliConfig& cfg, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.env.empty()) throw ConfigError("--env is required");
    require_out(cfg);
    if (!fs::exists(cfg.env)) throw std::runtime_error("cannot open " + cfg.env);
    TaskSuite suite = load_suite(cfg.env);
    if (cfg.max_steps > 0) {
      for (auto& t : suite.tasks) t.spec.max_steps = cfg.max_steps;
    }
    const auto scripts = suite_scripts(suite);
    const auto interpreter = make_interpreter(cfg.interpreter, cfg, &scripts);
    const auto locator = make_locator(cfg.locator, cfg);
    const SuiteRun run = run_suite(suite, *interpreter, *locator, cfg.parallelism, {true});

    const fs::path out(cfg.out);
    std::vector<json> rows;
    for (std::size_t i = 0; i < run.n; ++i) {
      const RunResult& r = run.runs[i];
      const std::string stem = file_stem(r.task_id);
      write_file(out / "trajectories" / (stem + ".json"), dump(run_result_to_json(r)));
      for (std::size_t k = 0; k < r.observations.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "step_%02zu.png", k + 1);
        write_file(out / "observations" / stem / name, std::span<const std::uint8_t>(r.observations[k]));
      }
      rows.push_back(suite_record_json(r, run.scores[i]));
    }
    json summary = suite_summary_json(run);
    summary["interpreter"] = interpreter->name();
    summary["locator"] = locator->name();
    write_report(out, summary, rows);
    return kExitOk;
  });
}

int cmd_parse(std::string_view text, ScreenDims dims, std::ostream& out) {
  const LocatedPoint lp = point_with_fallback(text, dims);
  nlohmann::ordered_json j;
  j["x"] = lp.point.x;
  j["y"] = lp.point.y;
  if (lp.raw) j["family"] = family_name(lp.raw->family);
  j["fallback"] = lp.fallback;
  out << j.dump() << "\n";
  return kExitOk;
}

int cmd_export(const CliConfig& cfg, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.env.empty()) throw ConfigError("--env is required");
    require_out(cfg);
    if (!fs::exists(cfg.env)) throw std::runtime_error("cannot open " + cfg.env);
    const TaskSuite suite = load_suite(cfg.env);
    const fs::path out(cfg.out);

    auto image_rel = [](const std::string& env, const std::string& screen) {
      return "screens/" + file_stem(env) + "/" + file_stem(screen) + ".png";
    };
    std::string grounding;
    for (const auto& [name, spec] : suite.envs) {
      const std::string plat = spec->platform;
      for (const sim::ScreenModel& screen : spec->screens) {
        const std::string rel = image_rel(name, screen.id);
        write_file(out / rel, std::span<const std::uint8_t>(encode_png(render_screen(screen, spec->render_dims))));
        write_file(screen_sidecar_path(out / rel), dump(sim::screen_to_json(screen)));
        for (const sim::Element& e : screen.elements) {
          GroundingRecord r;
          r.id = name + "/" + screen.id + "/" + e.id;
          r.image = rel;
          r.description = e.description;
          r.bbox = e.bbox;
          r.category = e.text ? Category::Text : Category::IconWidget;
          r.platform = plat == "MOBILE" ? Platform::Mobile
                                        : plat == "DESKTOP" ? Platform::Desktop : Platform::Web;
          grounding += grounding_record_to_json(r).dump() + "\n";
        }
      }
    }
    write_file(out / "grounding.jsonl", grounding);

    std::string offline;
    for (const SuiteTask& t : suite.tasks) {
      const GoldWalk walk = walk_gold(t);
      for (const GoldFrame& f : walk.frames) {
        if (f.record.gt_operation == OpKind::Stop) continue;
        OfflineStepRecord r = f.record;
        r.image = image_rel(t.env, f.screen);
        offline += offline_record_to_json(r).dump() + "\n";
      }
    }
    write_file(out / "offline.jsonl", offline);
    return kExitOk;
  });
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-stage GUI agent harness: grounding, replay, interactive runs"};
  app.require_subcommand(1);

  std::string config_path;
  CliConfig flags;
  std::string parse_text, parse_file;
  int width = 1920, height = 1080;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--interpreter", flags.interpreter, "scripted | scripted:PATH | always-click:SPEC | http");
    sub->add_option("--locator", flags.locator, "oracle | naive | noisy:SIGMA[,SEED] | http");
    sub->add_option("--records", flags.records, "JSONL records");
    sub->add_option("--env", flags.env, "task suite JSON");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--max-steps", flags.max_steps, "step budget override");
    sub->add_option("--parallelism", flags.parallelism, "worker count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", flags.seed, "default seed for noisy locators");
    sub->add_flag("--allow-network", flags.allow_network, "permit HTTP backends");
  };
  CLI::App* ground = app.add_subcommand("ground", "grounding accuracy over screenshot records");
  CLI::App* replay = app.add_subcommand("replay", "offline replay of recorded steps");
  CLI::App* run = app.add_subcommand("run", "run agents over a simulated task suite");
  CLI::App* exp = app.add_subcommand("export", "render a task suite into record fixtures");
  for (CLI::App* sub : {ground, replay, run, exp}) add_common(sub);
  CLI::App* parse = app.add_subcommand("parse", "extract a point from model output");
  parse->add_option("text", parse_text, "reply text");
  parse->add_option("--file", parse_file, "read the reply from a file");
  parse->add_option("--width", width, "screen width in pixels")->check(CLI::PositiveNumber);
  parse->add_option("--height", height, "screen height in pixels")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  if (parse->parsed()) {
    std::string text = parse_text;
    if (!parse_file.empty()) {
      try {
        text = read_text_file(parse_file);
      } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
      }
    }
    return cmd_parse(text, ScreenDims(width, height), out);
  }

  CLI::App* sub = app.get_subcommands().front();
  CliConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = load_config(config_path);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--interpreter")) cfg.interpreter = flags.interpreter;
  if (given("--locator")) cfg.locator = flags.locator;
  if (given("--records")) cfg.records = flags.records;
  if (given("--env")) cfg.env = flags.env;
  if (given("--out")) cfg.out = flags.out;
  if (given("--max-steps")) cfg.max_steps = flags.max_steps;
  if (given("--parallelism")) cfg.parallelism = flags.parallelism;
  if (given("--seed")) cfg.seed = flags.seed;
  if (given("--allow-network")) cfg.allow_network = true;

  if (sub == ground) return cmd_ground(cfg, err);
  if (sub == replay) return cmd_replay(cfg, err);
  if (sub == run) return cmd_run(cfg, err);
  return cmd_export(cfg, err);
}

}  // namespace guiagent::cli
