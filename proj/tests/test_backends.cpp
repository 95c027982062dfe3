#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "guiagent/backends.hpp"
#include "guiagent/history.hpp"

using namespace guiagent;

namespace {

sim::ScreenModel search_screen() {
  return {"home",
          {{"bar", {0.25, 0.05, 0.75, 0.12}, "search bar", std::nullopt, {240, 240, 240}},
           {"big", {0.0, 0.5, 0.5, 0.6}, "Submit button", std::string("Go"), {0, 0, 200}},      // area 0.05
           {"small", {0.6, 0.5, 0.8, 0.6}, "submit button", std::string("Go"), {0, 0, 200}},   // area 0.02
           {"logo", {0.0, 0.0, 0.1, 0.05}, "Company logo", std::nullopt, {10, 10, 10}}},
          {255, 255, 255}};
}

LocatorRequest request(std::string d, const sim::ScreenModel& s) {
  LocatorRequest r;
  r.description = std::move(d);
  r.observation.dims = {1000, 1000};
  r.observation.screen_model = std::make_shared<const sim::ScreenModel>(s);
  return r;
}

InterpreterRequest interp_request(std::size_t history_len) {
  InterpreterRequest r;
  r.task_id = "t";
  r.task = "find netflix";
  for (std::size_t i = 0; i < history_len; ++i) {
    r.history.push_back({{"box " + std::to_string(i), "CLICK", std::nullopt, ""},
                         ActionTriplet::click({0.5, 0.5})});
  }
  return r;
}

class FixedInterpreter final : public Interpreter {
 public:
  explicit FixedInterpreter(std::string reply) : reply_(std::move(reply)) {}
  std::string interpret(const InterpreterRequest&) const override {
    if (reply_.empty()) throw std::runtime_error("inner failed");
    return reply_;
  }
  std::string name() const override { return "fixed"; }

 private:
  std::string reply_;
};

}  // namespace

TEST_CASE("build_locator_prompt examples") {
  CHECK(build_locator_prompt("close button") ==
        "In this UI screenshot, what is the position of the element corresponding to the description "
        "\"close button\" (with point)?");
  try {
    build_locator_prompt("");
    FAIL("expected EmptyDescription");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::EmptyDescription);
  }
  const std::string quoted = "the \"OK\" button";
  CHECK(build_locator_prompt(quoted).find(quoted) != std::string::npos);
}

TEST_CASE("locator prompt is injective in the description") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> ch(32, 126), len(1, 12);
  for (int i = 0; i < 2000; ++i) {
    std::string a, b;
    for (int k = len(rng); k > 0; --k) a += static_cast<char>(ch(rng));
    for (int k = len(rng); k > 0; --k) b += static_cast<char>(ch(rng));
    REQUIRE((build_locator_prompt(a) == build_locator_prompt(b)) == (a == b));
    REQUIRE(build_locator_prompt(a).find("\"" + a + "\"") != std::string::npos);
  }
}

TEST_CASE("build_interpreter_prompt") {
  const std::string empty = build_interpreter_prompt(interp_request(0));
  CHECK(empty.find("History: (none)") != std::string::npos);
  CHECK(empty.find("Task: find netflix") != std::string::npos);
  CHECK(empty.find("CLICK, TYPE, SELECT, SCROLL, HOTKEY, STOP") != std::string::npos);
  CHECK(empty.find("Element Description:") != std::string::npos);

  const std::string two = build_interpreter_prompt(interp_request(2));
  const auto first = two.find("1. CLICK on \"box 0\"");
  const auto second = two.find("2. CLICK on \"box 1\"");
  CHECK(first != std::string::npos);
  CHECK(second != std::string::npos);
  CHECK(first < second);
  CHECK(two == build_interpreter_prompt(interp_request(2)));
}

TEST_CASE("history_to_text") {
  CHECK(history_to_text({}) == "(none)");
  const std::vector<HistoryEntry> h = {
      {{"Search bar with placeholder text [Search for stocks, ETFs & more]", "TYPE", std::string("Netflix"), ""},
       ActionTriplet::type({0.5, 0.1}, "Netflix")}};
  CHECK(history_to_text(h) == "1. TYPE \"Netflix\" on \"Search bar with placeholder text [Search for stocks, ETFs & more]\"");
  CHECK(history_to_text(h) == history_to_text(h));
}

TEST_CASE("oracle_locate examples") {
  const auto screen = search_screen();
  const NormalizedPoint p = oracle_locate(request("search bar", screen), screen);
  CHECK(p.x == 0.5);
  CHECK(p.y == doctest::Approx(0.085).epsilon(1e-12));
  CHECK(oracle_locate(request("submit button", screen), screen) == Box{0.6, 0.5, 0.8, 0.6}.center());
  CHECK(oracle_locate(request("  SEARCH BAR ", screen), screen) == p);
  try {
    oracle_locate(request("nonexistent", screen), screen);
    FAIL("expected NoMatch");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::NoMatch);
  }
}

TEST_CASE("exact matches beat substring matches") {
  const sim::ScreenModel s{"s",
                           {{"wide", {0.0, 0.0, 1.0, 0.5}, "Search", std::nullopt, {0, 0, 0}},
                            {"tiny", {0.0, 0.6, 0.1, 0.7}, "search history", std::nullopt, {0, 0, 0}}},
                           {255, 255, 255}};
  CHECK(oracle_locate(request("search", s), s) == Box{0.0, 0.0, 1.0, 0.5}.center());
  CHECK(oracle_locate(request("history", s), s) == Box{0.0, 0.6, 0.1, 0.7}.center());
}

TEST_CASE("tie-break by top then left") {
  const sim::ScreenModel s{"s",
                           {{"c", {0.5, 0.5, 0.6, 0.6}, "item", std::nullopt, {0, 0, 0}},
                            {"b", {0.5, 0.1, 0.6, 0.2}, "item", std::nullopt, {0, 0, 0}},
                            {"a", {0.1, 0.1, 0.2, 0.2}, "item", std::nullopt, {0, 0, 0}}},
                           {255, 255, 255}};
  CHECK(oracle_locate(request("item", s), s) == Box{0.1, 0.1, 0.2, 0.2}.center());
}

TEST_CASE("oracle output lies in the matched bbox") {
  const auto screen = search_screen();
  for (const auto& e : screen.elements) {
    const NormalizedPoint p = oracle_locate(request(e.description, screen), screen);
    bool inside_a_match = false;
    for (const auto& other : screen.elements) {
      const bool same = doctest::String(other.description.c_str()).compare(e.description.c_str(), true) == 0;
      inside_a_match = inside_a_match || (same && point_in_bbox(p, other.bbox));
    }
    CHECK(inside_a_match);
  }
}

TEST_CASE("naive_locate is constant") {
  const auto screen = search_screen();
  CHECK(naive_locate(request("anything", screen)) == NormalizedPoint(0.5, 0.5));
  CHECK(naive_locate(request("other", screen)) == naive_locate(request("anything", screen)));
  CHECK(naive_locate(request("", screen)) == NormalizedPoint(0.5, 0.5));
  NaiveLocator loc;
  CHECK(point_with_fallback(loc.locate(request("x", screen)), {10, 10}).point == NormalizedPoint(0.5, 0.5));
}

TEST_CASE("noisy_locate") {
  const auto screen = search_screen();
  for (const auto& e : screen.elements) {
    const auto req = request(e.description, screen);
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
      CHECK(noisy_locate(req, screen, 0.0, seed) == oracle_locate(req, screen));
    }
    CHECK(noisy_locate(req, screen, 0.1, 5) == noisy_locate(req, screen, 0.1, 5));
    const NormalizedPoint far = noisy_locate(req, screen, 10.0, 5);
    CHECK(far.x >= 0.0);
    CHECK(far.x <= 1.0);
    CHECK(far.y >= 0.0);
    CHECK(far.y <= 1.0);
  }
  CHECK_THROWS_AS(NoisyLocator(-1.0, 0), BackendError);
}

TEST_CASE("locator replies parse back to the exact point") {
  const auto screen = search_screen();
  OracleLocator loc;
  for (const auto& e : screen.elements) {
    const auto req = request(e.description, screen);
    CHECK(point_with_fallback(loc.locate(req), {1000, 1000}).point == oracle_locate(req, screen));
  }
  NoisyLocator noisy(0.07, 3);
  const auto req = request("search bar", screen);
  CHECK(point_with_fallback(noisy.locate(req), {1000, 1000}).point == noisy_locate(req, screen, 0.07, 3));
}

TEST_CASE("locators need the screen model") {
  auto req = request("search bar", search_screen());
  req.observation.screen_model = nullptr;
  OracleLocator loc;
  CHECK_THROWS_AS(loc.locate(req), BackendError);
}

TEST_CASE("scripted_interpret examples") {
  const std::vector<StructuredStep> script = {
      {"search bar", "TYPE", std::string("netflix"), ""},
      {"first result", "CLICK", std::nullopt, ""},
      {"", "STOP", std::nullopt, ""}};
  CHECK(scripted_interpret(interp_request(0), script) == script[0]);
  CHECK(scripted_interpret(interp_request(2), script) == script[2]);
  try {
    scripted_interpret(interp_request(3), script);
    FAIL("expected ScriptExhausted");
  } catch (const BackendError& e) {
    CHECK(e.kind() == BackendError::Kind::ScriptExhausted);
  }
  ScriptedInterpreter interp({{"t", script}});
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string a = interp.interpret(interp_request(k));
    CHECK(a == interp.interpret(interp_request(k)));
    CHECK(parse_structured_step(a) == script[k]);
  }
}

TEST_CASE("always_click_interpret examples") {
  const FixedInterpreter typing("Action: TYPE\nValue: netflix\nElement Description: search bar");
  const StructuredStep s = always_click_interpret(interp_request(0), typing);
  CHECK(s.description == "search bar");
  CHECK(s.operation_name == "CLICK");
  CHECK_FALSE(s.value.has_value());

  const FixedInterpreter clicking("Action: CLICK\nElement Description: OK");
  const StructuredStep c = always_click_interpret(interp_request(0), clicking);
  CHECK(c == parse_structured_step("Action: CLICK\nElement Description: OK"));

  const FixedInterpreter failing("");
  CHECK_THROWS_WITH(always_click_interpret(interp_request(0), failing), "inner failed");

  AlwaysClickInterpreter wrapper(std::make_shared<FixedInterpreter>("Action: TYPE\nValue: x\nElement Description: y"));
  CHECK(parse_structured_step(wrapper.interpret(interp_request(0))).operation_name == "CLICK");
}

TEST_CASE("script json") {
  const auto list = load_scripts(nlohmann::json::parse(R"([{"operation": "CLICK", "description": "a"}])"));
  CHECK(list.at("").size() == 1);
  const auto keyed = load_scripts(nlohmann::json::parse(
      R"({"t1": [{"operation": "TYPE", "description": "b", "value": "v"}, {"operation": "STOP"}]})"));
  CHECK(keyed.at("t1")[0].value == "v");
  CHECK(step_from_json(step_to_json(keyed.at("t1")[0])) == keyed.at("t1")[0]);
  CHECK_THROWS_AS(load_scripts(nlohmann::json(3)), BackendError);
  CHECK_THROWS_AS(load_scripts(nlohmann::json::parse(R"([{"description": "no op"}])")), BackendError);
}
