#include "fixtures.hpp"

#include <cstdlib>
#include <random>
#include <sstream>

#include "guiagent/cli.hpp"
#include "guiagent/records.hpp"
#include "guiagent/util.hpp"

namespace fixtures {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const json kButton = {66, 133, 244};
const json kField = {232, 232, 232};
const json kPanel = {250, 246, 230};
const json kIcon = {90, 90, 90};
const json kLink = {200, 220, 255};

class EnvBuilder {
 public:
  EnvBuilder(const std::string& platform, const std::string& initial, json goal) {
    j_ = {{"render_dims", {{"width", 400}, {"height", 300}}},
          {"platform", platform},
          {"screens", json::array()},
          {"transitions", json::array()},
          {"initial_screen", initial},
          {"goal", std::move(goal)}};
  }

  EnvBuilder& screen(const std::string& id, json bg = {255, 255, 255}) {
    j_["screens"].push_back({{"id", id}, {"background", bg}, {"elements", json::array()}});
    return *this;
  }

  /// Element on the most recent screen. An empty text leaves it unlabeled.
  EnvBuilder& el(const std::string& id, double x0, double y0, double x1, double y1,
                 const std::string& desc, const std::string& text, const json& color) {
    json e = {{"id", id}, {"bbox", {x0, y0, x1, y1}}, {"description", desc}, {"fill_color", color}};
    e["text"] = text.empty() ? json(nullptr) : json(text);
    j_["screens"].back()["elements"].push_back(e);
    return *this;
  }

  /// Empty element = screen-wide, empty value = wildcard, empty effect = none.
  EnvBuilder& tr(const std::string& from, const std::string& element, const std::string& op,
                 const std::string& value, const std::string& to, const std::string& effect = "") {
    json t = {{"from_screen", from}, {"operation", op}, {"to_screen", to}};
    t["element"] = element.empty() ? json(nullptr) : json(element);
    t["value_pattern"] = value.empty() ? json(nullptr) : json(value);
    t["state_effect"] = effect.empty() ? json(nullptr) : json(effect);
    j_["transitions"].push_back(t);
    return *this;
  }

  json build() const { return j_; }

 private:
  json j_;
};

json step(const std::string& op, const std::string& desc, const std::string& element,
          const std::string& value = "") {
  json s = {{"operation", op}, {"description", desc}, {"element", element}};
  s["value"] = value.empty() ? json(nullptr) : json(value);
  return s;
}

json stop() { return {{"operation", "STOP"}, {"description", ""}, {"value", nullptr}}; }

json task(const std::string& id, const std::string& goal, const std::string& env, json success,
          json script, bool stop_on_goal = true) {
  script.push_back(stop());
  return {{"task_id", id},   {"goal", goal},     {"env", env},      {"max_steps", 10},
          {"success", success}, {"stop_on_goal", stop_on_goal}, {"script", script}};
}

json wizard_env() {
  EnvBuilder b("MOBILE", "w0", {{"screen", "w7"}});
  for (int i = 0; i <= 7; ++i) {
    const std::string id = "w" + std::to_string(i);
    b.screen(id, {245, 245, 250})
        .el("title", 0.05, 0.03, 0.95, 0.15, "Page title", "Setup step " + std::to_string(i), kPanel)
        .el("skip", 0.8, 0.2, 0.95, 0.3, "Skip link", "Skip", kLink)
        .el("next", 0.3, 0.4, 0.7, 0.6, "Next button", "Next", kButton)
        .el("back", 0.05, 0.8, 0.3, 0.92, "Back button", "Back", kButton);
  }
  for (int i = 0; i <= 7; ++i) {
    const std::string id = "w" + std::to_string(i);
    if (i < 7) b.tr(id, "next", "CLICK", "", "w" + std::to_string(i + 1));
    if (i > 0) b.tr(id, "back", "CLICK", "", "w" + std::to_string(i - 1));
    if (i < 7) b.tr(id, "skip", "CLICK", "", "w7");
  }
  return b.build();
}

json shop_env() {
  EnvBuilder b("WEB", "home", {{"screen", "confirm"}});
  b.screen("home")
      .el("logo", 0.02, 0.02, 0.2, 0.12, "Store logo", "SHOP", kPanel)
      .el("search", 0.25, 0.02, 0.75, 0.12, "Search box", "Search products", kField)
      .el("search_btn", 0.77, 0.02, 0.9, 0.12, "Search button", "Go", kButton)
      .el("cart_icon", 0.92, 0.02, 0.98, 0.12, "Shopping cart icon", "", kIcon)
      .el("banner", 0.1, 0.25, 0.9, 0.7, "Summer sale banner", "Summer sale", {255, 200, 120})
      .el("cat_laptops", 0.05, 0.8, 0.3, 0.95, "Laptops category", "Laptops", kButton)
      .el("cat_phones", 0.37, 0.8, 0.63, 0.95, "Phones category", "Phones", kButton)
      .el("account", 0.7, 0.8, 0.95, 0.95, "Account button", "Account", kButton);
  b.screen("results")
      .el("back_home", 0.02, 0.02, 0.2, 0.12, "Home link", "Home", kLink)
      .el("sort", 0.6, 0.02, 0.95, 0.12, "Sort dropdown", "Sort", kField)
      .el("item1", 0.05, 0.2, 0.95, 0.35, "First result", "Laptop Pro 14", kPanel)
      .el("item2", 0.05, 0.4, 0.95, 0.55, "Second result", "Laptop Air 13", kPanel)
      .el("item3", 0.05, 0.6, 0.95, 0.75, "Third result", "Laptop Go 12", kPanel)
      .el("more", 0.3, 0.82, 0.7, 0.95, "Results list footer", "More", kLink);
  b.screen("product")
      .el("back", 0.02, 0.02, 0.2, 0.12, "Back to results", "Back", kLink)
      .el("photo", 0.05, 0.18, 0.45, 0.7, "Product photo", "", {180, 180, 200})
      .el("qty", 0.55, 0.2, 0.95, 0.32, "Quantity selector", "Qty 1", kField)
      .el("add", 0.55, 0.45, 0.95, 0.6, "Add to cart button", "Add to cart", kButton)
      .el("wish", 0.55, 0.7, 0.95, 0.82, "Wishlist button", "Save", kButton);
  b.screen("cart")
      .el("items", 0.05, 0.15, 0.95, 0.6, "Cart contents", "1 item", kPanel)
      .el("continue", 0.05, 0.7, 0.45, 0.85, "Continue shopping button", "Continue", kButton)
      .el("checkout", 0.55, 0.7, 0.95, 0.85, "Checkout button", "Checkout", kButton);
  b.screen("checkout")
      .el("name", 0.1, 0.1, 0.9, 0.22, "Full name field", "Name", kField)
      .el("address", 0.1, 0.3, 0.9, 0.42, "Address field", "Address", kField)
      .el("shipping", 0.1, 0.48, 0.9, 0.6, "Shipping method dropdown", "Shipping", kField)
      .el("place", 0.3, 0.75, 0.7, 0.9, "Place order button", "Place order", kButton);
  b.screen("confirm").el("msg", 0.1, 0.3, 0.9, 0.6, "Order confirmation message", "Thank you", kPanel);
  b.screen("sale", {255, 240, 220})
      .el("sale_title", 0.1, 0.05, 0.9, 0.2, "Sale heading", "Sale", kPanel)
      .el("deal", 0.2, 0.35, 0.8, 0.65, "Deal of the day", "Deal", {255, 120, 90})
      .el("home", 0.02, 0.85, 0.2, 0.97, "Home link", "Home", kLink);
  b.screen("account")
      .el("email", 0.1, 0.2, 0.9, 0.32, "Email field", "Email", kField)
      .el("password", 0.1, 0.4, 0.9, 0.52, "Password field", "Password", kField)
      .el("signin", 0.3, 0.65, 0.7, 0.8, "Sign in button", "Sign in", kButton);
  b.screen("signed_in").el("welcome", 0.1, 0.3, 0.9, 0.6, "Welcome message", "Welcome", kPanel);

  b.tr("home", "search", "TYPE", "laptop", "home", "query=laptop")
      .tr("home", "search", "TYPE", "phone", "home", "query=phone")
      .tr("home", "search_btn", "CLICK", "", "results")
      .tr("home", "cart_icon", "CLICK", "", "cart")
      .tr("home", "banner", "CLICK", "", "sale")
      .tr("home", "cat_laptops", "CLICK", "", "results", "query=laptop")
      .tr("home", "cat_phones", "CLICK", "", "results", "query=phone")
      .tr("home", "account", "CLICK", "", "account")
      .tr("home", "", "HOTKEY", "ctrl+k", "home", "focus=search")
      .tr("results", "back_home", "CLICK", "", "home")
      .tr("results", "sort", "SELECT", "Price: low to high", "results", "sort=price")
      .tr("results", "sort", "SELECT", "Rating", "results", "sort=rating")
      .tr("results", "item1", "CLICK", "", "product", "item=1")
      .tr("results", "item2", "CLICK", "", "product", "item=2")
      .tr("results", "item3", "CLICK", "", "product", "item=3")
      .tr("results", "more", "SCROLL", "", "results", "page=2")
      .tr("product", "back", "CLICK", "", "results")
      .tr("product", "qty", "SELECT", "2", "product", "qty=2")
      .tr("product", "add", "CLICK", "", "cart", "cart=1")
      .tr("product", "wish", "CLICK", "", "product", "wish=yes")
      .tr("cart", "checkout", "CLICK", "", "checkout")
      .tr("cart", "continue", "CLICK", "", "home")
      .tr("checkout", "name", "TYPE", "", "checkout", "name=filled")
      .tr("checkout", "address", "TYPE", "", "checkout", "address=filled")
      .tr("checkout", "shipping", "SELECT", "Express", "checkout", "ship=express")
      .tr("checkout", "place", "CLICK", "", "confirm")
      .tr("sale", "deal", "CLICK", "", "product", "item=deal")
      .tr("sale", "home", "CLICK", "", "home")
      .tr("account", "email", "TYPE", "", "account", "email=filled")
      .tr("account", "password", "TYPE", "", "account", "password=filled")
      .tr("account", "signin", "CLICK", "", "signed_in");
  return b.build();
}

json mail_env() {
  EnvBuilder b("DESKTOP", "inbox", {{"screen", "sent"}});
  b.screen("inbox")
      .el("compose", 0.02, 0.02, 0.2, 0.1, "Compose button", "Compose", kButton)
      .el("search", 0.25, 0.02, 0.75, 0.1, "Mail search box", "Search mail", kField)
      .el("settings", 0.9, 0.02, 0.98, 0.1, "Settings gear icon", "", kIcon)
      .el("msg1", 0.02, 0.15, 0.98, 0.27, "Message from Alice", "Alice: Lunch?", kPanel)
      .el("msg2", 0.02, 0.3, 0.98, 0.42, "Message from Bob", "Bob: Report", kPanel)
      .el("msg3", 0.02, 0.45, 0.98, 0.57, "Message from Carol", "Carol: Tickets", kPanel)
      .el("folders", 0.02, 0.85, 0.3, 0.97, "Folder list", "Folders", kLink);
  b.screen("message")
      .el("back", 0.02, 0.02, 0.15, 0.1, "Back to inbox", "Inbox", kLink)
      .el("body", 0.02, 0.15, 0.98, 0.7, "Message body", "Hi there", kPanel)
      .el("reply", 0.02, 0.75, 0.3, 0.87, "Reply button", "Reply", kButton)
      .el("forward", 0.35, 0.75, 0.63, 0.87, "Forward button", "Forward", kButton)
      .el("archive", 0.68, 0.75, 0.98, 0.87, "Archive button", "Archive", kButton);
  b.screen("compose")
      .el("to", 0.02, 0.05, 0.98, 0.15, "Recipient field", "To", kField)
      .el("subject", 0.02, 0.2, 0.98, 0.3, "Subject field", "Subject", kField)
      .el("body", 0.02, 0.35, 0.98, 0.8, "Message body editor", "Body", kField)
      .el("send", 0.02, 0.85, 0.25, 0.95, "Send button", "Send", kButton)
      .el("discard", 0.75, 0.85, 0.98, 0.95, "Discard button", "Discard", kButton);
  b.screen("sent")
      .el("inbox", 0.02, 0.02, 0.2, 0.12, "Inbox link", "Inbox", kLink)
      .el("notice", 0.2, 0.4, 0.8, 0.6, "Sent confirmation", "Message sent", kPanel);
  b.screen("settings", {240, 240, 240})
      .el("theme", 0.1, 0.15, 0.9, 0.27, "Theme dropdown", "Theme", kField)
      .el("density", 0.1, 0.35, 0.9, 0.47, "Density dropdown", "Density", kField)
      .el("save", 0.3, 0.6, 0.7, 0.75, "Save settings button", "Save", kButton)
      .el("close", 0.9, 0.02, 0.98, 0.1, "Close settings icon", "", kIcon);
  b.screen("search_results")
      .el("back", 0.02, 0.02, 0.15, 0.1, "Back to inbox", "Inbox", kLink)
      .el("hit1", 0.02, 0.15, 0.98, 0.3, "First search hit", "Invoice March", kPanel);

  b.tr("inbox", "compose", "CLICK", "", "compose")
      .tr("inbox", "settings", "CLICK", "", "settings")
      .tr("inbox", "msg1", "CLICK", "", "message", "open=alice")
      .tr("inbox", "msg2", "CLICK", "", "message", "open=bob")
      .tr("inbox", "msg3", "CLICK", "", "message", "open=carol")
      .tr("inbox", "search", "TYPE", "invoice", "search_results", "query=invoice")
      .tr("inbox", "", "HOTKEY", "c", "compose")
      .tr("message", "back", "CLICK", "", "inbox")
      .tr("message", "reply", "CLICK", "", "compose", "mode=reply")
      .tr("message", "forward", "CLICK", "", "compose", "mode=forward")
      .tr("message", "archive", "CLICK", "", "inbox", "archived=yes")
      .tr("message", "", "SCROLL", "", "message", "scrolled=yes")
      .tr("compose", "to", "TYPE", "", "compose", "to=filled")
      .tr("compose", "subject", "TYPE", "", "compose", "subject=filled")
      .tr("compose", "body", "TYPE", "", "compose", "body=filled")
      .tr("compose", "send", "CLICK", "", "sent")
      .tr("compose", "discard", "CLICK", "", "inbox")
      .tr("compose", "", "HOTKEY", "ctrl+enter", "sent")
      .tr("sent", "inbox", "CLICK", "", "inbox")
      .tr("settings", "theme", "SELECT", "Dark", "settings", "theme=dark")
      .tr("settings", "density", "SELECT", "Compact", "settings", "density=compact")
      .tr("settings", "save", "CLICK", "", "inbox", "saved=yes")
      .tr("settings", "close", "CLICK", "", "inbox")
      .tr("search_results", "hit1", "CLICK", "", "message", "open=invoice")
      .tr("search_results", "back", "CLICK", "", "inbox");
  return b.build();
}

json goal(const std::string& screen, json state = json::object()) {
  json g = {{"screen", screen}};
  if (!state.empty()) g["state"] = state;
  return g;
}

json wizard_tasks() {
  json tasks = json::array();
  auto nexts = [](int n) {
    json s = json::array();
    for (int i = 0; i < n; ++i) s.push_back(step("CLICK", "Next button", "next"));
    return s;
  };
  tasks.push_back(task("wizard-4", "Advance the setup wizard to step 4", "wizard", goal("w4"), nexts(4)));
  tasks.push_back(task("wizard-6", "Advance the setup wizard to step 6", "wizard", goal("w6"), nexts(6)));
  tasks.push_back(task("wizard-7", "Finish every step of the setup wizard", "wizard", goal("w7"), nexts(7)));
  json back = nexts(4);
  back.push_back(step("CLICK", "Back button", "back"));
  tasks.push_back(task("wizard-back", "Go to step 4 of the wizard, then return to step 3", "wizard",
                       goal("w3"), back, false));
  return tasks;
}

json shop_tasks() {
  json t = json::array();
  t.push_back(task("shop-search-sort", "Search for laptops, sort by price and open the first result", "shop",
                   goal("product", {{"query", "laptop"}, {"sort", "price"}, {"item", "1"}}),
                   {step("TYPE", "Search box", "search", "laptop"),
                    step("CLICK", "Search button", "search_btn"),
                    step("SELECT", "Sort dropdown", "sort", "Price: low to high"),
                    step("CLICK", "First result", "item1")}));
  t.push_back(task("shop-buy-second", "Buy the second laptop", "shop",
                   goal("confirm", {{"item", "2"}, {"name", "filled"}, {"address", "filled"}}),
                   {step("CLICK", "Laptops category", "cat_laptops"),
                    step("CLICK", "Second result", "item2"),
                    step("CLICK", "Add to cart button", "add"),
                    step("CLICK", "Checkout button", "checkout"),
                    step("TYPE", "Full name field", "name", "Ada Lovelace"),
                    step("TYPE", "Address field", "address", "12 Analytical Way"),
                    step("CLICK", "Place order button", "place")}));
  t.push_back(task("shop-two-phones", "Put two of the first phone in the cart", "shop",
                   goal("cart", {{"qty", "2"}, {"item", "1"}, {"query", "phone"}}),
                   {step("CLICK", "Phones category", "cat_phones"),
                    step("CLICK", "First result", "item1"),
                    step("SELECT", "Quantity selector", "qty", "2"),
                    step("CLICK", "Add to cart button", "add")}));
  t.push_back(task("shop-deal", "Check out with the deal of the day", "shop",
                   goal("checkout", {{"item", "deal"}}),
                   {step("CLICK", "Summer sale banner", "banner"),
                    step("CLICK", "Deal of the day", "deal"),
                    step("CLICK", "Add to cart button", "add"),
                    step("CLICK", "Checkout button", "checkout")}));
  t.push_back(task("shop-sign-in", "Sign in to the store", "shop",
                   goal("signed_in", {{"email", "filled"}, {"password", "filled"}}),
                   {step("CLICK", "Account button", "account"),
                    step("TYPE", "Email field", "email", "ada@example.com"),
                    step("TYPE", "Password field", "password", "hunter2"),
                    step("CLICK", "Sign in button", "signin")}));
  t.push_back(task("shop-rating-more", "Sort laptops by rating and load more results", "shop",
                   goal("results", {{"sort", "rating"}, {"page", "2"}}),
                   {step("CLICK", "Laptops category", "cat_laptops"),
                    step("SELECT", "Sort dropdown", "sort", "Rating"),
                    step("SCROLL", "Results list footer", "more", "3")}));
  t.push_back(task("shop-hotkey-search", "Use the search shortcut to find phones and open the third", "shop",
                   goal("product", {{"focus", "search"}, {"query", "phone"}, {"item", "3"}}),
                   {step("HOTKEY", "Search box", "search", "ctrl+k"),
                    step("TYPE", "Search box", "search", "phone"),
                    step("CLICK", "Search button", "search_btn"),
                    step("CLICK", "Third result", "item3")}));
  t.push_back(task("shop-express", "Check out the cart with express shipping", "shop",
                   goal("confirm", {{"ship", "express"}, {"name", "filled"}}),
                   {step("CLICK", "Shopping cart icon", "cart_icon"),
                    step("CLICK", "Checkout button", "checkout"),
                    step("SELECT", "Shipping method dropdown", "shipping", "Express"),
                    step("TYPE", "Full name field", "name", "Grace Hopper"),
                    step("CLICK", "Place order button", "place")}));
  t.push_back(task("shop-wishlist", "Save the third laptop to the wishlist and go back", "shop",
                   goal("results", {{"wish", "yes"}, {"item", "3"}}),
                   {step("CLICK", "Laptops category", "cat_laptops"),
                    step("CLICK", "Third result", "item3"),
                    step("CLICK", "Wishlist button", "wish"),
                    step("CLICK", "Back to results", "back")}));
  return t;
}

json mail_tasks() {
  json t = json::array();
  t.push_back(task("mail-reply-carol", "Reply to Carol", "mail",
                   goal("sent", {{"open", "carol"}, {"mode", "reply"}, {"body", "filled"}}),
                   {step("CLICK", "Message from Carol", "msg3"),
                    step("CLICK", "Reply button", "reply"),
                    step("TYPE", "Message body editor", "body", "See you there"),
                    step("CLICK", "Send button", "send")}));
  t.push_back(task("mail-new", "Email Dan to say hello", "mail",
                   goal("sent", {{"to", "filled"}, {"subject", "filled"}, {"body", "filled"}}),
                   {step("CLICK", "Compose button", "compose"),
                    step("TYPE", "Recipient field", "to", "dan@example.com"),
                    step("TYPE", "Subject field", "subject", "Hello"),
                    step("TYPE", "Message body editor", "body", "Long time no see"),
                    step("CLICK", "Send button", "send")}));
  t.push_back(task("mail-dark", "Switch to the dark theme, then start a new message", "mail",
                   goal("compose", {{"theme", "dark"}, {"saved", "yes"}}),
                   {step("CLICK", "Settings gear icon", "settings"),
                    step("SELECT", "Theme dropdown", "theme", "Dark"),
                    step("CLICK", "Save settings button", "save"),
                    step("CLICK", "Compose button", "compose")}));
  t.push_back(task("mail-archive-bob", "Read Bob's message and archive it", "mail",
                   goal("inbox", {{"open", "bob"}, {"scrolled", "yes"}, {"archived", "yes"}}),
                   {step("CLICK", "Message from Bob", "msg2"),
                    step("SCROLL", "Message body", "body", "2"),
                    step("SCROLL", "Message body", "body", "-1"),
                    step("CLICK", "Archive button", "archive")}));
  t.push_back(task("mail-forward-invoice", "Forward the invoice to accounting", "mail",
                   goal("sent", {{"open", "invoice"}, {"mode", "forward"}, {"to", "filled"}}),
                   {step("TYPE", "Mail search box", "search", "invoice"),
                    step("CLICK", "First search hit", "hit1"),
                    step("CLICK", "Forward button", "forward"),
                    step("TYPE", "Recipient field", "to", "acct@example.com"),
                    step("HOTKEY", "Message body editor", "body", "ctrl+enter")}));
  t.push_back(task("mail-compact-dark", "Use a compact, dark layout", "mail",
                   goal("inbox", {{"density", "compact"}, {"theme", "dark"}, {"saved", "yes"}}),
                   {step("CLICK", "Settings gear icon", "settings"),
                    step("SELECT", "Density dropdown", "density", "Compact"),
                    step("SELECT", "Theme dropdown", "theme", "Dark"),
                    step("CLICK", "Save settings button", "save")}));
  t.push_back(task("mail-draft-discard", "Start a draft with the keyboard, then discard it", "mail",
                   goal("inbox", {{"subject", "filled"}}),
                   {step("HOTKEY", "Compose button", "compose", "c"),
                    step("TYPE", "Subject field", "subject", "Draft"),
                    step("CLICK", "Discard button", "discard")}));
  return t;
}

}  // namespace

json suite_json() {
  json tasks = json::array();
  for (const json& group : {wizard_tasks(), shop_tasks(), mail_tasks()}) {
    for (const json& t : group) tasks.push_back(t);
  }
  return {{"envs", {{"wizard", wizard_env()}, {"shop", shop_env()}, {"mail", mail_env()}}},
          {"tasks", tasks}};
}

fs::path source_dir() {
  if (const char* env = std::getenv("GUIAGENT_FIXTURES")) return env;
  return fs::path(__FILE__).parent_path() / "fixtures";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "guiagent_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Exported export_suite(const std::string& name) {
  Exported e;
  e.dir = scratch_dir(name);
  e.suite = e.dir / "suite.json";
  guiagent::write_file(e.suite, suite_json().dump(2));
  guiagent::cli::CliConfig cfg;
  cfg.env = e.suite.string();
  cfg.out = (e.dir / "export").string();
  std::ostringstream err;
  if (guiagent::cli::cmd_export(cfg, err) != 0) throw std::runtime_error("export failed: " + err.str());
  e.grounding = e.dir / "export" / "grounding.jsonl";
  e.offline = e.dir / "export" / "offline.jsonl";
  return e;
}

json flawed_script(const fs::path& offline_jsonl) {
  const fs::path base = offline_jsonl.parent_path();
  json scripts = json::object();
  int clicks = 0;
  for (const json& r : guiagent::read_jsonl(offline_jsonl)) {
    json s = {{"operation", r["gt_operation"]},
              {"description", r["gt_description"]},
              {"value", r["gt_value"]},
              {"rationale", ""}};
    if (r["gt_operation"] == "CLICK" && clicks++ % 2 == 1) {
      fs::path sidecar = base / r["image"].get<std::string>();
      sidecar.replace_extension(".screen.json");
      const json screen = json::parse(guiagent::read_text_file(sidecar));
      const json& box = r["acceptable_bboxes"][0];
      const double cx = (box[0].get<double>() + box[2].get<double>()) / 2;
      const double cy = (box[1].get<double>() + box[3].get<double>()) / 2;
      for (const json& e : screen["elements"]) {
        const json& b = e["bbox"];
        const double ex = (b[0].get<double>() + b[2].get<double>()) / 2;
        const double ey = (b[1].get<double>() + b[3].get<double>()) / 2;
        const bool inside_target = box[0] <= ex && ex <= box[2] && box[1] <= ey && ey <= box[3];
        const bool covers_target = b[0] <= cx && cx <= b[2] && b[1] <= cy && cy <= b[3];
        if (!inside_target && !covers_target) {
          s["description"] = e["description"];
          break;
        }
      }
      s["operation"] = "SCROLL";
      s["value"] = "3";
    }
    scripts[r["trajectory_id"].get<std::string>()].push_back(s);
  }
  return scripts;
}

namespace {

const std::vector<std::string> kOps = {"CLICK", "TYPE", "SELECT", "SCROLL", "HOTKEY", "STOP"};
const std::vector<std::string> kWords = {"netflix", "stock", "price", "new", "york", "blue",
                                         "ctrl+c", "alt", "hello", "world"};

double grid(std::mt19937_64& rng) {
  return static_cast<double>(std::uniform_int_distribution<int>(0, 20)(rng)) * 0.05;
}

json random_box(std::mt19937_64& rng) {
  int a = std::uniform_int_distribution<int>(0, 19)(rng);
  int b = std::uniform_int_distribution<int>(a + 1, 20)(rng);
  int c = std::uniform_int_distribution<int>(0, 19)(rng);
  int d = std::uniform_int_distribution<int>(c + 1, 20)(rng);
  return {a * 0.05, c * 0.05, b * 0.05, d * 0.05};
}

std::string random_phrase(std::mt19937_64& rng, int min_words, int max_words) {
  const int n = std::uniform_int_distribution<int>(min_words, max_words)(rng);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += " ";
    s += kWords[std::uniform_int_distribution<std::size_t>(0, kWords.size() - 1)(rng)];
  }
  return s;
}

std::string perturb(std::mt19937_64& rng, const std::string& v) {
  switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0: return v;
    case 1: {
      std::string up = v;
      for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return up;
    }
    case 2: return "  " + v + " ";
    case 3: return v + " " + random_phrase(rng, 1, 1);
    case 4: return random_phrase(rng, 1, 3);
    default: return "";
  }
}

bool takes_value(const std::string& op) { return op == "TYPE" || op == "SELECT" || op == "HOTKEY" || op == "SCROLL"; }

}  // namespace

std::vector<json> random_offline_cases(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<json> out;
  for (int i = 0; i < n; ++i) {
    json rec;
    char id[16];
    std::snprintf(id, sizeof id, "r%04d", (i * 7919) % 10007);
    rec["id"] = id;
    rec["image"] = "unused.png";
    const int nboxes = std::uniform_int_distribution<int>(1, 3)(rng);
    rec["acceptable_bboxes"] = json::array();
    for (int k = 0; k < nboxes; ++k) rec["acceptable_bboxes"].push_back(random_box(rng));
    const std::string op = kOps[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
    rec["gt_operation"] = op;
    std::string value;
    if (op == "SCROLL") {
      value = std::to_string(std::uniform_int_distribution<int>(-5, 5)(rng));
    } else if (takes_value(op)) {
      value = random_phrase(rng, 1, 3);
    }
    rec["gt_value"] = value.empty() ? json(nullptr) : json(value);
    rec["split"] = std::uniform_int_distribution<int>(0, 1)(rng) ? "cross-task" : "cross-site";

    json pred;
    const int pick = std::uniform_int_distribution<int>(0, 9)(rng);
    if (pick == 0) {
      pred["point"] = nullptr;
    } else if (pick < 6) {
      const json& b = rec["acceptable_bboxes"][0];
      // Corners and edges of the first box, or its center.
      const int where = std::uniform_int_distribution<int>(0, 2)(rng);
      const double x = where == 0 ? b[0].get<double>() : where == 1 ? b[2].get<double>()
                                                                      : (b[0].get<double>() + b[2].get<double>()) / 2;
      pred["point"] = {x, b[1]};
    } else {
      pred["point"] = {grid(rng), grid(rng)};
    }
    const std::string pop = std::uniform_int_distribution<int>(0, 2)(rng)
                                ? op
                                : kOps[std::uniform_int_distribution<std::size_t>(0, 5)(rng)];
    pred["operation"] = std::uniform_int_distribution<int>(0, 4)(rng) ? pop : std::string("click");
    if (value.empty()) {
      pred["value"] = std::uniform_int_distribution<int>(0, 3)(rng) ? json(nullptr) : json(random_phrase(rng, 1, 2));
    } else {
      const std::string pv = perturb(rng, value);
      pred["value"] = pv.empty() ? json(nullptr) : json(pv);
    }
    out.push_back({{"record", rec}, {"pred", pred}});
  }
  return out;
}

std::vector<json> random_omni_records(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<json> out;
  for (int i = 0; i < n; ++i) {
    json rec;
    char id[16];
    std::snprintf(id, sizeof id, "o%04d", (i * 104729) % 10007);
    rec["id"] = id;
    const int len = std::uniform_int_distribution<int>(0, 5)(rng);
    json gt = json::array(), clicks = json::array(), values = json::array();
    for (int j = 0; j < len; ++j) {
      const std::string op = kOps[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
      gt.push_back(op);
      if (op != "HOTKEY") clicks.push_back({j, random_box(rng)});
      if (op == "TYPE" || op == "HOTKEY") values.push_back({j, random_phrase(rng, 1, 3)});
    }
    json pred = gt;
    if (len > 0 && std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
      pred[std::uniform_int_distribution<int>(0, len - 1)(rng)] = "SCROLL";
    } else if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) {
      pred.push_back("CLICK");
    }
    json pclicks = json::array(), pvalues = json::array();
    for (int j = 0; j < static_cast<int>(pred.size()); ++j) {
      if (std::uniform_int_distribution<int>(0, 5)(rng) > 0) {
        pclicks.push_back({j, {grid(rng), grid(rng)}});
      }
      for (const json& v : values) {
        if (v[0] == j && std::uniform_int_distribution<int>(0, 5)(rng) > 0) {
          pvalues.push_back({j, perturb(rng, v[1].get<std::string>())});
        }
      }
    }
    rec["gt_sequence"] = gt;
    rec["gt_clicks"] = clicks;
    rec["gt_values"] = values;
    rec["pred_sequence"] = pred;
    rec["pred_clicks"] = pclicks;
    rec["pred_values"] = pvalues;
    rec["split"] = i % 3 == 0 ? "web" : "desktop";
    out.push_back(rec);
  }
  return out;
}

}  // namespace fixtures
