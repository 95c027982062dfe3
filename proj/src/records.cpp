#include "guiagent/records.hpp"

#include <fstream>

#include "guiagent/raster.hpp"
#include "guiagent/util.hpp"

namespace guiagent {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw RecordError("bbox must be [x0, y0, x1, y1]");
  Box b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!b.well_formed()) throw RecordError("bbox is not well-formed");
  return b;
}

json box_to_json(const Box& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

OpKind op_from_json(const json& j) {
  const auto op = parse_op(j.get<std::string>());
  if (!op) throw RecordError("unknown operation '" + j.get<std::string>() + "'");
  return *op;
}

std::vector<OpKind> ops_from_json(const json& j) {
  std::vector<OpKind> out;
  for (const auto& o : j) out.push_back(op_from_json(o));
  return out;
}

json ops_to_json(const std::vector<OpKind>& ops) {
  json out = json::array();
  for (OpKind op : ops) out.push_back(op_name(op));
  return out;
}

std::vector<std::pair<int, std::string>> indexed_strings(const json& j, std::size_t len) {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& e : j) {
    const int i = e.at(0).get<int>();
    if (i < 0 || static_cast<std::size_t>(i) >= len) throw RecordError("index out of sequence bounds");
    out.emplace_back(i, e.at(1).get<std::string>());
  }
  return out;
}

template <typename T, typename F>
std::vector<T> load_with(const fs::path& path, F convert) {
  std::vector<T> out;
  std::size_t line = 0;
  for (const json& j : read_jsonl(path)) {
    ++line;
    try {
      out.push_back(convert(j));
    } catch (const std::exception& e) {
      throw RecordError(path.string() + ": record " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

std::string resolve(const fs::path& base, const std::string& image) {
  const fs::path p(image);
  return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

}  // namespace

GroundingRecord grounding_record_from_json(const json& j) {
  GroundingRecord r;
  r.id = j.at("id").get<std::string>();
  r.image = j.at("image").get<std::string>();
  r.description = j.at("description").get<std::string>();
  r.bbox = box_from_json(j.at("bbox"));
  const std::string cat = j.at("category").get<std::string>();
  if (cat == "TEXT") {
    r.category = Category::Text;
  } else if (cat == "ICON_WIDGET") {
    r.category = Category::IconWidget;
  } else {
    throw RecordError("unknown category '" + cat + "'");
  }
  const std::string plat = j.at("platform").get<std::string>();
  if (plat == "MOBILE") {
    r.platform = Platform::Mobile;
  } else if (plat == "DESKTOP") {
    r.platform = Platform::Desktop;
  } else if (plat == "WEB") {
    r.platform = Platform::Web;
  } else {
    throw RecordError("unknown platform '" + plat + "'");
  }
  return r;
}

json grounding_record_to_json(const GroundingRecord& r) {
  return {{"id", r.id},
          {"image", r.image},
          {"description", r.description},
          {"bbox", box_to_json(r.bbox)},
          {"category", category_name(r.category)},
          {"platform", platform_name(r.platform)}};
}

OfflineStepRecord offline_record_from_json(const json& j) {
  OfflineStepRecord r;
  r.id = j.at("id").get<std::string>();
  r.image = j.at("image").get<std::string>();
  for (const auto& b : j.at("acceptable_bboxes")) r.acceptable_bboxes.push_back(box_from_json(b));
  if (r.acceptable_bboxes.empty()) throw RecordError("at least one acceptable bbox is required");
  r.gt_operation = op_from_json(j.at("gt_operation"));
  if (auto it = j.find("gt_value"); it != j.end() && !it->is_null()) r.gt_value = it->get<std::string>();
  r.trajectory_id = j.value("trajectory_id", r.id);
  r.step_index = j.value("step_index", 0);
  r.task = j.value("task", std::string());
  r.gt_description = j.value("gt_description", std::string());
  r.split = j.value("split", std::string());
  return r;
}

json offline_record_to_json(const OfflineStepRecord& r) {
  json boxes = json::array();
  for (const auto& b : r.acceptable_bboxes) boxes.push_back(box_to_json(b));
  json j = {{"id", r.id},
            {"image", r.image},
            {"acceptable_bboxes", boxes},
            {"gt_operation", op_name(r.gt_operation)},
            {"trajectory_id", r.trajectory_id},
            {"step_index", r.step_index},
            {"task", r.task},
            {"gt_description", r.gt_description},
            {"split", r.split}};
  j["gt_value"] = r.gt_value ? json(*r.gt_value) : json(nullptr);
  return j;
}

OmniRecord omni_record_from_json(const json& j) {
  OmniRecord r;
  r.id = j.at("id").get<std::string>();
  r.gt_sequence = ops_from_json(j.at("gt_sequence"));
  r.pred_sequence = ops_from_json(j.at("pred_sequence"));
  for (const auto& e : j.at("gt_clicks")) {
    const int i = e.at(0).get<int>();
    if (i < 0 || static_cast<std::size_t>(i) >= r.gt_sequence.size()) {
      throw RecordError("gt_clicks index out of sequence bounds");
    }
    r.gt_clicks.emplace_back(i, box_from_json(e.at(1)));
  }
  r.gt_values = indexed_strings(j.at("gt_values"), r.gt_sequence.size());
  for (const auto& e : j.value("pred_clicks", json::array())) {
    const int i = e.at(0).get<int>();
    if (i < 0 || static_cast<std::size_t>(i) >= r.pred_sequence.size()) {
      throw RecordError("pred_clicks index out of sequence bounds");
    }
    const json& p = e.at(1);
    r.pred_clicks.emplace_back(i, NormalizedPoint::clamped(p.at(0).get<double>(), p.at(1).get<double>()));
  }
  r.pred_values = indexed_strings(j.value("pred_values", json::array()), r.pred_sequence.size());
  r.split = j.value("split", std::string());
  return r;
}

json omni_record_to_json(const OmniRecord& r) {
  json gt_clicks = json::array();
  for (const auto& [i, b] : r.gt_clicks) gt_clicks.push_back({i, box_to_json(b)});
  json pred_clicks = json::array();
  for (const auto& [i, p] : r.pred_clicks) pred_clicks.push_back({i, {p.x, p.y}});
  json gt_values = json::array();
  for (const auto& [i, v] : r.gt_values) gt_values.push_back({i, v});
  json pred_values = json::array();
  for (const auto& [i, v] : r.pred_values) pred_values.push_back({i, v});
  return {{"id", r.id},
          {"gt_sequence", ops_to_json(r.gt_sequence)},
          {"gt_clicks", gt_clicks},
          {"gt_values", gt_values},
          {"pred_sequence", ops_to_json(r.pred_sequence)},
          {"pred_clicks", pred_clicks},
          {"pred_values", pred_values},
          {"split", r.split}};
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw RecordError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!out.back().is_object()) {
      throw RecordError(path.string() + ":" + std::to_string(lineno) + ": expected an object");
    }
  }
  return out;
}

std::vector<GroundingRecord> load_grounding_records(const fs::path& path) {
  const fs::path base = path.parent_path();
  return load_with<GroundingRecord>(path, [&](const json& j) {
    GroundingRecord r = grounding_record_from_json(j);
    r.image = resolve(base, r.image);
    return r;
  });
}

std::vector<OfflineStepRecord> load_offline_records(const fs::path& path) {
  const fs::path base = path.parent_path();
  return load_with<OfflineStepRecord>(path, [&](const json& j) {
    OfflineStepRecord r = offline_record_from_json(j);
    r.image = resolve(base, r.image);
    return r;
  });
}

std::vector<OmniRecord> load_omni_records(const fs::path& path) {
  return load_with<OmniRecord>(path, omni_record_from_json);
}

fs::path screen_sidecar_path(const fs::path& image) {
  fs::path p = image;
  p.replace_extension(".screen.json");
  return p;
}

sim::Observation load_observation(const fs::path& image) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_binary_file(image);
  } catch (const std::exception& e) {
    throw ImageError(e.what());
  }
  const Image decoded = decode_png(bytes);
  sim::Observation obs{std::move(bytes), decoded.dims(), nullptr};
  const fs::path sidecar = screen_sidecar_path(image);
  if (fs::exists(sidecar)) {
    try {
      obs.screen_model = std::make_shared<const sim::ScreenModel>(
          sim::parse_screen(json::parse(read_text_file(sidecar))));
    } catch (const json::exception& e) {
      throw sim::SpecError(sidecar.string(), e.what());
    }
  }
  return obs;
}

}  // namespace guiagent
