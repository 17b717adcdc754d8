#include "gtx/attribution.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"

namespace gtx {
namespace {

template <typename T>
T ParseNumber(std::string_view text, std::size_t line) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw AttributionFormatError("line " + std::to_string(line) + ": bad number '" +
                                 std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string FormatAttributionJson(const AttributionFile& file) {
  nlohmann::ordered_json j;
  j["dataset_sha256"] = file.dataset_sha256;
  j["explainer"] = file.explainer;
  j["model"] = file.model;
  j["instances"] = nlohmann::ordered_json::array();
  for (const AttributionVector& a : file.instances) {
    nlohmann::ordered_json row;
    row["index"] = a.index;
    row["predicted_label"] = LabelName(a.predicted_label);
    row["scores"] = a.scores;
    j["instances"].push_back(std::move(row));
  }
  return j.dump(1) + "\n";
}

AttributionFile ParseAttributionJson(std::string_view text) {
  AttributionFile file;
  try {
    const auto j = nlohmann::json::parse(text);
    file.dataset_sha256 = j.at("dataset_sha256").get<std::string>();
    file.explainer = j.at("explainer").get<std::string>();
    file.model = j.value("model", std::string());
    std::set<std::size_t> seen;
    for (const auto& row : j.at("instances")) {
      AttributionVector a;
      const auto& index = row.at("index");
      if (!index.is_number_unsigned()) throw AttributionFormatError("index must be a non-negative integer");
      a.index = index.get<std::size_t>();
      a.predicted_label = ParseLabel(row.at("predicted_label").get<std::string>());
      a.scores = row.at("scores").get<std::vector<double>>();
      for (double s : a.scores) {
        if (!std::isfinite(s)) {
          throw AttributionFormatError("non-finite score for index " + std::to_string(a.index));
        }
      }
      if (!seen.insert(a.index).second) {
        throw AttributionFormatError("duplicate index " + std::to_string(a.index));
      }
      file.instances.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw AttributionFormatError(std::string("malformed attribution file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw AttributionFormatError(e.what());
  }
  return file;
}

std::string FormatPredictionsCsv(const std::vector<Prediction>& predictions) {
  std::string out = "index,predicted_label,score\n";
  char buffer[32];
  for (const Prediction& p : predictions) {
    std::snprintf(buffer, sizeof buffer, "%.17g", p.score);
    out += std::to_string(p.index);
    out += ',';
    out += LabelName(p.predicted_label);
    out += ',';
    out += buffer;
    out += '\n';
  }
  return out;
}

std::vector<Prediction> ParsePredictionsCsv(std::string_view text) {
  std::vector<Prediction> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != "index,predicted_label,score") {
        throw AttributionFormatError("expected header 'index,predicted_label,score'");
      }
      continue;
    }
    if (line.empty()) continue;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw AttributionFormatError("line " + std::to_string(line_no) + ": expected 3 fields");
    }
    Prediction p;
    p.index = ParseNumber<std::size_t>(line.substr(0, c1), line_no);
    try {
      p.predicted_label = ParseLabel(line.substr(c1 + 1, c2 - c1 - 1));
    } catch (const std::invalid_argument& e) {
      throw AttributionFormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    p.score = ParseNumber<double>(line.substr(c2 + 1), line_no);
    out.push_back(p);
  }
  if (line_no == 0) throw AttributionFormatError("empty predictions file");
  return out;
}

}  // namespace gtx
