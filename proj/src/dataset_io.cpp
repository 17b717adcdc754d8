#include "gtx/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gtx/hash.hpp"
#include "json.hpp"

namespace gtx {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

DatasetFormatError::DatasetFormatError(const std::string& message, std::size_t line)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::string FormatDatasetCsv(const Dataset& d) {
  std::string out = "label,string,explanation\n";
  for (const LabeledInstance& x : d.instances) {
    out += LabelName(x.label);
    out += ',';
    out += x.string;
    out += ',';
    out += x.MaskedExplanation();
    out += '\n';
  }
  return out;
}

Dataset ParseDatasetCsv(std::string_view text) {
  Dataset d;
  std::set<char> symbols;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != "label,string,explanation") {
        throw DatasetFormatError("expected header 'label,string,explanation'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    if (fields.size() != 3) {
      throw DatasetFormatError("expected 3 fields, got " + std::to_string(fields.size()),
                               line_no);
    }
    LabeledInstance x;
    try {
      x.label = ParseLabel(fields[0]);
    } catch (const std::invalid_argument& e) {
      throw DatasetFormatError(e.what(), line_no);
    }
    x.string = std::string(fields[1]);
    if (x.string.empty()) throw DatasetFormatError("empty string", line_no);
    if (d.instances.empty()) {
      d.string_length = x.string.size();
    } else if (x.string.size() != d.string_length) {
      throw DatasetFormatError("string length differs from earlier rows", line_no);
    }
    for (char c : x.string) {
      if (c == kMaskGlyph) throw DatasetFormatError("'.' inside a string", line_no);
      symbols.insert(c);
    }
    const std::string_view masked = fields[2];
    if (x.label == Label::kNeg && !masked.empty()) {
      throw DatasetFormatError("NEG row carries an explanation", line_no);
    }
    if (x.label == Label::kPos) {
      if (masked.size() != x.string.size()) {
        throw DatasetFormatError("explanation length does not match the string", line_no);
      }
      for (std::size_t i = 0; i < masked.size(); ++i) {
        if (masked[i] != kMaskGlyph && masked[i] != x.string[i]) {
          throw DatasetFormatError("explanation disagrees with the string at position " +
                                       std::to_string(i),
                                   line_no);
        }
      }
      x.explanation = ExplanationMask::FromMaskedString(masked);
      if (x.explanation.empty()) {
        throw DatasetFormatError("POS row has an empty explanation", line_no);
      }
    } else {
      x.explanation = ExplanationMask(x.string.size(), {});
    }
    d.instances.push_back(std::move(x));
  }
  if (!header_seen) throw DatasetFormatError("missing header");
  d.alphabet = std::string(symbols.begin(), symbols.end());
  return d;
}

std::string DatasetHash(const Dataset& d) { return Sha256Hex(FormatDatasetCsv(d)); }

std::string FormatMetadataJson(const Dataset& d) {
  nlohmann::ordered_json j;
  j["generator"] = "gtx";
  j["generator_version"] = kGeneratorVersion;
  j["grammar_sha256"] = d.provenance.grammar_hash;
  j["seed"] = d.provenance.seed;
  j["string_length"] = d.string_length;
  j["pos_threshold"] = d.pos_threshold;
  j["alphabet"] = d.alphabet;
  j["num_instances"] = d.instances.size();
  j["num_pos"] = d.num_pos();
  j["dataset_sha256"] = DatasetHash(d);
  return j.dump(2) + "\n";
}

void ApplyMetadata(std::string_view json_text, Dataset& d) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
    const std::string alphabet = j.at("alphabet").get<std::string>();
    for (char c : d.alphabet) {
      if (alphabet.find(c) == std::string::npos) {
        throw DatasetFormatError(std::string("symbol '") + c +
                                 "' is not in the metadata alphabet");
      }
    }
    if (!d.instances.empty() && j.at("string_length").get<std::size_t>() != d.string_length) {
      throw DatasetFormatError("metadata string length disagrees with the rows");
    }
    d.alphabet = alphabet;
    std::sort(d.alphabet.begin(), d.alphabet.end());
    d.pos_threshold = j.at("pos_threshold").get<std::uint32_t>();
    d.provenance.grammar_hash = j.at("grammar_sha256").get<std::string>();
    d.provenance.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DatasetFormatError(std::string("bad metadata: ") + e.what());
  }
}

std::filesystem::path MetadataPath(const std::filesystem::path& csv_path) {
  std::filesystem::path out = csv_path;
  if (out.extension() == ".csv") out.replace_extension();
  out += ".meta.json";
  return out;
}

void SaveDataset(const Dataset& d, const std::filesystem::path& csv_path) {
  WriteFile(csv_path, FormatDatasetCsv(d));
  WriteFile(MetadataPath(csv_path), FormatMetadataJson(d));
}

Dataset LoadDataset(const std::filesystem::path& csv_path) {
  Dataset d = ParseDatasetCsv(ReadFile(csv_path));
  const auto meta = MetadataPath(csv_path);
  if (std::filesystem::exists(meta)) ApplyMetadata(ReadFile(meta), d);
  return d;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace gtx
