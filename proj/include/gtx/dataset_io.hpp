#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gtx/dataset.hpp"

namespace gtx {

inline constexpr std::string_view kGeneratorVersion = "0.1.0";

class DatasetFormatError : public std::runtime_error {
 public:
  DatasetFormatError(const std::string& message, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// CSV with header `label,string,explanation`. The explanation column holds the
// masked string (`POS,11000000,..000000`) and is empty for NEG rows.
std::string FormatDatasetCsv(const Dataset& d);

// Parses the CSV form. Alphabet and string length are inferred from the rows;
// provenance and threshold are left empty (see ApplyMetadata).
Dataset ParseDatasetCsv(std::string_view text);

// SHA-256 of the CSV serialization; identifies a dataset in attribution files.
std::string DatasetHash(const Dataset& d);

// Sidecar JSON: grammar hash, length, threshold, seed, alphabet, version.
std::string FormatMetadataJson(const Dataset& d);
// Copies alphabet, threshold and provenance from sidecar JSON into `d`.
void ApplyMetadata(std::string_view json_text, Dataset& d);

// `data/x.csv` -> `data/x.meta.json`.
std::filesystem::path MetadataPath(const std::filesystem::path& csv_path);

// Writes the CSV and its sidecar.
void SaveDataset(const Dataset& d, const std::filesystem::path& csv_path);
// Reads the CSV and, when present, its sidecar.
Dataset LoadDataset(const std::filesystem::path& csv_path);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace gtx
