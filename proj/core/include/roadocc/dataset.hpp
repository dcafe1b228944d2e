#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace roadocc {

/// An image paired with its annotation by file stem.
struct DatasetItem {
  std::string stem;
  std::filesystem::path image;
  std::filesystem::path annotation;
};

struct DatasetListing {
  std::vector<DatasetItem> items;  // sorted by stem
  /// Stems without a partner file, with the reason.
  std::vector<std::string> unpaired;
};

/// Scans root/images/<stem>.(png|ppm) and root/annotations/<stem>.xml.
/// Throws IoError when either directory is missing.
DatasetListing list_dataset(const std::filesystem::path& root);

}  // namespace roadocc
