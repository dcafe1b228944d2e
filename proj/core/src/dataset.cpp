#include "roadocc/dataset.hpp"

#include <algorithm>
#include <map>

#include "roadocc/error.hpp"

namespace roadocc {
namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

DatasetListing list_dataset(const fs::path& root) {
  const fs::path images = root / "images";
  const fs::path annotations = root / "annotations";
  if (!fs::is_directory(images)) throw IoError("missing directory " + images.string());
  if (!fs::is_directory(annotations)) throw IoError("missing directory " + annotations.string());

  std::map<std::string, fs::path> image_by_stem;
  DatasetListing listing;
  for (const auto& entry : fs::directory_iterator(images)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = lower(entry.path().extension().string());
    if (ext != ".png" && ext != ".ppm") continue;
    const std::string stem = entry.path().stem().string();
    auto [it, inserted] = image_by_stem.emplace(stem, entry.path());
    if (!inserted) {
      // Prefer PNG when both containers exist.
      if (ext == ".png") it->second = entry.path();
      listing.unpaired.push_back(stem + ": several images share this stem, using " +
                                 it->second.filename().string());
    }
  }
  std::map<std::string, fs::path> xml_by_stem;
  for (const auto& entry : fs::directory_iterator(annotations)) {
    if (!entry.is_regular_file() || lower(entry.path().extension().string()) != ".xml") continue;
    xml_by_stem.emplace(entry.path().stem().string(), entry.path());
  }
  for (const auto& [stem, image] : image_by_stem) {
    const auto it = xml_by_stem.find(stem);
    if (it == xml_by_stem.end()) {
      listing.unpaired.push_back(stem + ": no annotation");
      continue;
    }
    listing.items.push_back({stem, image, it->second});
  }
  for (const auto& [stem, xml] : xml_by_stem) {
    if (!image_by_stem.contains(stem)) listing.unpaired.push_back(stem + ": no image");
  }
  std::sort(listing.unpaired.begin(), listing.unpaired.end());
  return listing;
}

}  // namespace roadocc
