#include <cstdio>
#include <fstream>

#include "roadocc/bench.hpp"
#include "roadocc/error.hpp"

namespace roadocc {
namespace fs = std::filesystem;

namespace {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::ofstream open(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

void emit_reports(const BenchmarkResult& result, const fs::path& outdir) {
  std::error_code ec;
  fs::create_directories(outdir / "roc", ec);
  if (ec) throw IoError("cannot create " + (outdir / "roc").string() + ": " + ec.message());
  const auto& grid = result.grid;

  {
    auto out = open(outdir / "auc_table.csv");
    out << "classifier";
    for (const auto& rep : grid.representations) out << ',' << csv_field(rep.name());
    out << '\n';
    for (std::size_t ci = 0; ci < grid.classifiers.size(); ++ci) {
      out << csv_field(grid.classifiers[ci].label());
      for (std::size_t ri = 0; ri < grid.representations.size(); ++ri) {
        const auto& cell = grid.at(ci, ri);
        out << ',';
        if (!cell.absent) out << fixed(cell.auc100(), 1);
      }
      out << '\n';
    }
  }
  {
    auto out = open(outdir / "summary.csv");
    out << "representation,classifier,auc100,eer,mean_image_auc100,images,failed_images,note\n";
    for (std::size_t ci = 0; ci < grid.classifiers.size(); ++ci) {
      for (std::size_t ri = 0; ri < grid.representations.size(); ++ri) {
        const auto& cell = grid.at(ci, ri);
        out << csv_field(grid.representations[ri].name()) << ',' << csv_field(grid.classifiers[ci].label()) << ',';
        if (cell.absent) {
          out << ",,,0," << cell.failed_images << ',' << csv_field("absent: " + cell.absent_reason) << '\n';
          continue;
        }
        out << fixed(cell.auc100(), 4) << ',' << fixed(cell.curve.eer, 6) << ','
            << fixed(cell.mean_image_auc100, 4) << ',' << cell.images << ',' << cell.failed_images << ",\n";
      }
    }
  }
  {
    auto out = open(outdir / "skipped.csv");
    out << "stem,reason\n";
    for (const auto& item : result.skipped) out << csv_field(item.stem) << ',' << csv_field(item.reason) << '\n';
  }
  for (std::size_t ci = 0; ci < grid.classifiers.size(); ++ci) {
    for (std::size_t ri = 0; ri < grid.representations.size(); ++ri) {
      const auto& cell = grid.at(ci, ri);
      if (cell.absent) continue;
      auto out = open(outdir / "roc" / (grid.representations[ri].name() + "_" + grid.classifiers[ci].label() + ".csv"));
      write_roc_csv(out, cell.curve);
    }
  }
}

}  // namespace roadocc
