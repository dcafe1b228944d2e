#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {
namespace detail {
namespace {

std::string hex(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

std::istringstream record(std::istream& is, std::string_view key) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("model record ended before '" + std::string(key) + "'", 0);
  std::istringstream fields(line);
  std::string found;
  fields >> found;
  if (found != key) {
    throw ParseError("expected model field '" + std::string(key) + "', found '" + found + "'", 0);
  }
  return fields;
}

double parse_double(const std::string& token, std::string_view key) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size()) {
    throw ParseError("bad number in model field '" + std::string(key) + "'", 0);
  }
  return value;
}

std::uint64_t parse_uint(const std::string& token, std::string_view key) {
  char* end = nullptr;
  const auto value = std::strtoull(token.c_str(), &end, 10);
  if (token.empty() || token[0] == '-' || end != token.c_str() + token.size()) {
    throw ParseError("bad integer in model field '" + std::string(key) + "'", 0);
  }
  return value;
}

std::string next(std::istringstream& fields, std::string_view key) {
  std::string token;
  if (!(fields >> token)) throw ParseError("model field '" + std::string(key) + "' is truncated", 0);
  return token;
}

}  // namespace

void put(std::ostream& os, std::string_view key, double value) {
  os << key << ' ' << hex(value) << '\n';
}

void put(std::ostream& os, std::string_view key, std::uint64_t value) {
  os << key << ' ' << value << '\n';
}

void put(std::ostream& os, std::string_view key, const std::vector<double>& values) {
  os << key << ' ' << values.size();
  for (double v : values) os << ' ' << hex(v);
  os << '\n';
}

void put(std::ostream& os, std::string_view key, const std::vector<std::uint64_t>& values) {
  os << key << ' ' << values.size();
  for (auto v : values) os << ' ' << v;
  os << '\n';
}

double get_double(std::istream& is, std::string_view key) {
  auto fields = record(is, key);
  return parse_double(next(fields, key), key);
}

std::uint64_t get_uint(std::istream& is, std::string_view key) {
  auto fields = record(is, key);
  return parse_uint(next(fields, key), key);
}

std::vector<double> get_doubles(std::istream& is, std::string_view key) {
  auto fields = record(is, key);
  const auto count = parse_uint(next(fields, key), key);
  std::vector<double> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(parse_double(next(fields, key), key));
  return out;
}

std::vector<std::uint64_t> get_uints(std::istream& is, std::string_view key) {
  auto fields = record(is, key);
  const auto count = parse_uint(next(fields, key), key);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(parse_uint(next(fields, key), key));
  return out;
}

}  // namespace detail

namespace {
constexpr std::string_view kHeader = "roadocc-model 1";
}

void save_model(std::ostream& os, const OneClassModel& model) {
  os << kHeader << '\n' << "kind " << kind_name(model.kind()) << '\n';
  model.write(os);
  if (!os) throw IoError("failed to write model");
}

std::unique_ptr<OneClassModel> load_model(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader) throw ParseError("not a roadocc model file", 1);
  if (!std::getline(is, line) || !line.starts_with("kind ")) throw ParseError("model kind missing", 2);
  const std::string name = line.substr(5);
  if (name == "Mb") return std::make_unique<HistogramModel>(HistogramModel::read(is));
  if (name == "NN") return std::make_unique<NearestNeighborModel>(NearestNeighborModel::read(is));
  if (name == "G") return std::make_unique<GaussianModel>(GaussianModel::read(is, ClassifierKind::G));
  if (name == "RG") return std::make_unique<GaussianModel>(GaussianModel::read(is, ClassifierKind::RG));
  if (name == "MoG") return std::make_unique<MixtureModel>(MixtureModel::read(is));
  if (name == "km") return std::make_unique<CenterModel>(CenterModel::read(is, ClassifierKind::km));
  if (name == "kc") return std::make_unique<CenterModel>(CenterModel::read(is, ClassifierKind::kc));
  if (name == "PCA") return std::make_unique<PcaModel>(PcaModel::read(is));
  if (name == "dLP") return std::make_unique<DistanceLpModel>(DistanceLpModel::read(is));
  if (name == "SVD") return std::make_unique<SvddModel>(SvddModel::read(is));
  if (name == "MPM") return std::make_unique<MinimaxModel>(MinimaxModel::read(is));
  if (name == "MST") return std::make_unique<SpanningTreeModel>(SpanningTreeModel::read(is));
  throw ParseError("unknown model kind '" + name + "'", 2);
}

}  // namespace roadocc
