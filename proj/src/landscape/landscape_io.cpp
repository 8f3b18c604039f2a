// Copyright 2026 The ttscape Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ttscape/binary_io.h"
#include "ttscape/error.h"
#include "ttscape/landscape.h"
#include "ttscape/tt_io.h"

namespace ttscape {
namespace {

constexpr char kDenseMagic[4] = {'T', 'T', 'S', 'D'};
constexpr std::uint32_t kDenseVersion = 1;
constexpr std::uint64_t kMaxOrder = 4096;

std::filesystem::path grid_sidecar(const std::filesystem::path& tt_path) {
  return tt_path.string() + ".grid.json";
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double parse_double(std::string_view text, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError(fmt::format("line {}: bad number '{}'", line_no, text));
  }
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) {
      f.remove_suffix(1);
    }
    out.push_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string grid_to_json(const Grid& grid) {
  nlohmann::json j;
  j["centers"] = nlohmann::json::array();
  j["ranges"] = nlohmann::json::array();
  j["resolutions"] = nlohmann::json::array();
  for (const GridAxis& a : grid.axes()) {
    j["centers"].push_back(a.center);
    j["ranges"].push_back(a.range);
    j["resolutions"].push_back(a.resolution);
  }
  return j.dump(2);
}

Grid grid_from_json(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const auto centers = j.at("centers").get<std::vector<double>>();
    const auto ranges = j.at("ranges").get<std::vector<double>>();
    const auto res = j.at("resolutions").get<std::vector<std::size_t>>();
    if (centers.size() != ranges.size() || centers.size() != res.size()) {
      throw InputError("grid JSON: centers, ranges and resolutions differ in length");
    }
    std::vector<GridAxis> axes;
    for (std::size_t k = 0; k < centers.size(); ++k) axes.push_back({centers[k], ranges[k], res[k]});
    return Grid(std::move(axes));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("grid JSON: {}", e.what()));
  }
}

void write_landscape_csv(const std::filesystem::path& path, const Landscape& landscape) {
  const DenseTensor values = landscape.to_dense();
  const Grid& grid = landscape.grid();
  const Shape shape = grid.shape();
  const std::size_t d = shape.size();
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  std::string line;
  for (std::size_t k = 0; k < d; ++k) line += fmt::format("i{},", k + 1);
  for (std::size_t k = 0; k < d; ++k) line += fmt::format("theta{},", k + 1);
  out << line << "value\n";
  for (std::size_t f = 0; f < values.size(); ++f) {
    const MultiIndex idx = unflatten(shape, f);
    line.clear();
    for (std::size_t k = 0; k < d; ++k) line += fmt::format("{},", idx[k]);
    for (std::size_t k = 0; k < d; ++k) line += fmt::format("{:.17g},", grid.coordinate(k, idx[k]));
    out << line << fmt::format("{:.17g}\n", values[f]);
  }
  if (!out) throw InputError(fmt::format("error writing {}", path.string()));
}

Landscape read_landscape_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw InputError(fmt::format("{}: empty file", path.string()));
  const auto header = split_fields(line);
  if (header.size() < 3 || header.size() % 2 == 0) {
    throw InputError(fmt::format("{}: header must be i1..id,theta1..thetad,value", path.string()));
  }
  const std::size_t d = (header.size() - 1) / 2;
  for (std::size_t k = 0; k < d; ++k) {
    if (header[k] != fmt::format("i{}", k + 1) ||
        header[d + k] != fmt::format("theta{}", k + 1)) {
      throw InputError(fmt::format("{}: header must be i1..id,theta1..thetad,value",
                                   path.string()));
    }
  }
  if (header[2 * d] != "value") {
    throw InputError(fmt::format("{}: last column must be value", path.string()));
  }

  struct Row {
    MultiIndex idx;
    std::vector<double> theta;
    double value;
  };
  std::vector<Row> rows;
  Shape shape(d, 0);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_fields(line);
    if (f.size() != 2 * d + 1) {
      throw InputError(fmt::format("{} line {}: expected {} fields", path.string(), line_no,
                                   2 * d + 1));
    }
    Row r{MultiIndex(d), std::vector<double>(d), 0.0};
    for (std::size_t k = 0; k < d; ++k) {
      const double i = parse_double(f[k], line_no);
      if (i < 0 || i != std::floor(i)) {
        throw InputError(fmt::format("{} line {}: bad index", path.string(), line_no));
      }
      r.idx[k] = static_cast<std::size_t>(i);
      r.theta[k] = parse_double(f[d + k], line_no);
      shape[k] = std::max(shape[k], r.idx[k] + 1);
    }
    r.value = parse_double(f[2 * d], line_no);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw InputError(fmt::format("{}: no data rows", path.string()));
  for (std::size_t k = 0; k < d; ++k) {
    if (shape[k] < 2) throw InputError(fmt::format("{}: axis {} has a single point", path.string(), k + 1));
  }
  const std::size_t total = shape_size(shape);
  if (rows.size() != total) {
    throw InputError(fmt::format("{}: {} rows but the grid has {} points", path.string(),
                                 rows.size(), total));
  }
  std::vector<double> lo(d, NAN), hi(d, NAN);
  std::vector<double> values(total, NAN);
  std::vector<char> seen(total, 0);
  for (const Row& r : rows) {
    const std::size_t f = flat_offset(shape, r.idx);
    if (seen[f]) throw InputError(fmt::format("{}: duplicate grid point", path.string()));
    seen[f] = 1;
    values[f] = r.value;
    for (std::size_t k = 0; k < d; ++k) {
      if (r.idx[k] == 0) lo[k] = r.theta[k];
      if (r.idx[k] + 1 == shape[k]) hi[k] = r.theta[k];
    }
  }
  std::vector<GridAxis> axes;
  for (std::size_t k = 0; k < d; ++k) {
    axes.push_back({(lo[k] + hi[k]) / 2, hi[k] - lo[k], shape[k]});
  }
  return Landscape(Grid(std::move(axes)), DenseTensor(shape, std::move(values)));
}

void write_landscape_dense(const std::filesystem::path& path, const Landscape& landscape) {
  const DenseTensor values = landscape.to_dense();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  out.write(kDenseMagic, 4);
  binio::write_u32(out, kDenseVersion);
  binio::write_u64(out, landscape.grid().order());
  for (const GridAxis& a : landscape.grid().axes()) {
    binio::write_u64(out, a.resolution);
    binio::write_f64(out, a.center);
    binio::write_f64(out, a.range);
  }
  for (double v : values.values()) binio::write_f64(out, v);
  if (!out) throw InputError(fmt::format("error writing {}", path.string()));
}

Landscape read_landscape_dense(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != std::string_view(kDenseMagic, 4)) {
    throw InputError(fmt::format("{}: not a dense landscape file", path.string()));
  }
  const std::uint32_t version = binio::read_u32(in);
  if (version != kDenseVersion) {
    throw InputError(fmt::format("{}: unsupported version {}", path.string(), version));
  }
  const std::uint64_t d = binio::read_u64(in);
  if (d == 0 || d > kMaxOrder) throw InputError(fmt::format("{}: bad order {}", path.string(), d));
  std::vector<GridAxis> axes;
  for (std::uint64_t k = 0; k < d; ++k) {
    GridAxis a;
    a.resolution = binio::read_u64(in);
    a.center = binio::read_f64(in);
    a.range = binio::read_f64(in);
    axes.push_back(a);
  }
  Grid grid(std::move(axes));
  const Shape shape = grid.shape();
  const std::size_t total = shape_size(shape);
  if (total >= kDefaultDenseCap) {
    throw InputError(fmt::format("{}: {} entries exceed the dense cap", path.string(), total));
  }
  std::vector<double> values(total);
  for (double& v : values) v = binio::read_f64(in);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw InputError(fmt::format("{}: trailing bytes", path.string()));
  }
  return Landscape(std::move(grid), DenseTensor(shape, std::move(values)));
}

void save_landscape(const std::filesystem::path& path, const Landscape& landscape) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return write_landscape_csv(path, landscape);
  if (ext == ".bin") return write_landscape_dense(path, landscape);
  if (ext == ".tt") {
    const TensorTrain tt =
        landscape.is_dense() ? tt_from_dense(landscape.dense(), 0.0) : landscape.tt();
    save_tensor_train(path, tt);
    std::ofstream out(grid_sidecar(path));
    out << grid_to_json(landscape.grid()) << '\n';
    if (!out) throw InputError(fmt::format("error writing {}", grid_sidecar(path).string()));
    return;
  }
  throw InputError(fmt::format("{}: unknown landscape extension (use .csv, .bin or .tt)",
                               path.string()));
}

Landscape load_landscape(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return read_landscape_csv(path);
  if (ext == ".bin") return read_landscape_dense(path);
  if (ext == ".tt") {
    TensorTrain tt = load_tensor_train(path);
    return Landscape(grid_from_json(read_text(grid_sidecar(path))), std::move(tt));
  }
  throw InputError(fmt::format("{}: unknown landscape extension (use .csv, .bin or .tt)",
                               path.string()));
}

}  // namespace ttscape
