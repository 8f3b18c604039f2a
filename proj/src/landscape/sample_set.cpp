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


#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "ttscape/error.h"
#include "ttscape/grid.h"

namespace ttscape {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no, std::string_view what) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw InputError(fmt::format("line {}: bad {} '{}'", line_no, what, text));
  }
  return v;
}

}  // namespace

SampleSet::SampleSet(Shape shape, std::vector<MultiIndex> indices,
                     std::vector<double> values, std::vector<SplitLabel> labels)
    : shape_(std::move(shape)), values_(std::move(values)), labels_(std::move(labels)) {
  if (shape_.empty()) throw InputError("sample set needs a non-empty shape");
  if (indices.size() != values_.size()) {
    throw InputError(fmt::format("{} indices but {} values", indices.size(), values_.size()));
  }
  if (!labels_.empty() && labels_.size() != values_.size()) {
    throw InputError(fmt::format("{} split labels for {} samples", labels_.size(),
                                 values_.size()));
  }
  const std::size_t d = shape_.size();
  indices_.reserve(indices.size() * d);
  std::unordered_set<std::size_t> seen;
  seen.reserve(indices.size());
  for (std::size_t s = 0; s < indices.size(); ++s) {
    if (!std::isfinite(values_[s])) {
      throw InputError(fmt::format("sample {} has a non-finite value", s));
    }
    // flat_offset checks arity and bounds.
    if (!seen.insert(flat_offset(shape_, indices[s])).second) {
      throw InputError(fmt::format("sample {} repeats an earlier multi-index", s));
    }
    indices_.insert(indices_.end(), indices[s].begin(), indices[s].end());
  }
}

bool SampleSet::has_labels() const {
  return std::any_of(labels_.begin(), labels_.end(),
                     [](SplitLabel l) { return l != SplitLabel::kNone; });
}

SampleSet SampleSet::subset(std::span<const std::size_t> rows) const {
  std::vector<MultiIndex> idx;
  std::vector<double> vals;
  idx.reserve(rows.size());
  vals.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= size()) throw InputError(fmt::format("sample row {} out of range", r));
    const auto i = index(r);
    idx.emplace_back(i.begin(), i.end());
    vals.push_back(values_[r]);
  }
  return SampleSet(shape_, std::move(idx), std::move(vals));
}

void write_samples_csv(const std::string& path, const SampleSet& samples) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write {}", path));
  const std::size_t d = samples.order();
  const bool labelled = samples.has_labels();
  for (std::size_t k = 0; k < d; ++k) out << 'i' << (k + 1) << ',';
  out << "value" << (labelled ? ",split" : "") << '\n';
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t k = 0; k < d; ++k) out << samples.index(s, k) << ',';
    out << fmt::format("{:.17g}", samples.value(s));
    if (labelled) {
      const SplitLabel l = samples.label(s);
      out << ',' << (l == SplitLabel::kValidation ? "val" : l == SplitLabel::kTrain ? "train" : "");
    }
    out << '\n';
  }
  if (!out) throw InputError(fmt::format("error writing {}", path));
}

SampleSet read_samples_csv(const std::string& path, const Shape& shape) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open sample file {}", path));
  const std::size_t d = shape.size();
  std::string line;
  if (!std::getline(in, line)) throw InputError(fmt::format("{}: missing header", path));
  const std::vector<std::string> header = split_csv_line(line);
  bool has_split = false;
  if (header.size() == d + 2 && header[d + 1] == "split") {
    has_split = true;
  } else if (header.size() != d + 1) {
    throw InputError(fmt::format("{}: expected {} index columns, value[, split]", path, d));
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (header[k] != fmt::format("i{}", k + 1)) {
      throw InputError(fmt::format("{}: header column {} should be i{}", path, k + 1, k + 1));
    }
  }
  if (header[d] != "value") throw InputError(fmt::format("{}: missing value column", path));

  std::vector<MultiIndex> indices;
  std::vector<double> values;
  std::vector<SplitLabel> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw InputError(fmt::format("{} line {}: expected {} fields, got {}", path, line_no,
                                   header.size(), f.size()));
    }
    MultiIndex idx(d);
    for (std::size_t k = 0; k < d; ++k) idx[k] = parse_number<std::size_t>(f[k], line_no, "index");
    indices.push_back(std::move(idx));
    values.push_back(parse_number<double>(f[d], line_no, "value"));
    if (has_split) {
      const std::string& s = f[d + 1];
      if (s == "train") {
        labels.push_back(SplitLabel::kTrain);
      } else if (s == "val") {
        labels.push_back(SplitLabel::kValidation);
      } else if (s.empty()) {
        labels.push_back(SplitLabel::kNone);
      } else {
        throw InputError(fmt::format("{} line {}: split must be train or val", path, line_no));
      }
    }
  }
  return SampleSet(shape, std::move(indices), std::move(values), std::move(labels));
}

}  // namespace ttscape
