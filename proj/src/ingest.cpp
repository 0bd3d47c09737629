#include "segexplain/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "segexplain/error.hpp"
#include "segexplain/stats.hpp"

namespace segexplain {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

std::string where(const IngestSpec& spec, std::size_t line) {
  return spec.path + ":" + std::to_string(line) + ": ";
}

/// Column layout of a dense CSV header.
struct DenseLayout {
  std::size_t width = 0;
  std::size_t prediction = 0;
  std::vector<std::size_t> feature_cols;  // header position of feature j
  std::vector<FeatureId> catalog;
};

DenseLayout read_dense_header(std::istream& in, const IngestSpec& spec) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(spec.path + ": empty file");
  auto header = split_csv_line(line);
  DenseLayout lay;
  lay.width = header.size();
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < header.size(); ++i) {
    header[i] = std::string(trim(header[i]));
    if (!pos.emplace(header[i], i).second) {
      throw DataError(where(spec, 1) + "duplicate column '" + header[i] + "'");
    }
  }
  auto p = pos.find(spec.prediction_column);
  if (p == pos.end()) {
    throw ConfigError("prediction column '" + spec.prediction_column + "' not in header of " +
                      spec.path);
  }
  lay.prediction = p->second;
  if (spec.feature_columns) {
    for (const auto& name : *spec.feature_columns) {
      auto f = pos.find(name);
      if (f == pos.end()) throw ConfigError("feature column '" + name + "' not in header");
      if (f->second == lay.prediction) {
        throw ConfigError("feature column '" + name + "' is the prediction column");
      }
      lay.feature_cols.push_back(f->second);
    }
  } else {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i != lay.prediction) lay.feature_cols.push_back(i);
    }
  }
  for (std::size_t j = 0; j < lay.feature_cols.size(); ++j) {
    lay.catalog.push_back({j, header[lay.feature_cols[j]]});
  }
  return lay;
}

/// Parses one dense data line. Returns false for a blank line.
bool parse_dense_row(const std::string& line, std::size_t line_no, const DenseLayout& lay,
                     const IngestSpec& spec, ScoredExample& ex) {
  if (trim(line).empty()) return false;
  auto cells = split_csv_line(line);
  if (cells.size() != lay.width) {
    throw DataError(where(spec, line_no) + "malformed row: expected " + std::to_string(lay.width) +
                    " fields, got " + std::to_string(cells.size()));
  }
  ex.values.clear();
  auto pred_cell = trim(cells[lay.prediction]);
  if (pred_cell == spec.missing_token || pred_cell.empty()) {
    throw DataError(where(spec, line_no) + "missing prediction value");
  }
  auto pred = parse_real(pred_cell);
  if (!pred) {
    throw DataError(where(spec, line_no) + "non-numeric prediction '" + std::string(pred_cell) + "'");
  }
  ex.prediction = *pred;
  for (std::size_t j = 0; j < lay.feature_cols.size(); ++j) {
    auto cell = trim(cells[lay.feature_cols[j]]);
    if (cell.empty() || cell == spec.missing_token) continue;
    auto v = parse_real(cell);
    if (!v) {
      throw DataError(where(spec, line_no) + "non-numeric value '" + std::string(cell) +
                      "' in feature column '" + lay.catalog[j].name + "'");
    }
    ex.values.emplace_back(j, *v);
  }
  return true;
}

Dataset load_dense(const IngestSpec& spec) {
  auto in = open(spec.path);
  auto lay = read_dense_header(in, spec);
  std::vector<double> predictions;
  std::vector<FeatureColumn> columns(lay.catalog.size());
  std::string line;
  ScoredExample ex;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (!parse_dense_row(line, line_no, lay, spec, ex)) continue;
    std::size_t row = predictions.size();
    predictions.push_back(ex.prediction);
    for (auto [j, v] : ex.values) {
      columns[j].rows.push_back(row);
      columns[j].values.push_back(v);
    }
  }
  if (predictions.empty()) throw DataError(spec.path + ": empty dataset");
  return Dataset(std::move(lay.catalog), std::move(predictions), std::move(columns));
}

Dataset load_triplets(const IngestSpec& spec) {
  auto in = open(spec.path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(spec.path + ": empty file");
  auto header = split_csv_line(line);
  for (auto& h : header) h = std::string(trim(h));
  if (header != std::vector<std::string>{"row", "feature", "value"}) {
    throw DataError(where(spec, 1) + "sparse-triplet header must be 'row,feature,value'");
  }

  struct Cell {
    std::uint64_t row;
    std::string feature;
    double value;
    std::size_t line;
  };
  std::vector<Cell> cells;
  std::set<std::uint64_t> row_ids;
  std::set<std::string> names;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 3) {
      throw DataError(where(spec, line_no) + "malformed row: expected 3 fields, got " +
                      std::to_string(f.size()));
    }
    auto row_text = trim(f[0]);
    std::uint64_t row = 0;
    auto rr = std::from_chars(row_text.data(), row_text.data() + row_text.size(), row);
    if (rr.ec != std::errc{} || rr.ptr != row_text.data() + row_text.size()) {
      throw DataError(where(spec, line_no) + "row id '" + std::string(row_text) +
                      "' is not a non-negative integer");
    }
    std::string feature(trim(f[1]));
    if (feature.empty()) throw DataError(where(spec, line_no) + "empty feature name");
    row_ids.insert(row);
    auto cell = trim(f[2]);
    bool is_pred = feature == spec.prediction_column;
    if (cell.empty() || cell == spec.missing_token) {
      if (is_pred) throw DataError(where(spec, line_no) + "missing prediction value");
      continue;
    }
    auto v = parse_real(cell);
    if (!v) {
      throw DataError(where(spec, line_no) + "non-numeric value '" + std::string(cell) +
                      "' for feature '" + feature + "'");
    }
    if (!is_pred) names.insert(feature);
    cells.push_back({row, std::move(feature), *v, line_no});
  }
  if (row_ids.empty()) throw DataError(spec.path + ": empty dataset");

  std::vector<std::string> feature_names;
  if (spec.feature_columns) {
    for (const auto& n : *spec.feature_columns) {
      if (n == spec.prediction_column) {
        throw ConfigError("feature column '" + n + "' is the prediction column");
      }
      feature_names.push_back(n);
    }
  } else {
    feature_names.assign(names.begin(), names.end());
  }
  std::map<std::string, std::size_t> feature_index;
  std::vector<FeatureId> catalog;
  for (std::size_t j = 0; j < feature_names.size(); ++j) {
    feature_index.emplace(feature_names[j], j);
    catalog.push_back({j, feature_names[j]});
  }
  std::map<std::uint64_t, std::size_t> row_index;
  for (auto id : row_ids) row_index.emplace(id, row_index.size());

  const double unset = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> predictions(row_ids.size(), unset);
  std::vector<std::map<std::size_t, double>> by_feature(catalog.size());
  for (const auto& c : cells) {
    std::size_t r = row_index.at(c.row);
    if (c.feature == spec.prediction_column) {
      if (!std::isnan(predictions[r])) {
        throw DataError(where(spec, c.line) + "duplicate prediction for row " + std::to_string(c.row));
      }
      predictions[r] = c.value;
      continue;
    }
    auto it = feature_index.find(c.feature);
    if (it == feature_index.end()) continue;  // not allowlisted
    if (!by_feature[it->second].emplace(r, c.value).second) {
      throw DataError(where(spec, c.line) + "duplicate value for row " + std::to_string(c.row) +
                      ", feature '" + c.feature + "'");
    }
  }
  for (const auto& [id, r] : row_index) {
    if (std::isnan(predictions[r])) {
      throw DataError(spec.path + ": missing prediction value for row " + std::to_string(id));
    }
  }
  std::vector<FeatureColumn> columns(catalog.size());
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    for (auto [r, v] : by_feature[j]) {
      columns[j].rows.push_back(r);
      columns[j].values.push_back(v);
    }
  }
  return Dataset(std::move(catalog), std::move(predictions), std::move(columns));
}

}  // namespace

std::optional<InputFormat> parse_format(std::string_view s) {
  if (s == "dense-csv") return InputFormat::kDenseCsv;
  if (s == "sparse-triplet") return InputFormat::kSparseTriplet;
  return std::nullopt;
}

std::string_view to_string(InputFormat f) {
  return f == InputFormat::kDenseCsv ? "dense-csv" : "sparse-triplet";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v,
                             std::chars_format::general);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

Dataset load_dataset(const IngestSpec& spec) {
  return spec.format == InputFormat::kDenseCsv ? load_dense(spec) : load_triplets(spec);
}

LabelScan scan_labels(const IngestSpec& spec) {
  LabelScan scan;
  if (spec.format == InputFormat::kSparseTriplet) {
    auto ds = load_triplets(spec);
    scan.predictions.assign(ds.predictions().begin(), ds.predictions().end());
    scan.label_range = ds.label_range();
    return scan;
  }
  std::vector<FeatureId> catalog;
  stream_examples(spec, catalog, [&](std::size_t, const ScoredExample& ex) {
    scan.predictions.push_back(ex.prediction);
  });
  auto [lo, hi] = std::minmax_element(scan.predictions.begin(), scan.predictions.end());
  scan.label_range = {*lo, *hi};
  return scan;
}

void stream_examples(const IngestSpec& spec, std::vector<FeatureId>& catalog,
                     const std::function<void(std::size_t, const ScoredExample&)>& sink) {
  if (spec.format != InputFormat::kDenseCsv) {
    throw ConfigError("streaming is only supported for dense-csv input");
  }
  auto in = open(spec.path);
  auto lay = read_dense_header(in, spec);
  catalog = lay.catalog;
  std::string line;
  ScoredExample ex;
  std::size_t row = 0;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (!parse_dense_row(line, line_no, lay, spec, ex)) continue;
    sink(row++, ex);
  }
  if (row == 0) throw DataError(spec.path + ": empty dataset");
}

std::vector<SampleStats> profile(const Dataset& dataset) {
  std::vector<SampleStats> out;
  out.reserve(dataset.num_features());
  for (std::size_t j = 0; j < dataset.num_features(); ++j) {
    const auto& col = dataset.column(j);
    out.push_back(sample_stats(col.values, dataset.size() - col.size()));
  }
  return out;
}

}  // namespace segexplain
