#include "nakm/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

namespace nakm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

double to_double(const std::string& s, const std::string& where) {
  double v;
  if (!parse_double(s, v)) throw InvalidInput(where + ": not a number: '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> lines_of(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (trim(line).empty()) continue;
    out.push_back(split(line));
  }
  return out;
}

json to_json(const DiscreteMeasure& m) {
  json pts = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto p = m.point(i);
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"dim", m.dim()}, {"points", pts}, {"weights", m.weights()}};
}

DiscreteMeasure from_json(const json& j) {
  if (!j.is_object() || !j.contains("points")) throw InvalidInput("measure: missing \"points\"");
  const auto pts = j.at("points").get<std::vector<std::vector<double>>>();
  if (pts.empty()) throw InvalidInput("measure: no atoms");
  const std::size_t dim = j.contains("dim") ? j.at("dim").get<std::size_t>() : pts.front().size();
  std::vector<double> flat;
  for (const auto& p : pts) {
    if (p.size() != dim) throw InvalidInput("measure: atom dimension differs from \"dim\"");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  std::vector<double> w = j.contains("weights") ? j.at("weights").get<std::vector<double>>()
                                                : std::vector<double>(pts.size(), 1.0 / static_cast<double>(pts.size()));
  return {dim, std::move(flat), std::move(w)};
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw InvalidInput("failed writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable parse_csv(const std::string& text) {
  auto lines = lines_of(text);
  if (lines.empty()) throw InvalidInput("csv: empty input");
  CsvTable t;
  t.header = std::move(lines.front());
  t.rows.assign(std::make_move_iterator(lines.begin() + 1), std::make_move_iterator(lines.end()));
  return t;
}

PointTable read_points_csv(const std::string& path) {
  const CsvTable t = parse_csv(read_text(path));
  std::vector<std::size_t> value_cols;
  std::ptrdiff_t importance = -1;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == "importance") {
      importance = static_cast<std::ptrdiff_t>(c);
    } else if (t.header[c] != "id" && t.header[c] != "row_id") {
      value_cols.push_back(c);
      names.push_back(t.header[c]);
    }
  }
  if (value_cols.empty()) throw InvalidInput(path + ": no value columns");
  if (t.rows.empty()) throw InvalidInput(path + ": no rows");
  Matrix values(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(value_cols.size()));
  std::vector<double> weights;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != t.header.size())
      throw InvalidInput(path + ": row " + std::to_string(r + 1) + " has the wrong number of cells");
    for (std::size_t q = 0; q < value_cols.size(); ++q) {
      const auto& cell = row[value_cols[q]];
      values(r, q) = is_missing(cell) ? std::numeric_limits<double>::quiet_NaN()
                                      : to_double(cell, path + " row " + std::to_string(r + 1));
    }
    if (importance >= 0) weights.push_back(to_double(row[importance], path + " importance"));
  }
  return {std::move(names), NADataset(std::move(values), std::move(weights))};
}

std::string points_csv(const Matrix& points, const std::vector<std::string>& columns) {
  std::ostringstream out;
  out << "id";
  for (Eigen::Index c = 0; c < points.cols(); ++c)
    out << ',' << (columns.empty() ? "x" + std::to_string(c) : columns[c]);
  out << '\n';
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out << i;
    for (Eigen::Index c = 0; c < points.cols(); ++c) out << ',' << format_number(points(i, c));
    out << '\n';
  }
  return out.str();
}

Matrix read_matrix_csv(const std::string& path) {
  auto lines = lines_of(read_text(path));
  if (lines.empty()) throw InvalidInput(path + ": empty matrix");
  double probe;
  const bool header = !parse_double(lines.front().front(), probe);
  const bool id_col = header && lines.front().front() == "id";
  if (header) lines.erase(lines.begin());
  const std::size_t n = lines.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t off = id_col ? 1 : 0;
    if (lines[i].size() != n + off) throw InvalidInput(path + ": matrix is not square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = to_double(lines[i][j + off], path);
  }
  return m;
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream out;
  out << "id";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << j;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_number(m(i, j));
    out << '\n';
  }
  return out.str();
}

std::vector<double> read_vector_csv(const std::string& path) {
  auto lines = lines_of(read_text(path));
  std::vector<double> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    double v;
    if (!parse_double(lines[i].back(), v)) {
      if (i == 0) continue;
      throw InvalidInput(path + ": not a number: '" + lines[i].back() + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InvalidInput(path + ": no values");
  return out;
}

std::vector<std::size_t> read_labels_csv(const std::string& path) {
  std::vector<std::size_t> out;
  for (double v : read_vector_csv(path)) {
    if (!(v >= 0.0) || v != std::floor(v)) throw InvalidInput(path + ": labels must be non-negative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string labels_csv(const std::vector<std::size_t>& labels, const std::string& name) {
  std::ostringstream out;
  out << "row_id," << name << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
  return out.str();
}

std::string vector_csv(const std::vector<double>& v, const std::string& name) {
  std::ostringstream out;
  out << "row_id," << name << '\n';
  for (std::size_t i = 0; i < v.size(); ++i) out << i << ',' << format_number(v[i]) << '\n';
  return out.str();
}

std::string measure_json(const DiscreteMeasure& m) { return to_json(m).dump(); }

DiscreteMeasure parse_measure_json(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("measure json: ") + e.what());
  }
}

std::vector<ObservedMeasure> parse_dataset_jsonl(const std::string& text) {
  std::vector<ObservedMeasure> out;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = "dataset line " + std::to_string(lineno);
    try {
      const json j = json::parse(line);
      if (!j.contains("measure")) throw InvalidInput(where + ": missing \"measure\"");
      DiscreteMeasure m = from_json(j.at("measure"));
      std::vector<std::size_t> obs;
      if (j.contains("observed")) obs = j.at("observed").get<std::vector<std::size_t>>();
      std::size_t full = 0;
      if (j.contains("full_dim")) {
        full = j.at("full_dim").get<std::size_t>();
      } else if (!obs.empty()) {
        for (auto c : obs) full = std::max(full, c + 1);
        full = std::max(full, m.dim());
      } else {
        full = m.dim();
      }
      if (obs.empty())
        for (std::size_t c = 0; c < full; ++c) obs.push_back(c);
      CoordMask mask(std::move(obs), full);
      if (m.dim() == full && !mask.is_full()) m = push_forward(m, mask);
      if (m.dim() != mask.observed_count())
        throw InvalidInput(where + ": measure dimension matches neither the observed nor the full dimension");
      out.emplace_back(std::move(m), std::move(mask));
    } catch (const json::exception& e) {
      throw InvalidInput(where + ": " + e.what());
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string(e.what()).rfind("dataset line", 0) == 0 ? e.what() : where + ": " + e.what());
    }
  }
  if (out.empty()) throw InvalidInput("dataset: no measures");
  const std::size_t d = out.front().full_dim();
  for (const auto& o : out)
    if (o.full_dim() != d) throw InvalidInput("dataset: measures disagree on the full dimension");
  return out;
}

std::string dataset_jsonl(const std::vector<ObservedMeasure>& data) {
  std::string out;
  for (const auto& o : data) {
    json j{{"measure", to_json(o.measure)}, {"observed", o.mask.observed()}, {"full_dim", o.full_dim()}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string random_measures_jsonl(const std::vector<RandomMeasure>& items) {
  std::string out;
  for (const auto& r : items) {
    json comps = json::array();
    for (const auto& c : r.components()) comps.push_back(to_json(c));
    out += json{{"components", comps}, {"weights", r.mix_weights()}}.dump();
    out += '\n';
  }
  return out;
}

}  // namespace nakm
