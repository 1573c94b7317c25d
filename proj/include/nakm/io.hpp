#pragma once

#include <string>
#include <vector>

#include "nakm/euclid_kmeans.hpp"
#include "nakm/measure.hpp"

namespace nakm {

std::string read_text(const std::string& path);

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content);

/// Numbers are printed with 17 significant digits (round-trip exact).
std::string format_number(double v);

// ---- CSV ----

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma separated, first line is the header. No quoting.
CsvTable parse_csv(const std::string& text);

/// Points with missing cells. Empty, "NA", "NaN" or "nan" cells are missing.
/// A column named "importance" becomes the importance weights; columns named
/// "id" or "row_id" are ignored.
struct PointTable {
  std::vector<std::string> columns;
  NADataset data;
};
PointTable read_points_csv(const std::string& path);
std::string points_csv(const Matrix& points, const std::vector<std::string>& columns = {});

/// Square matrix, with or without an "id" header row and id column.
Matrix read_matrix_csv(const std::string& path);
std::string matrix_csv(const Matrix& m);

/// One value per row; the last column is used and a non-numeric first line
/// is treated as a header.
std::vector<double> read_vector_csv(const std::string& path);
std::vector<std::size_t> read_labels_csv(const std::string& path);
std::string labels_csv(const std::vector<std::size_t>& labels, const std::string& name = "cluster");
std::string vector_csv(const std::vector<double>& v, const std::string& name);

// ---- JSON ----

/// {"dim": d, "points": [[...], ...], "weights": [...]}; weights optional.
std::string measure_json(const DiscreteMeasure& m);
DiscreteMeasure parse_measure_json(const std::string& text);

/// JSON lines, one object per measure: {"measure": {...}, "observed": [...],
/// "full_dim": d}. "observed" defaults to every coordinate; "full_dim"
/// defaults to the largest observed index + 1 (or the measure dimension).
/// A measure given in full dimension is projected onto "observed".
std::vector<ObservedMeasure> parse_dataset_jsonl(const std::string& text);
std::string dataset_jsonl(const std::vector<ObservedMeasure>& data);

/// {"components": [measure, ...], "weights": [...]} per line.
std::string random_measures_jsonl(const std::vector<RandomMeasure>& items);

}  // namespace nakm
