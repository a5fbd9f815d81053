#pragma once

#include "ogt/core.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ogt::io {

using Json = nlohmann::json;

/// {"n", "alphabet", "default"?, "edges": [[i, j, symbol], ...]}
OrderedGraph graph_from_json(const Json& j);
/// Writes every pair explicitly unless `compact`, in which case the most
/// frequent color becomes "default".
Json graph_to_json(const OrderedGraph& g, bool compact = true);

/// {"alphabet", "patterns": [graph, ...]}; patterns may omit "alphabet".
ForbiddenFamily family_from_json(const Json& j);
Json family_to_json(const ForbiddenFamily& fam);

/// {"alphabet", "classes": [[ids]...], "colors": [[i, j, symbol]...]}
struct ChartInput {
  ColorAlphabet alphabet;
  KPartiteChart chart;
};
ChartInput chart_from_json(const Json& j);
Json chart_to_json(const KPartiteChart& chart, const ColorAlphabet& alphabet);

/// {"alphabet", "rows": [[symbol...]...]}
MatrixGrid matrix_from_json(const Json& j);
Json matrix_to_json(const MatrixGrid& m);
/// One row per line, cells separated by commas (or whitespace). When
/// `alphabet` is empty the sorted distinct cells are used.
MatrixGrid matrix_from_csv(const std::string& text, const std::vector<std::string>& alphabet = {});
std::string matrix_to_csv(const MatrixGrid& m);

/// {"alphabet", "patterns": [matrix, ...]}
MatrixFamily matrix_family_from_json(const Json& j);

/// Arrays of color-name arrays.
Json threshold_to_json(const ThresholdMatrix& mat, const ColorAlphabet& alphabet);
ThresholdMatrix threshold_from_json(const Json& j, const ColorAlphabet& alphabet);

/// {"m", "t", "alphabet", "loops": [[j, j2, matrix]...]}
Json looped_to_json(const LoopedGraph& h, const ColorAlphabet& alphabet);
LoopedGraph looped_from_json(const Json& j, ColorAlphabet* alphabet_out = nullptr);

ColorAlphabet alphabet_from_json(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace ogt::io
