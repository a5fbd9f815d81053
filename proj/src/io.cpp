#include "ogt/io.hpp"

#include "ogt/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ogt::io {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool comma = line.find(',') != std::string::npos;
  auto flush = [&] {
    auto b = cur.find_first_not_of(" \t\r");
    auto e = cur.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
    cur.clear();
  };
  if (comma) {
    for (char ch : line) {
      if (ch == ',') flush();
      else cur += ch;
    }
    flush();
  } else {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) cells.push_back(tok);
  }
  return cells;
}

}  // namespace

ColorAlphabet alphabet_from_json(const Json& j) {
  return ColorAlphabet(field<std::vector<std::string>>(j, "alphabet"));
}

OrderedGraph graph_from_json(const Json& j) {
  auto alphabet = alphabet_from_json(j);
  const int n = field<int>(j, "n");
  if (n < 0) throw InputError("negative n");
  ColorGrid grid(n, alphabet.size());
  if (j.contains("default") && !j.at("default").is_null()) {
    const Color fill = alphabet.index_of(field<std::string>(j, "default"));
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) grid.set(u, v, fill);
  }
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw InputError("edge entries must be [i, j, color]");
      const int u = e[0].get<int>();
      const int v = e[1].get<int>();
      if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw InputError("edge endpoint out of range");
      grid.set(u, v, alphabet.index_of(e[2].get<std::string>()));
    }
  }
  return OrderedGraph(std::move(alphabet), std::move(grid));
}

Json graph_to_json(const OrderedGraph& g, bool compact) {
  Json j;
  j["n"] = g.n();
  j["alphabet"] = g.alphabet().symbols();
  Color fill = kNoColor;
  if (compact && g.n() >= 2) {
    std::vector<long> freq(static_cast<std::size_t>(g.num_colors()), 0);
    for (int u = 0; u < g.n(); ++u)
      for (int v = u + 1; v < g.n(); ++v) ++freq[static_cast<std::size_t>(g.color(u, v))];
    fill = static_cast<Color>(std::max_element(freq.begin(), freq.end()) - freq.begin());
    j["default"] = g.alphabet().symbol(fill);
  }
  Json edges = Json::array();
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v)
      if (g.color(u, v) != fill) edges.push_back({u, v, g.alphabet().symbol(g.color(u, v))});
  j["edges"] = std::move(edges);
  return j;
}

ForbiddenFamily family_from_json(const Json& j) {
  ForbiddenFamily fam;
  fam.alphabet = alphabet_from_json(j);
  if (!j.contains("patterns") || !j.at("patterns").is_array()) throw InputError("missing field 'patterns'");
  for (const auto& p : j.at("patterns")) {
    Json copy = p;
    if (!copy.contains("alphabet")) copy["alphabet"] = fam.alphabet.symbols();
    fam.patterns.push_back(graph_from_json(copy));
  }
  fam.validate();
  return fam;
}

Json family_to_json(const ForbiddenFamily& fam) {
  Json j;
  j["alphabet"] = fam.alphabet.symbols();
  j["patterns"] = Json::array();
  for (const auto& p : fam.patterns) {
    Json pj = graph_to_json(p, false);
    pj.erase("alphabet");
    j["patterns"].push_back(std::move(pj));
  }
  return j;
}

ChartInput chart_from_json(const Json& j) {
  auto alphabet = alphabet_from_json(j);
  auto classes = field<std::vector<std::vector<int>>>(j, "classes");
  int n = 0;
  for (const auto& c : classes)
    for (int v : c) n = std::max(n, v + 1);
  ColorGrid grid(n, alphabet.size());
  if (j.contains("colors")) {
    for (const auto& e : j.at("colors")) {
      if (!e.is_array() || e.size() != 3) throw InputError("color entries must be [i, j, color]");
      grid.set(e[0].get<int>(), e[1].get<int>(), alphabet.index_of(e[2].get<std::string>()));
    }
  }
  KPartiteChart chart(std::move(classes), std::move(grid));
  return {std::move(alphabet), std::move(chart)};
}

Json chart_to_json(const KPartiteChart& chart, const ColorAlphabet& alphabet) {
  Json j;
  j["alphabet"] = alphabet.symbols();
  j["classes"] = chart.classes();
  Json colors = Json::array();
  for (int a = 0; a < chart.k(); ++a)
    for (int b = a + 1; b < chart.k(); ++b)
      for (Vertex u : chart.part(a))
        for (Vertex v : chart.part(b)) colors.push_back({u, v, alphabet.symbol(chart.color(u, v))});
  j["colors"] = std::move(colors);
  return j;
}

MatrixGrid matrix_from_json(const Json& j) {
  auto alphabet = alphabet_from_json(j);
  auto rows = field<std::vector<std::vector<std::string>>>(j, "rows");
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  MatrixGrid m(alphabet, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c) throw InputError("ragged matrix rows");
    for (int k = 0; k < c; ++k) m.set(i, k, alphabet.index_of(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]));
  }
  return m;
}

Json matrix_to_json(const MatrixGrid& m) {
  Json j;
  j["alphabet"] = m.alphabet().symbols();
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m.alphabet().symbol(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

MatrixGrid matrix_from_csv(const std::string& text, const std::vector<std::string>& alphabet) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_cells(line));
  }
  std::vector<std::string> symbols = alphabet;
  if (symbols.empty()) {
    std::set<std::string> seen;
    for (const auto& r : rows) seen.insert(r.begin(), r.end());
    symbols.assign(seen.begin(), seen.end());
    // A one-symbol grid still needs a two-letter alphabet.
    if (symbols.size() == 1) symbols.push_back(symbols[0] + "'");
  }
  Json j;
  j["alphabet"] = symbols;
  j["rows"] = rows;
  return matrix_from_json(j);
}

std::string matrix_to_csv(const MatrixGrid& m) {
  std::string out;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += m.alphabet().symbol(m.at(r, c));
    }
    out += '\n';
  }
  return out;
}

MatrixFamily matrix_family_from_json(const Json& j) {
  MatrixFamily fam;
  fam.alphabet = alphabet_from_json(j);
  if (!j.contains("patterns") || !j.at("patterns").is_array()) throw InputError("missing field 'patterns'");
  for (const auto& p : j.at("patterns")) {
    Json copy = p;
    if (!copy.contains("alphabet")) copy["alphabet"] = fam.alphabet.symbols();
    fam.patterns.push_back(matrix_from_json(copy));
  }
  fam.validate();
  return fam;
}

Json threshold_to_json(const ThresholdMatrix& mat, const ColorAlphabet& alphabet) {
  Json rows = Json::array();
  for (int s = 0; s < mat.t(); ++s) {
    Json row = Json::array();
    for (int s2 = 0; s2 < mat.t(); ++s2) {
      Json entry = Json::array();
      for (Color c = 0; c < alphabet.size(); ++c)
        if (mat.contains(s, s2, c)) entry.push_back(alphabet.symbol(c));
      row.push_back(std::move(entry));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ThresholdMatrix threshold_from_json(const Json& j, const ColorAlphabet& alphabet) {
  if (!j.is_array() || j.empty()) throw InputError("threshold matrix must be a non-empty array");
  const int t = static_cast<int>(j.size());
  ThresholdMatrix mat(t, 0);
  for (int s = 0; s < t; ++s) {
    if (!j[static_cast<std::size_t>(s)].is_array() || static_cast<int>(j[static_cast<std::size_t>(s)].size()) != t)
      throw InputError("threshold matrix must be square");
    for (int s2 = 0; s2 < t; ++s2) {
      ColorSet set = 0;
      for (const auto& name : j[static_cast<std::size_t>(s)][static_cast<std::size_t>(s2)])
        set |= color_bit(alphabet.index_of(name.get<std::string>()));
      mat.set(s, s2, set);
    }
  }
  return mat;
}

Json looped_to_json(const LoopedGraph& h, const ColorAlphabet& alphabet) {
  Json j;
  j["m"] = h.m();
  j["t"] = h.t();
  j["alphabet"] = alphabet.symbols();
  Json loops = Json::array();
  for (int a = 0; a < h.m(); ++a)
    for (int b = a; b < h.m(); ++b) loops.push_back({a, b, threshold_to_json(h.at(a, b), alphabet)});
  j["loops"] = std::move(loops);
  return j;
}

LoopedGraph looped_from_json(const Json& j, ColorAlphabet* alphabet_out) {
  auto alphabet = alphabet_from_json(j);
  const int m = field<int>(j, "m");
  const int t = field<int>(j, "t");
  LoopedGraph h(m, t, ThresholdMatrix(t, full_color_set(alphabet.size())));
  std::vector<char> seen(static_cast<std::size_t>(m * m), 0);
  for (const auto& e : field<Json>(j, "loops")) {
    if (!e.is_array() || e.size() != 3) throw InputError("loop entries must be [j, j2, matrix]");
    const int a = e[0].get<int>();
    const int b = e[1].get<int>();
    auto mat = threshold_from_json(e[2], alphabet);
    if (mat.t() != t) throw InputError("loop matrix has wrong dimension");
    h.set(a, b, std::move(mat));
    seen[static_cast<std::size_t>(std::min(a, b) * m + std::max(a, b))] = 1;
  }
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b)
      if (!seen[static_cast<std::size_t>(a * m + b)]) throw InputError("looped graph pair left uncolored");
  if (alphabet_out) *alphabet_out = alphabet;
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace ogt::io
