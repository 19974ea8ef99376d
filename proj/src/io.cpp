#include "blockspec/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "blockspec/error.hpp"

namespace blockspec {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

// Next line that is neither blank nor a '#' comment.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::ParseError, "matrix must be a list of rows");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != c) {
      throw Error(ErrorCode::ParseError, "matrix rows differ in length");
    }
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

SbmParams params_from_json(const json& j, const fs::path& base_dir) {
  try {
    SbmParams p;
    p.K = j.at("K").get<int>();
    p.rho = j.at("rho").get<std::vector<double>>();
    p.directed = j.value("directed", false);
    for (const json& m : j.at("modalities")) {
      p.modalities.push_back(m.is_string() ? load_matrix_text(base_dir / m.get<std::string>())
                                           : matrix_from_json(m));
    }
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad model parameters: ") + e.what());
  }
}

json params_to_json(const SbmParams& params) {
  json mods = json::array();
  for (const Matrix& m : params.modalities) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
      rows.push_back(row);
    }
    mods.push_back(rows);
  }
  return json{{"K", params.K}, {"rho", params.rho}, {"modalities", mods}, {"directed", params.directed}};
}

SbmParams load_params(const fs::path& path) {
  std::ifstream in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  const json& body = j.contains("params") ? j.at("params") : j;
  return params_from_json(body, path.parent_path());
}

Matrix read_matrix_text(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (next_data_line(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v = 0.0;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw Error(ErrorCode::ParseError, "non-numeric matrix entry: " + line);
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ParseError, "matrix rows differ in length");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "empty matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix load_matrix_text(const fs::path& path) {
  std::ifstream in = open_in(path);
  return read_matrix_text(in);
}

void write_matrix_text(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_graph(std::ostream& out, const GraphSample& g, GraphFormat format) {
  out << "# blockspec " << (format == GraphFormat::EdgeList ? "edgelist" : "dense") << '\n';
  out << g.n << ' ' << g.adjacency.size() << ' ' << (g.directed ? 1 : 0) << '\n';
  for (std::size_t s = 0; s < g.adjacency.size(); ++s) {
    const Adjacency& a = g.adjacency[s];
    if (format == GraphFormat::Dense) {
      for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
          if (j > 0) out << ' ';
          out << static_cast<int>(a(i, j));
        }
        out << '\n';
      }
      continue;
    }
    for (int i = 0; i < g.n; ++i) {
      for (int j = g.directed ? 0 : i + 1; j < g.n; ++j) {
        if (a(i, j) != 0) out << s + 1 << ' ' << i + 1 << ' ' << j + 1 << '\n';
      }
    }
  }
}

GraphSample read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty graph file");
  GraphFormat format;
  if (line.rfind("# blockspec edgelist", 0) == 0) {
    format = GraphFormat::EdgeList;
  } else if (line.rfind("# blockspec dense", 0) == 0) {
    format = GraphFormat::Dense;
  } else {
    throw Error(ErrorCode::ParseError, "missing '# blockspec edgelist|dense' line");
  }
  if (!next_data_line(in, line)) throw Error(ErrorCode::ParseError, "missing graph header");
  std::istringstream header(line);
  GraphSample g;
  int modalities = 0;
  int directed = 0;
  if (!(header >> g.n >> modalities >> directed) || g.n < 0 || modalities < 1) {
    throw Error(ErrorCode::ParseError, "graph header must be 'n S directed'");
  }
  g.directed = directed != 0;
  g.adjacency.assign(modalities, Adjacency::Zero(g.n, g.n));
  if (format == GraphFormat::Dense) {
    for (int s = 0; s < modalities; ++s) {
      for (int i = 0; i < g.n; ++i) {
        if (!next_data_line(in, line)) throw Error(ErrorCode::ParseError, "dense graph truncated");
        std::istringstream ls(line);
        for (int j = 0; j < g.n; ++j) {
          int v = 0;
          if (!(ls >> v) || (v != 0 && v != 1)) throw Error(ErrorCode::ParseError, "bad dense entry");
          g.adjacency[s](i, j) = static_cast<std::uint8_t>(v);
        }
      }
    }
  } else {
    while (next_data_line(in, line)) {
      std::istringstream ls(line);
      int s = 0, i = 0, j = 0;
      if (!(ls >> s >> i >> j) || s < 1 || s > modalities || i < 1 || i > g.n || j < 1 || j > g.n ||
          i == j) {
        throw Error(ErrorCode::ParseError, "bad edge line: " + line);
      }
      g.adjacency[s - 1](i - 1, j - 1) = 1;
      if (!g.directed) g.adjacency[s - 1](j - 1, i - 1) = 1;
    }
  }
  return g;
}

void save_graph(const fs::path& path, const GraphSample& g, GraphFormat format) {
  std::ofstream out = open_out(path);
  write_graph(out, g, format);
}

GraphSample load_graph(const fs::path& path) {
  std::ifstream in = open_in(path);
  return read_graph(in);
}

void write_labels(std::ostream& out, const Labels& labels) {
  for (int l : labels) out << l << '\n';
}

Labels read_labels(std::istream& in) {
  Labels labels;
  std::string line;
  while (next_data_line(in, line)) {
    std::istringstream ls(line);
    int l = 0;
    if (!(ls >> l) || l < 1) throw Error(ErrorCode::ParseError, "bad label line: " + line);
    labels.push_back(l);
  }
  return labels;
}

void save_labels(const fs::path& path, const Labels& labels) {
  std::ofstream out = open_out(path);
  write_labels(out, labels);
}

Labels load_labels(const fs::path& path) {
  std::ifstream in = open_in(path);
  return read_labels(in);
}

void save_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
}

}  // namespace blockspec
