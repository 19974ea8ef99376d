#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "blockspec/model.hpp"
#include "blockspec/sampler.hpp"
#include "blockspec/types.hpp"

namespace blockspec {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Parameters: {"K": 3, "rho": [...], "modalities": [M1, ...], "directed": false}
// where each M is a list of rows or a path (relative to base_dir) to a
// whitespace-separated plain-text matrix.
SbmParams params_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json params_to_json(const SbmParams& params);
SbmParams load_params(const std::filesystem::path& path);

Matrix read_matrix_text(std::istream& in);
Matrix load_matrix_text(const std::filesystem::path& path);
void write_matrix_text(std::ostream& out, const Matrix& m);

// Graph text formats. Both start with a "# blockspec <format>" line and a
// "n S directed" header; vertices and modalities are 1-based.
//   edgelist: one "s i j" line per edge (i < j when undirected)
//   dense:    S blocks of n rows of n space-separated 0/1 entries
enum class GraphFormat { EdgeList, Dense };

void write_graph(std::ostream& out, const GraphSample& g, GraphFormat format);
GraphSample read_graph(std::istream& in);
void save_graph(const std::filesystem::path& path, const GraphSample& g, GraphFormat format);
GraphSample load_graph(const std::filesystem::path& path);

void write_labels(std::ostream& out, const Labels& labels);
Labels read_labels(std::istream& in);
void save_labels(const std::filesystem::path& path, const Labels& labels);
Labels load_labels(const std::filesystem::path& path);

void save_text(const std::filesystem::path& path, const std::string& text);

}  // namespace blockspec
