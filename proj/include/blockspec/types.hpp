#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace blockspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense 0/1 adjacency, one byte per entry, column-major like every Eigen matrix.
using Adjacency = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Block labels are 1-based: a label vector over K blocks holds values in 1..K.
using Labels = std::vector<int>;

// Which side of the communication matrices is known to have pairwise distinct
// rows; decides whether vertices are clustered on X, Y or [X|Y].
enum class KnowledgeMode { RowsDistinct, ColumnsDistinct, Neither };

KnowledgeMode parse_knowledge_mode(std::string_view text);
std::string_view to_string(KnowledgeMode mode) noexcept;

}  // namespace blockspec
