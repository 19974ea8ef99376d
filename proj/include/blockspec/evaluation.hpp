#pragma once

#include <vector>

#include "blockspec/types.hpp"

namespace blockspec {

// counts(k-1, l-1) = #{ j : tau(j) = k, tau_hat(j) = l }.
struct ConfusionMatrix {
  Eigen::MatrixXi counts;
};

ConfusionMatrix confusion_matrix(const Labels& tau, const Labels& tau_hat);

/// Maximum of sum_i weights(i, perm(i)) over permutations of a square
/// nonnegative matrix; Hungarian method with potentials, O(K^3).
long long max_weight_assignment(const Eigen::MatrixXi& weights);

/// n minus the best agreement over label bijections; the smaller label set is
/// padded with empty labels when the label counts differ.
long long misassignment_count(const Labels& tau, const Labels& tau_hat);

double misassignment_fraction(const Labels& tau, const Labels& tau_hat);

}  // namespace blockspec
