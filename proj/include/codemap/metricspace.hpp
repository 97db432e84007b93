#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "codemap/corpus.hpp"

namespace codemap::xref {
struct XrefGraph;
}

namespace codemap::metric {

/// Symmetric pairwise dissimilarities with a zero diagonal. Matrices built
/// from lexical or structural evidence are bounded to [0,1]; geodesic and
/// rescaled matrices are not.
struct DissimilarityMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;

  int n() const { return static_cast<int>(values.rows()); }
  double operator()(int i, int j) const { return values(i, j); }
};

/// Throws std::logic_error if the matrix is not square, symmetric, zero on the
/// diagonal, label-aligned, or (when `bounded`) outside [0,1].
void check_invariants(const DissimilarityMatrix& d, bool bounded = true);

double cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

DissimilarityMatrix lexical_dissimilarity(const corpus::VectorSpace& vs);
DissimilarityMatrix reference_distance(const xref::XrefGraph& g);

/// alpha * structural + (1 - alpha) * lexical. Throws std::invalid_argument on
/// mismatched labels or alpha outside [0,1].
DissimilarityMatrix blend(const DissimilarityMatrix& lexical, const DissimilarityMatrix& structural,
                          double alpha);

nlohmann::json to_json(const DissimilarityMatrix& d);

}  // namespace codemap::metric
