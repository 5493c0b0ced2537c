#pragma once

#include <string>
#include <vector>

#include "vulncluster/matrix.hpp"

namespace vulncluster::pca {

/// Column means plus the top-k eigenpairs of the sample covariance of the
/// centered data. Components are orthonormal feature-space directions,
/// eigenvalues sorted non-increasing.
struct PcaModel {
    std::vector<double> mean;
    std::vector<double> eigenvalues;
    Matrix components;  // k x features, row i is component i
    std::size_t k = 0;
};

struct Projection {
    std::vector<std::string> doc_ids;
    Matrix coords;  // rows = documents, cols = k component scores
};

struct Centered {
    Matrix centered;
    std::vector<double> mean;
};

/// Subtracts the per-column arithmetic mean from every row.
Centered mean_center(const Matrix& data);

/// Sample covariance over features: (1 / (m - 1)) * Xc^T Xc.
/// Throws NumericError when there are fewer than 2 samples.
Matrix covariance(const Matrix& centered);

struct EigenPair {
    double eigenvalue = 0.0;
    std::vector<double> eigenvector;
};

/// Top-k eigenpairs of a symmetric matrix via cyclic Jacobi rotations,
/// descending by eigenvalue. Eigenvectors are unit-norm and mutually
/// orthogonal, with a fixed sign convention: the component of largest
/// absolute value (earliest index on ties) is positive. Throws on
/// non-symmetric input or failed convergence.
std::vector<EigenPair> eigen_symmetric(const Matrix& s, std::size_t k);

/// mean_center -> covariance -> eigen_symmetric. Requires
/// 1 <= k <= min(samples, features) and at least 2 samples.
PcaModel fit(const Matrix& data, std::size_t k);

/// coords = (data - mean) * [components as columns]. doc_ids, when given,
/// must match the row count; otherwise rows are labeled by index.
Projection project(const PcaModel& model, const Matrix& data,
                   std::vector<std::string> doc_ids = {});

/// JSON dump with mean, eigenvalues and row-major components; doubles are
/// serialized losslessly for exact round-trips.
std::string to_json(const PcaModel& model);
PcaModel model_from_json(const std::string& text);

}  // namespace vulncluster::pca
