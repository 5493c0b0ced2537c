#include "vulncluster/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "vulncluster/errors.hpp"

namespace vulncluster::pca {

namespace {

constexpr double kSymmetryTolerance = 1e-9;
constexpr double kOffDiagonalThreshold = 1e-12;  // relative to the Frobenius norm
constexpr std::size_t kMaxSweeps = 100;

double frobenius(const Matrix& m) {
    double sum = 0.0;
    for (double v : m.data()) sum += v * v;
    return std::sqrt(sum);
}

double off_diagonal_norm(const Matrix& m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) sum += m(i, j) * m(i, j);
    return std::sqrt(sum);
}

// One Jacobi rotation zeroing a(p, q), accumulated into the eigenvector
// matrix v (columns are eigenvectors).
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;

    const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.rows();
    const double app = a(p, p);
    const double aqq = a(q, q);
    a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
    a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == p || i == q) continue;
        const double aip = a(i, p);
        const double aiq = a(i, q);
        a(i, p) = c * aip - s * aiq;
        a(p, i) = a(i, p);
        a(i, q) = s * aip + c * aiq;
        a(q, i) = a(i, q);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double vip = v(i, p);
        const double viq = v(i, q);
        v(i, p) = c * vip - s * viq;
        v(i, q) = s * vip + c * viq;
    }
}

// Sign convention: the component of largest absolute value (earliest index
// on ties) is made positive, so eigenvectors are byte-deterministic.
void fix_sign(std::vector<double>& vec) {
    std::size_t idx = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (std::abs(vec[i]) > best) {
            best = std::abs(vec[i]);
            idx = i;
        }
    }
    if (vec[idx] < 0.0)
        for (double& x : vec) x = -x;
}

}  // namespace

Centered mean_center(const Matrix& data) {
    if (data.rows() == 0 || data.cols() == 0)
        throw NumericError("mean_center: empty matrix");

    const std::size_t m = data.rows();
    const std::size_t n = data.cols();
    Centered out{Matrix(m, n), std::vector<double>(n, 0.0)};
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += data(i, j);
        out.mean[j] = sum / static_cast<double>(m);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out.centered(i, j) = data(i, j) - out.mean[j];
    return out;
}

Matrix covariance(const Matrix& centered) {
    const std::size_t m = centered.rows();
    const std::size_t n = centered.cols();
    if (m < 2) throw NumericError("covariance needs at least 2 samples");

    Matrix cov(n, n);
    const double norm = 1.0 / static_cast<double>(m - 1);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            double sum = 0.0;
            for (std::size_t i = 0; i < m; ++i) sum += centered(i, a) * centered(i, b);
            cov(a, b) = sum * norm;
            cov(b, a) = cov(a, b);
        }
    }
    return cov;
}

std::vector<EigenPair> eigen_symmetric(const Matrix& s, std::size_t k) {
    const std::size_t n = s.rows();
    if (n == 0 || s.cols() != n) throw DimensionError("eigen_symmetric: matrix not square");
    if (k < 1 || k > n) throw DimensionError("eigen_symmetric: k out of range");

    double max_asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            max_asym = std::max(max_asym, std::abs(s(i, j) - s(j, i)));
    if (max_asym > kSymmetryTolerance)
        throw NumericError("eigen_symmetric: input not symmetric (max asymmetry " +
                           std::to_string(max_asym) + ")");

    Matrix a = s;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = avg;
            a(j, i) = avg;
        }

    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    const double threshold = kOffDiagonalThreshold * std::max(1.0, frobenius(a));
    bool converged = n == 1;
    for (std::size_t sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
        if (off_diagonal_norm(a) <= threshold) converged = true;
    }
    if (!converged)
        throw NumericError("eigen_symmetric: no convergence after " +
                           std::to_string(kMaxSweeps) + " sweeps, off-diagonal norm " +
                           std::to_string(off_diagonal_norm(a)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    std::vector<EigenPair> pairs;
    pairs.reserve(k);
    for (std::size_t r = 0; r < k; ++r) {
        EigenPair pair;
        pair.eigenvalue = a(order[r], order[r]);
        pair.eigenvector.resize(n);
        for (std::size_t i = 0; i < n; ++i) pair.eigenvector[i] = v(i, order[r]);
        fix_sign(pair.eigenvector);
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

PcaModel fit(const Matrix& data, std::size_t k) {
    if (k < 1 || k > std::min(data.rows(), data.cols()))
        throw DimensionError("pca::fit: k must be in [1, min(samples, features)]");

    auto centered = mean_center(data);
    const Matrix cov = covariance(centered.centered);
    auto pairs = eigen_symmetric(cov, k);

    PcaModel model;
    model.mean = std::move(centered.mean);
    model.k = k;
    model.eigenvalues.reserve(k);
    model.components = Matrix(k, data.cols());
    for (std::size_t r = 0; r < k; ++r) {
        model.eigenvalues.push_back(pairs[r].eigenvalue);
        for (std::size_t j = 0; j < data.cols(); ++j)
            model.components(r, j) = pairs[r].eigenvector[j];
    }
    return model;
}

Projection project(const PcaModel& model, const Matrix& data,
                   std::vector<std::string> doc_ids) {
    if (data.cols() != model.mean.size())
        throw DimensionError("project: data has " + std::to_string(data.cols()) +
                             " features, model expects " + std::to_string(model.mean.size()));
    if (!doc_ids.empty() && doc_ids.size() != data.rows())
        throw DimensionError("project: doc_ids/rows mismatch");

    Projection proj;
    if (doc_ids.empty()) {
        proj.doc_ids.reserve(data.rows());
        for (std::size_t i = 0; i < data.rows(); ++i) proj.doc_ids.push_back(std::to_string(i));
    } else {
        proj.doc_ids = std::move(doc_ids);
    }

    proj.coords = Matrix(data.rows(), model.k);
    for (std::size_t i = 0; i < data.rows(); ++i)
        for (std::size_t c = 0; c < model.k; ++c) {
            double dot = 0.0;
            for (std::size_t j = 0; j < data.cols(); ++j)
                dot += (data(i, j) - model.mean[j]) * model.components(c, j);
            proj.coords(i, c) = dot;
        }
    return proj;
}

std::string to_json(const PcaModel& model) {
    nlohmann::json j;
    j["mean"] = model.mean;
    j["eigenvalues"] = model.eigenvalues;
    j["k"] = model.k;
    auto& comps = j["components"] = nlohmann::json::array();
    for (std::size_t r = 0; r < model.components.rows(); ++r)
        comps.push_back(model.components.row(r));
    return j.dump(2) + "\n";
}

PcaModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model dump: ") + e.what());
    }
    PcaModel model;
    model.mean = j.at("mean").get<std::vector<double>>();
    model.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    model.k = j.at("k").get<std::size_t>();
    std::vector<std::vector<double>> rows;
    for (const auto& row : j.at("components")) rows.push_back(row.get<std::vector<double>>());
    model.components = Matrix::from_rows(rows);
    return model;
}

}  // namespace vulncluster::pca
