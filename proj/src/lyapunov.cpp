#include "sadic/lyapunov.hpp"

#include <cmath>
#include <random>

#include "sadic/cocycle.hpp"

namespace sadic {

namespace {

Eigen::MatrixXd factor_as_double(const SubstitutionSequence& seq, long n) {
    const IntMatrix& s = seq.at(n).matrix();
    const int m = s.rows();
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = s.at(j, i).get_d(); // transpose
    return a;
}

// QR with positive diagonal of R.
void qr_positive(const Eigen::MatrixXd& mat, Eigen::MatrixXd& q, Eigen::VectorXd& rdiag) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(mat);
    Eigen::MatrixXd thin = Eigen::MatrixXd::Identity(mat.rows(), mat.cols());
    q = qr.householderQ() * thin;
    Eigen::MatrixXd r = qr.matrixQR().topRows(mat.cols()).triangularView<Eigen::Upper>();
    rdiag = r.diagonal();
    for (int i = 0; i < rdiag.size(); ++i) {
        if (rdiag(i) < 0) {
            rdiag(i) = -rdiag(i);
            q.col(i) = -q.col(i);
        }
    }
}

Eigen::MatrixXd random_orthogonal(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = gauss(rng);
    Eigen::MatrixXd q;
    Eigen::VectorXd rdiag;
    qr_positive(g, q, rdiag);
    return q;
}

} // namespace

double LyapunovEstimate::sum() const {
    double s = 0.0;
    for (double t : exponents) s += t;
    return s;
}

LyapunovEstimate lyapunov_spectrum(const SubstitutionSequence& seq, const LyapunovOptions& opts) {
    if (opts.steps < 1) throw std::invalid_argument("lyapunov_spectrum: need steps >= 1");
    const int m = seq.alphabet_size();
    const int cadence = std::max(1, opts.cadence);

    std::vector<std::vector<double>> per_trial;
    for (int trial = 0; trial < opts.trials; ++trial) {
        std::mt19937_64 rng(opts.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial));
        Eigen::MatrixXd frame = random_orthogonal(m, m, rng);
        Eigen::VectorXd logsum = Eigen::VectorXd::Zero(m);
        long since_qr = 0;
        for (long n = 1; n <= opts.steps; ++n) {
            frame = factor_as_double(seq, n) * frame;
            if (++since_qr == cadence || n == opts.steps) {
                Eigen::MatrixXd q;
                Eigen::VectorXd rdiag;
                qr_positive(frame, q, rdiag);
                for (int i = 0; i < m; ++i) {
                    if (!(rdiag(i) > 0.0))
                        throw std::runtime_error("lyapunov_spectrum: degenerate column during renormalization");
                    logsum(i) += std::log(rdiag(i));
                }
                frame = q;
                since_qr = 0;
            }
        }
        std::vector<double> thetas(m);
        for (int i = 0; i < m; ++i) thetas[i] = logsum(i) / static_cast<double>(opts.steps);
        std::sort(thetas.begin(), thetas.end(), std::greater<>());
        per_trial.push_back(std::move(thetas));
    }

    LyapunovEstimate est;
    est.steps = opts.steps;
    est.trials = opts.trials;
    est.exponents.assign(m, 0.0);
    est.spread.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double mean = 0.0;
        for (const auto& t : per_trial) mean += t[i];
        mean /= static_cast<double>(per_trial.size());
        double var = 0.0;
        for (const auto& t : per_trial) var += (t[i] - mean) * (t[i] - mean);
        if (per_trial.size() > 1) var /= static_cast<double>(per_trial.size() - 1);
        est.exponents[i] = mean;
        est.spread[i] = std::sqrt(var);
    }
    for (int i = 0; i < m; ++i)
        if (est.exponents[i] > 3.0 * est.spread[i]) ++est.kappa;
    if (m >= 2)
        est.top_simple = est.exponents[0] - est.exponents[1] > 3.0 * (est.spread[0] + est.spread[1]);
    else
        est.top_simple = true;
    return est;
}

UnstableProjection unstable_projection(const SubstitutionSequence& seq, int kappa,
                                       const ProjectionOptions& opts) {
    const int m = seq.alphabet_size();
    if (kappa < 1 || kappa > m) throw std::invalid_argument("unstable_projection: kappa out of range");
    if (!seq.two_sided()) throw std::invalid_argument("unstable_projection: sequence must be two-sided");
    const int n_fwd = opts.n_forward < 0 ? opts.n_back : opts.n_forward;

    std::mt19937_64 rng(opts.seed);
    Eigen::MatrixXd frame = random_orthogonal(m, kappa, rng);
    // Push a generic frame forward from n_back steps in the past.
    for (long t = -static_cast<long>(opts.n_back) + 1; t <= 0; ++t) {
        frame = factor_as_double(seq, t) * frame;
        Eigen::MatrixXd q;
        Eigen::VectorXd rdiag;
        qr_positive(frame, q, rdiag);
        frame = q;
    }
    Eigen::MatrixXd u = frame; // m x kappa, orthonormal

    // Small right-singular directions of the forward product approximate the
    // complementary Oseledets directions.
    Eigen::MatrixXd fwd = Eigen::MatrixXd::Identity(m, m);
    for (long t = 1; t <= n_fwd; ++t) {
        fwd = factor_as_double(seq, t) * fwd;
        double norm = fwd.cwiseAbs().maxCoeff();
        if (norm > 0) fwd /= norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(fwd, Eigen::ComputeFullV);
    Eigen::MatrixXd w = svd.matrixV().leftCols(kappa); // orthogonal complement of the kernel directions

    Eigen::MatrixXd wtu = w.transpose() * u;
    Eigen::JacobiSVD<Eigen::MatrixXd> angles(wtu);
    if (angles.singularValues().minCoeff() < opts.min_angle)
        throw std::runtime_error("unstable_projection: subspace angle below tolerance");

    UnstableProjection out;
    out.kappa = kappa;
    out.basis = u;
    out.p = u * wtu.inverse() * w.transpose();
    out.idempotence_residual = (out.p * out.p - out.p).cwiseAbs().maxCoeff();
    return out;
}

double equivariance_residual(const SubstitutionSequence& seq, long n, const UnstableProjection& at_origin,
                             const UnstableProjection& at_shifted) {
    const int m = seq.alphabet_size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    for (long t = 1; t <= n; ++t) a = factor_as_double(seq, t) * a;
    double denom = a.cwiseAbs().maxCoeff();
    return (a * at_origin.p - at_shifted.p * a).cwiseAbs().maxCoeff() / denom;
}

} // namespace sadic
