#include "sadic/int_matrix.hpp"

#include <cmath>
#include <sstream>

namespace sadic {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
    if (rows.empty()) throw std::invalid_argument("from_rows: empty");
    IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols()) throw std::invalid_argument("from_rows: ragged rows");
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<PopulationVector>& columns) {
    if (columns.empty()) throw std::invalid_argument("from_columns: empty");
    IntMatrix m(static_cast<int>(columns[0].size()), static_cast<int>(columns.size()));
    for (int j = 0; j < m.cols(); ++j) {
        if (static_cast<int>(columns[j].size()) != m.rows())
            throw std::invalid_argument("from_columns: ragged columns");
        for (int i = 0; i < m.rows(); ++i) m.at(i, j) = columns[j][i];
    }
    return m;
}

void IntMatrix::check_same_shape(const IntMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("IntMatrix: shape mismatch");
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("IntMatrix: product shape mismatch");
    IntMatrix out(rows_, rhs.cols_);
    mpz_class acc;
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < rhs.cols_; ++j) {
            acc = 0;
            for (int k = 0; k < cols_; ++k) acc += at(i, k) * rhs.at(k, j);
            out.at(i, j) = acc;
        }
    }
    return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const {
    check_same_shape(rhs);
    IntMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j) + rhs.at(i, j);
    return out;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

IntMatrix IntMatrix::pow(unsigned long e) const {
    if (!is_square()) throw std::invalid_argument("pow: matrix not square");
    IntMatrix result = identity(rows_);
    IntMatrix base = *this;
    while (e > 0) {
        if (e & 1UL) result = result * base;
        base = base * base;
        e >>= 1UL;
    }
    return result;
}

bool IntMatrix::is_nonnegative() const {
    for (const auto& v : data_)
        if (v < 0) return false;
    return true;
}

bool IntMatrix::is_positive() const {
    for (const auto& v : data_)
        if (v <= 0) return false;
    return true;
}

mpz_class IntMatrix::determinant() const {
    if (!is_square()) throw std::invalid_argument("determinant: matrix not square");
    const int n = rows_;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IntMatrix a = *this;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k) == 0) {
            int pivot = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) { pivot = i; break; }
            if (pivot < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(pivot, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                mpz_class num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a.at(i, k) = 0;
        }
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : mpz_class(-a.at(n - 1, n - 1));
}

bool IntMatrix::is_unimodular() const {
    mpz_class d = determinant();
    return d == 1 || d == -1;
}

IntMatrix IntMatrix::inverse_unimodular() const {
    mpz_class det = determinant();
    if (det != 1 && det != -1)
        throw std::invalid_argument("inverse_unimodular: determinant is not +-1");
    const int n = rows_;
    // Adjugate via cofactors; matrices here are small (m <= 35).
    IntMatrix inv(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc) = at(r, c);
                    ++cc;
                }
                ++rr;
            }
            mpz_class cof = minor.determinant();
            if ((i + j) % 2 != 0) cof = -cof;
            inv.at(j, i) = det == 1 ? cof : mpz_class(-cof);
        }
    }
    return inv;
}

std::vector<mpz_class> IntMatrix::apply(const std::vector<mpz_class>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("apply: size mismatch");
    std::vector<mpz_class> out(rows_, 0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
    return out;
}

std::vector<double> IntMatrix::apply(const std::vector<double>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("apply: size mismatch");
    std::vector<double> out(rows_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[i] += at(i, j).get_d() * v[j];
    return out;
}

std::vector<mpf_class> IntMatrix::apply(const std::vector<mpf_class>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("apply: size mismatch");
    std::vector<mpf_class> out;
    out.reserve(rows_);
    const mp_bitcnt_t prec = v.empty() ? mpf_get_default_prec() : v[0].get_prec();
    for (int i = 0; i < rows_; ++i) {
        mpf_class acc(0, prec);
        mpf_class term(0, prec);
        for (int j = 0; j < cols_; ++j) {
            term = v[j];
            mpf_class factor(at(i, j), prec);
            acc += term * factor;
        }
        out.push_back(acc);
    }
    return out;
}

PopulationVector IntMatrix::column(int j) const {
    PopulationVector col(rows_);
    for (int i = 0; i < rows_; ++i) col[i] = at(i, j);
    return col;
}

std::vector<mpz_class> IntMatrix::column_sums() const {
    std::vector<mpz_class> sums(cols_, 0);
    for (int j = 0; j < cols_; ++j)
        for (int i = 0; i < rows_; ++i) sums[j] += at(i, j);
    return sums;
}

mpz_class IntMatrix::linf_norm() const {
    mpz_class best = 0;
    for (int i = 0; i < rows_; ++i) {
        mpz_class row_sum = 0;
        for (int j = 0; j < cols_; ++j) row_sum += abs(at(i, j));
        if (row_sum > best) best = row_sum;
    }
    return best;
}

double log_mpz(const mpz_class& value) {
    if (value <= 0) throw std::invalid_argument("log_mpz: nonpositive value");
    signed long exp2 = 0;
    double mantissa = mpz_get_d_2exp(&exp2, value.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exp2) * std::log(2.0);
}

double IntMatrix::log_linf_norm() const { return log_mpz(linf_norm()); }

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

namespace {

struct SmithResult {
    IntMatrix d;     // diagonalized matrix
    IntMatrix left;  // unimodular U with  U * M * V = D
    IntMatrix right; // unimodular V
};

// Smith normal form by elementary operations; fine for the small matrices
// (m <= 35, k modest) that arrive here.
SmithResult smith(IntMatrix m) {
    const int rows = m.rows(), cols = m.cols();
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix v = IntMatrix::identity(cols);

    auto swap_rows = [&](int a, int b) {
        for (int j = 0; j < cols; ++j) std::swap(m.at(a, j), m.at(b, j));
        for (int j = 0; j < rows; ++j) std::swap(u.at(a, j), u.at(b, j));
    };
    auto swap_cols = [&](int a, int b) {
        for (int i = 0; i < rows; ++i) std::swap(m.at(i, a), m.at(i, b));
        for (int i = 0; i < cols; ++i) std::swap(v.at(i, a), v.at(i, b));
    };
    auto add_row = [&](int dst, int src, const mpz_class& c) { // row dst += c * row src
        for (int j = 0; j < cols; ++j) m.at(dst, j) += c * m.at(src, j);
        for (int j = 0; j < rows; ++j) u.at(dst, j) += c * u.at(src, j);
    };
    auto add_col = [&](int dst, int src, const mpz_class& c) {
        for (int i = 0; i < rows; ++i) m.at(i, dst) += c * m.at(i, src);
        for (int i = 0; i < cols; ++i) v.at(i, dst) += c * v.at(i, src);
    };
    auto negate_row = [&](int r) {
        for (int j = 0; j < cols; ++j) m.at(r, j) = -m.at(r, j);
        for (int j = 0; j < rows; ++j) u.at(r, j) = -u.at(r, j);
    };

    const int t = std::min(rows, cols);
    for (int p = 0; p < t; ++p) {
        // Find a nonzero pivot of minimal absolute value in the submatrix.
        int pi = -1, pj = -1;
        mpz_class best;
        for (int i = p; i < rows; ++i)
            for (int j = p; j < cols; ++j)
                if (m.at(i, j) != 0) {
                    mpz_class a = abs(m.at(i, j));
                    if (pi < 0 || a < best) { best = a; pi = i; pj = j; }
                }
        if (pi < 0) break; // all zero
        swap_rows(p, pi);
        swap_cols(p, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = p + 1; i < rows; ++i) {
                if (m.at(i, p) == 0) continue;
                mpz_class q = m.at(i, p) / m.at(p, p); // truncated division
                add_row(i, p, -q);
                if (m.at(i, p) != 0) { swap_rows(p, i); clean = false; }
            }
            for (int j = p + 1; j < cols; ++j) {
                if (m.at(p, j) == 0) continue;
                mpz_class q = m.at(p, j) / m.at(p, p);
                add_col(j, p, -q);
                if (m.at(p, j) != 0) { swap_cols(p, j); clean = false; }
            }
        }
        // Enforce the divisibility chain: pivot must divide the remaining block.
        for (int i = p + 1; i < rows && m.at(p, p) != 0; ++i) {
            for (int j = p + 1; j < cols; ++j) {
                if (m.at(i, j) % m.at(p, p) != 0) {
                    add_row(p, i, 1);
                    // Re-run the cleanup for this pivot.
                    i = rows; // break outer
                    clean = false;
                    break;
                }
            }
        }
        if (!clean) { --p; continue; }
        if (m.at(p, p) < 0) negate_row(p);
    }
    return {std::move(m), std::move(u), std::move(v)};
}

} // namespace

std::vector<mpz_class> elementary_divisors(IntMatrix m) {
    SmithResult s = smith(std::move(m));
    std::vector<mpz_class> out;
    const int t = std::min(s.d.rows(), s.d.cols());
    for (int p = 0; p < t; ++p) out.push_back(s.d.at(p, p));
    return out;
}

bool generates_lattice(const std::vector<PopulationVector>& vectors) {
    if (vectors.empty()) return false;
    const std::size_t m = vectors[0].size();
    if (vectors.size() < m) return false;
    std::vector<mpz_class> divisors = elementary_divisors(IntMatrix::from_columns(vectors));
    std::size_t ones = 0;
    for (const auto& d : divisors)
        if (d == 1) ++ones;
    return ones == m;
}

std::optional<std::vector<mpz_class>> solve_integer(const std::vector<PopulationVector>& columns,
                                                    const std::vector<mpz_class>& target) {
    IntMatrix mat = IntMatrix::from_columns(columns);
    if (static_cast<int>(target.size()) != mat.rows()) throw std::invalid_argument("solve_integer: size mismatch");
    SmithResult s = smith(mat);
    std::vector<mpz_class> rhs = s.left.apply(target);
    const int k = mat.cols();
    std::vector<mpz_class> y(k, 0);
    const int t = std::min(mat.rows(), k);
    for (int i = 0; i < mat.rows(); ++i) {
        if (i < t && s.d.at(i, i) != 0) {
            if (rhs[i] % s.d.at(i, i) != 0) return std::nullopt;
            y[i] = rhs[i] / s.d.at(i, i);
        } else if (rhs[i] != 0) {
            return std::nullopt;
        }
    }
    return s.right.apply(y);
}

} // namespace sadic
