// Exact arbitrary-precision integer matrices and the integer linear algebra
// the pipeline relies on: determinants, unimodular inverses, Smith form.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sadic/words.hpp"

namespace sadic {

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("IntMatrix: negative dimension");
    }
    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
    static IntMatrix from_columns(const std::vector<PopulationVector>& columns);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    mpz_class& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const mpz_class& at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    bool operator==(const IntMatrix&) const = default;

    IntMatrix operator*(const IntMatrix& rhs) const;
    IntMatrix operator+(const IntMatrix& rhs) const;
    IntMatrix transpose() const;
    IntMatrix pow(unsigned long e) const;

    bool is_square() const { return rows_ == cols_; }
    bool is_nonnegative() const;
    bool is_positive() const;

    mpz_class determinant() const;           // Bareiss, exact
    bool is_unimodular() const;              // |det| == 1
    IntMatrix inverse_unimodular() const;    // throws unless |det| == 1

    std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const;
    std::vector<double> apply(const std::vector<double>& v) const;
    // High-precision matvec; result entries inherit the operand precision.
    std::vector<mpf_class> apply(const std::vector<mpf_class>& v) const;

    PopulationVector column(int j) const;
    std::vector<mpz_class> column_sums() const;

    // l-infinity operator norm = max absolute row sum (exact integer).
    mpz_class linf_norm() const;
    // log of linf_norm computed without overflowing doubles.
    double log_linf_norm() const;

    std::string to_string() const;

private:
    int rows_, cols_;
    std::vector<mpz_class> data_;

    void check_same_shape(const IntMatrix& rhs) const;
};

double log_mpz(const mpz_class& value); // natural log, value > 0

// Elementary divisors d_1 | d_2 | ... of an integer matrix (Smith form
// diagonal, nonnegative, zeros trailing).
std::vector<mpz_class> elementary_divisors(IntMatrix m);

// True iff the integer span of the given vectors is all of Z^m: the matrix
// of columns has m elementary divisors, all equal to 1.
bool generates_lattice(const std::vector<PopulationVector>& vectors);

// Integer solution x of  columns * x = target, if one exists.
std::optional<std::vector<mpz_class>> solve_integer(const std::vector<PopulationVector>& columns,
                                                    const std::vector<mpz_class>& target);

} // namespace sadic
