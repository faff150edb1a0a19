#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace telecert {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Sized for the 2x2..16x16 problems this
/// toolkit works with; not meant for large-scale linear algebra.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }
    ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != static_cast<size_t>(rows) * cols)
            throw std::invalid_argument("entry count does not match dimensions");
    }

    static ComplexMatrix zero(int rows, int cols) { return ComplexMatrix(rows, cols); }
    static ComplexMatrix identity(int n);
    /// Build from nested initializer rows; throws on ragged input.
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Complex& operator()(int i, int j) const {
        return data_[static_cast<size_t>(i) * cols_ + j];
    }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;
    ComplexMatrix operator*(Complex s) const;
    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    Complex trace() const;
    double max_abs() const;
    /// max |A - A^dag| over entries; 0 for perfectly Hermitian input.
    double hermiticity_error() const;
    bool is_hermitian(double tol = 1e-12) const;
    /// (A + A^dag)/2
    ComplexMatrix hermitized() const;

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> data_;
};

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& m) { return m * s; }

enum class Subsystem { first, second };

/// Standard tensor product; dimensions multiply.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduce a 4x4 two-qubit matrix to the kept qubit; trace preserved.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep);

/// Transpose one tensor factor of a 4x4 matrix; Hermiticity is preserved for
/// Hermitian input.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Subsystem which);

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, unitary
};

/// Eigendecomposition of a Hermitian matrix. Input must be Hermitian within
/// 1e-10. Satisfies H V = V diag(lambda) with reconstruction error <= 1e-10.
EigResult hermitian_eig(const ComplexMatrix& h);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

/// True iff the minimum eigenvalue of a Hermitian matrix is >= -tol.
bool is_psd(const ComplexMatrix& m, double tol = 1e-10);
double min_eigenvalue(const ComplexMatrix& m);

namespace detail {

/// Cyclic Jacobi eigendecomposition of a dense real symmetric matrix stored
/// row-major. Eigenvalues ascending, eigenvectors in columns of `vecs`.
void eig_sym_real(int n, const std::vector<double>& a, std::vector<double>& vals,
                  std::vector<double>& vecs);

}  // namespace detail

}  // namespace telecert
