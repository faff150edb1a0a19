#include "telecert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace telecert {

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    ComplexMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c) throw std::invalid_argument("ragged row list");
        int j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("dimension mismatch");
    ComplexMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("dimension mismatch");
    ComplexMatrix r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("dimension mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("dimension mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("dimension mismatch in product");
    ComplexMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const Complex aik = (*this)(i, k);
            if (aik == Complex{}) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

ComplexMatrix ComplexMatrix::operator*(Complex s) const {
    ComplexMatrix r = *this;
    for (auto& v : r.data_) v *= s;
    return r;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix r = *this;
    for (auto& v : r.data_) v = std::conj(v);
    return r;
}

Complex ComplexMatrix::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace of non-square matrix");
    Complex t{};
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::hermiticity_error() const {
    if (rows_ != cols_) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    return rows_ == cols_ && hermiticity_error() <= tol;
}

ComplexMatrix ComplexMatrix::hermitized() const {
    ComplexMatrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep) {
    if (m.rows() != 4 || m.cols() != 4) throw std::invalid_argument("partial_trace wants 4x4");
    ComplexMatrix r(2, 2);
    // Index (a,b) -> 2a+b with subsystem A first.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int t = 0; t < 2; ++t) {
                if (keep == Subsystem::first)
                    r(i, j) += m(2 * i + t, 2 * j + t);
                else
                    r(i, j) += m(2 * t + i, 2 * t + j);
            }
    return r;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Subsystem which) {
    if (m.rows() != 4 || m.cols() != 4)
        throw std::invalid_argument("partial_transpose wants 4x4");
    ComplexMatrix r(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    if (which == Subsystem::first)
                        r(2 * c + b, 2 * a + d) = m(2 * a + b, 2 * c + d);
                    else
                        r(2 * a + d, 2 * c + b) = m(2 * a + b, 2 * c + d);
                }
    return r;
}

namespace detail {

void eig_sym_real(int n, const std::vector<double>& a_in, std::vector<double>& vals,
                  std::vector<double>& vecs) {
    std::vector<double> a = a_in;
    vecs.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) vecs[static_cast<size_t>(i) * n + i] = 1.0;

    auto at = [&](std::vector<double>& m, int i, int j) -> double& {
        return m[static_cast<size_t>(i) * n + j];
    };

    double norm = 0.0;
    for (double v : a) norm += v * v;
    norm = std::sqrt(norm);
    const double stop = std::max(1e-300, 1e-30 * norm * norm);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
        if (2.0 * off <= stop) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = at(a, p, p), aqq = at(a, q, q);
                at(a, p, p) = app - t * apq;
                at(a, q, q) = aqq + t * apq;
                at(a, p, q) = at(a, q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = at(a, r, p), arq = at(a, r, q);
                        at(a, r, p) = at(a, p, r) = arp - s * (arq + tau * arp);
                        at(a, r, q) = at(a, q, r) = arq + s * (arp - tau * arq);
                    }
                    const double vrp = at(vecs, r, p), vrq = at(vecs, r, q);
                    at(vecs, r, p) = vrp - s * (vrq + tau * vrp);
                    at(vecs, r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    vals.resize(n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = at(a, i, i);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });

    std::vector<double> sorted_vecs(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        vals[k] = diag[order[k]];
        for (int r = 0; r < n; ++r)
            sorted_vecs[static_cast<size_t>(r) * n + k] = at(vecs, r, order[k]);
    }
    vecs.swap(sorted_vecs);
}

}  // namespace detail

EigResult hermitian_eig(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eig wants square input");
    if (h.hermiticity_error() > 1e-10)
        throw std::invalid_argument("hermitian_eig: input not Hermitian within 1e-10");
    const int n = h.rows();
    const int m = 2 * n;

    // Real symmetric embedding [[Re, -Im], [Im, Re]]; every eigenvalue of h
    // appears twice.
    std::vector<double> e(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Complex v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            e[static_cast<size_t>(i) * m + j] = v.real();
            e[static_cast<size_t>(i + n) * m + j + n] = v.real();
            e[static_cast<size_t>(i) * m + j + n] = -v.imag();
            e[static_cast<size_t>(i + n) * m + j] = v.imag();
        }

    std::vector<double> vals, vecs;
    detail::eig_sym_real(m, e, vals, vecs);

    EigResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);

    double scale = 1.0;
    for (double v : vals) scale = std::max(scale, std::abs(v));
    const double cluster_tol = 1e-8 * scale;

    // Real eigenvector (x; y) maps to the complex eigenvector x + iy. Paired
    // copies are complex-parallel, so within each eigenvalue cluster keep a
    // Gram-Schmidt-independent half of the candidates.
    int accepted = 0;
    int pos = 0;
    while (pos < m && accepted < n) {
        int end = pos + 1;
        while (end < m && vals[end] - vals[end - 1] <= cluster_tol) ++end;
        const int want = (end - pos) / 2;

        std::vector<std::vector<Complex>> basis;
        for (int c = pos; c < end && static_cast<int>(basis.size()) < want; ++c) {
            std::vector<Complex> v(n);
            for (int r = 0; r < n; ++r)
                v[r] = Complex(vecs[static_cast<size_t>(r) * m + c],
                               vecs[static_cast<size_t>(r + n) * m + c]);
            for (const auto& b : basis) {
                Complex ip{};
                for (int r = 0; r < n; ++r) ip += std::conj(b[r]) * v[r];
                for (int r = 0; r < n; ++r) v[r] -= ip * b[r];
            }
            double nrm = 0.0;
            for (const auto& x : v) nrm += std::norm(x);
            nrm = std::sqrt(nrm);
            if (nrm < 1e-6) continue;
            for (auto& x : v) x /= nrm;
            basis.push_back(std::move(v));
        }
        for (int k = 0; k < static_cast<int>(basis.size()) && accepted < n; ++k) {
            out.eigenvalues[accepted] = 0.5 * (vals[pos + 2 * k] + vals[pos + 2 * k + 1]);
            for (int r = 0; r < n; ++r) out.eigenvectors(r, accepted) = basis[k][r];
            ++accepted;
        }
        pos = end;
    }
    if (accepted != n) throw std::runtime_error("hermitian_eig: eigenvector extraction failed");
    return out;
}

double trace_norm(const ComplexMatrix& m) {
    if (m.hermiticity_error() > 1e-10)
        throw std::invalid_argument("trace_norm: input not Hermitian within 1e-10");
    const auto eig = hermitian_eig(m);
    double s = 0.0;
    for (double v : eig.eigenvalues) s += std::abs(v);
    return s;
}

double min_eigenvalue(const ComplexMatrix& m) {
    return hermitian_eig(m).eigenvalues.front();
}

bool is_psd(const ComplexMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

}  // namespace telecert
