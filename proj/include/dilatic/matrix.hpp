#ifndef DILATIC_MATRIX_HPP
#define DILATIC_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "dilatic/errors.hpp"

namespace dilatic {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;

/// Dense complex matrix, row-major. The single numeric carrier for every
/// operator in the pipeline (contractions, unitaries, POVM elements,
/// density matrices).
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<double>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const cvector& data() const { return data_; }
    cvector& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(cplx scalar) const;

    cvector apply(const cvector& v) const;

    /// Sub-block [r0, r0+nr) x [c0, c0+nc).
    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

    double max_abs() const;
    double frobenius_norm() const;
    cplx trace() const;

    bool all_finite() const;
    /// max |M - M†| entry; matrix must be square.
    double hermiticity_defect() const;
    /// max |M†M - I| entry.
    double unitarity_defect() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    cvector data_;
};

/// Serial reference kernels, kept as the oracle the OpenMP paths are
/// tested and benchmarked against.
namespace serial {
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
cvector matvec(const ComplexMatrix& a, const cvector& v);
} // namespace serial

/// OpenMP kernels. Fall back to the serial path below a size cutoff
/// (thread spawn costs more than the multiply for the small operators
/// that dominate this workload).
namespace parallel {
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
cvector matvec(const ComplexMatrix& a, const cvector& v);
} // namespace parallel

double vector_norm(const cvector& v);

} // namespace dilatic

#endif
