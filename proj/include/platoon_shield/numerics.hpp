#ifndef PLATOON_SHIELD_NUMERICS_HPP
#define PLATOON_SHIELD_NUMERICS_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace platoon_shield::numerics {

/// Dense real matrix, row-major storage. Everything in this project is
/// small (at most 8x8), so there is one code path and it is the dense one.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);  // zero-initialized
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> entries() const { return data_; }

    bool is_finite() const;
    bool is_square() const { return rows_ == cols_; }

    /// Max absolute row sum.
    double infinity_norm() const;
    double max_abs() const;

    Matrix transposed() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Multiplies a matrix with a vector given as a span.
std::vector<double> apply(const Matrix& a, std::span<const double> x);

/// Solves A X = B by Gaussian elimination with partial pivoting.
Matrix linear_solve(const Matrix& a, const Matrix& b);

/// State-space quadruple (A, B, C, D) of a continuous-time LTI plant.
struct StateSpacePlant {
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix D;

    /// Throws DimensionError unless A is n x n, B is n x m, C is p x n
    /// and D is p x m.
    void validate() const;
};

/// e^{At} by scaling-and-squaring with a diagonal Pade core.
Matrix mat_exp(const Matrix& a, double t);

/// Exact zero-order-hold discretization of dx = Ac x + Bc u at period ts.
///
/// Uses the augmented-matrix method: exponentiate [[Ac, Bc], [0, 0]] * ts
/// and read off the top blocks, so a singular Ac needs no special case.
std::pair<Matrix, Matrix> zoh_discretize(const Matrix& ac, const Matrix& bc, double ts);

/// Largest real part over the eigenvalues of A.
double spectral_abscissa(const Matrix& a);

inline bool is_hurwitz(const Matrix& a) { return spectral_abscissa(a) < 0.0; }

struct HinfDetail {
    double norm;             // bisection result
    double sweep_peak;       // largest gain seen on the frequency grid
    double sweep_peak_freq;  // rad/s; 0 means the peak was at DC
};

/// L2-induced norm sup_w sigma_max(C (jwI - A)^{-1} B + D).
///
/// A log-spaced frequency sweep over [1e-4, 1e4] rad/s (plus DC) seeds a
/// bisection on gamma that uses the Hamiltonian imaginary-eigenvalue test.
/// Requires A Hurwitz; throws DomainError otherwise.
HinfDetail hinf_norm_detail(const StateSpacePlant& plant, double tol = 1e-4,
                            std::size_t sweep_points = 2000);

double hinf_norm(const StateSpacePlant& plant, double tol = 1e-4);

}  // namespace platoon_shield::numerics

#endif
