#include "platoon_shield/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "platoon_shield/errors.hpp"

namespace platoon_shield::numerics {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries)
    : rows_(rows), cols_(cols), data_(entries) {
    if (data_.size() != rows * cols) {
        throw DimensionError("Matrix: initializer has " + std::to_string(data_.size()) +
                             " entries, expected " + std::to_string(rows * cols));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool Matrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double Matrix::infinity_norm() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) row += std::abs((*this)(r, c));
        worst = std::max(worst, row);
    }
    return worst;
}

double Matrix::max_abs() const {
    double worst = 0.0;
    for (double x : data_) worst = std::max(worst, std::abs(x));
    return worst;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Matrix +: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Matrix -: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("Matrix *: inner dimensions differ");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const double ark = a(r, k);
            if (ark == 0.0) continue;
            for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

std::vector<double> apply(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw DimensionError("apply: vector length != matrix cols");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) y[r] += a(r, c) * x[c];
    return y;
}

Matrix linear_solve(const Matrix& a, const Matrix& b) {
    if (!a.is_square()) throw DimensionError("linear_solve: A must be square");
    if (a.rows() != b.rows()) throw DimensionError("linear_solve: A and B row counts differ");
    const std::size_t n = a.rows();
    Matrix lu = a;
    Matrix x = b;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (lu(pivot, col) == 0.0) throw NumericError("linear_solve: singular matrix");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu(pivot, c), lu(col, c));
            for (std::size_t c = 0; c < x.cols(); ++c) std::swap(x(pivot, c), x(col, c));
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = lu(r, col) / lu(col, col);
            if (f == 0.0) continue;
            lu(r, col) = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) lu(r, c) -= f * lu(col, c);
            for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) -= f * x(col, c);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            double s = x(col, c);
            for (std::size_t k = col + 1; k < n; ++k) s -= lu(col, k) * x(k, c);
            x(col, c) = s / lu(col, col);
        }
    }
    return x;
}

void StateSpacePlant::validate() const {
    if (!A.is_square()) throw DimensionError("StateSpacePlant: A must be square");
    const std::size_t n = A.rows();
    if (B.rows() != n) throw DimensionError("StateSpacePlant: B row count != state dimension");
    if (C.cols() != n) throw DimensionError("StateSpacePlant: C column count != state dimension");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw DimensionError("StateSpacePlant: D must be outputs x inputs");
    if (!A.is_finite() || !B.is_finite() || !C.is_finite() || !D.is_finite())
        throw DomainError("StateSpacePlant: non-finite entries");
}

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    return out;
}

// Eigenvalues of a real dense matrix (Hessenberg reduction + QR iteration,
// as implemented by Eigen's EigenSolver).
Eigen::VectorXcd eigenvalues_of(const Matrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue iteration did not converge (n = " + std::to_string(m.rows()) + ")");
    }
    return solver.eigenvalues();
}

// Diagonal [6/6] Pade approximant of e^B, valid for ||B|| <= ~1.
Matrix pade6(const Matrix& b) {
    static constexpr double kCoeff[7] = {
        1.0, 1.0 / 2.0, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
    const std::size_t n = b.rows();
    Matrix power = Matrix::identity(n);
    Matrix num(n, n);
    Matrix den(n, n);
    for (int j = 0; j <= 6; ++j) {
        if (j > 0) power = power * b;
        num += kCoeff[j] * power;
        den += (j % 2 == 0 ? kCoeff[j] : -kCoeff[j]) * power;
    }
    return linear_solve(den, num);
}

}  // namespace

Matrix mat_exp(const Matrix& a, double t) {
    if (!a.is_square()) throw DimensionError("mat_exp: matrix must be square");
    if (!a.is_finite() || !std::isfinite(t)) throw DomainError("mat_exp: non-finite input");

    const std::size_t n = a.rows();
    Matrix scaled = a;
    scaled *= t;

    const double norm = scaled.infinity_norm();
    if (norm == 0.0) return Matrix::identity(n);

    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    scaled *= std::ldexp(1.0, -squarings);

    Matrix result = pade6(scaled);
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

std::pair<Matrix, Matrix> zoh_discretize(const Matrix& ac, const Matrix& bc, double ts) {
    if (!ac.is_square()) throw DimensionError("zoh_discretize: Ac must be square");
    if (bc.rows() != ac.rows()) throw DimensionError("zoh_discretize: Bc row count != state dimension");
    if (!(ts > 0.0) || !std::isfinite(ts)) throw DomainError("zoh_discretize: sampling period must be positive");

    const std::size_t n = ac.rows();
    const std::size_t m = bc.cols();
    Matrix augmented(n + m, n + m);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) augmented(r, c) = ac(r, c);
        for (std::size_t c = 0; c < m; ++c) augmented(r, n + c) = bc(r, c);
    }
    const Matrix e = mat_exp(augmented, ts);

    Matrix ad(n, n);
    Matrix bd(n, m);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) ad(r, c) = e(r, c);
        for (std::size_t c = 0; c < m; ++c) bd(r, c) = e(r, n + c);
    }
    return {std::move(ad), std::move(bd)};
}

double spectral_abscissa(const Matrix& a) {
    if (!a.is_square()) throw DimensionError("spectral_abscissa: matrix must be square");
    if (!a.is_finite()) throw DomainError("spectral_abscissa: non-finite entries");
    const Eigen::VectorXcd ev = eigenvalues_of(a);
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) worst = std::max(worst, ev(i).real());
    return worst;
}

namespace {

// sigma_max of the frequency response C (jwI - A)^{-1} B + D.
double gain_at(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& c,
               const Eigen::MatrixXd& d, double omega) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXcd shifted = -a.cast<std::complex<double>>();
    for (Eigen::Index i = 0; i < n; ++i) shifted(i, i) += std::complex<double>(0.0, omega);
    const Eigen::MatrixXcd response =
        c.cast<std::complex<double>>() * shifted.partialPivLu().solve(b.cast<std::complex<double>>()) +
        d.cast<std::complex<double>>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(response);
    return svd.singularValues()(0);
}

// True iff gamma <= ||G||_inf, decided by whether the Hamiltonian matrix
// associated with gamma has an eigenvalue on the imaginary axis.
bool gain_reached(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& c,
                  const Eigen::MatrixXd& d, double gamma) {
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.cols();
    const Eigen::Index p = c.rows();
    const Eigen::MatrixXd r = gamma * gamma * Eigen::MatrixXd::Identity(m, m) - d.transpose() * d;
    const Eigen::MatrixXd r_inv = r.inverse();

    Eigen::MatrixXd h(2 * n, 2 * n);
    const Eigen::MatrixXd a_hat = a + b * r_inv * d.transpose() * c;
    h.topLeftCorner(n, n) = a_hat;
    h.topRightCorner(n, n) = b * r_inv * b.transpose();
    h.bottomLeftCorner(n, n) = -c.transpose() * (Eigen::MatrixXd::Identity(p, p) + d * r_inv * d.transpose()) * c;
    h.bottomRightCorner(n, n) = -a_hat.transpose();

    Eigen::EigenSolver<Eigen::MatrixXd> solver(h, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericError("hinf_norm: Hamiltonian eigenvalue iteration failed");
    const Eigen::VectorXcd ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double scale = std::max(1.0, std::abs(ev(i)));
        if (std::abs(ev(i).real()) <= 1e-8 * scale) return true;
    }
    return false;
}

}  // namespace

HinfDetail hinf_norm_detail(const StateSpacePlant& plant, double tol, std::size_t sweep_points) {
    plant.validate();
    if (!(tol > 0.0)) throw DomainError("hinf_norm: tolerance must be positive");
    if (!is_hurwitz(plant.A)) throw DomainError("hinf_norm: A is not Hurwitz, the norm is unbounded");
    if (sweep_points < 2) throw DomainError("hinf_norm: need at least 2 sweep points");

    const Eigen::MatrixXd a = to_eigen(plant.A);
    const Eigen::MatrixXd b = to_eigen(plant.B);
    const Eigen::MatrixXd c = to_eigen(plant.C);
    const Eigen::MatrixXd d = to_eigen(plant.D);

    // DC plus a log grid over [1e-4, 1e4] rad/s.
    double sweep_peak = gain_at(a, b, c, d, 0.0);
    double sweep_peak_freq = 0.0;
    const double lo_exp = -4.0, hi_exp = 4.0;
    for (std::size_t i = 0; i < sweep_points; ++i) {
        const double omega =
            std::pow(10.0, lo_exp + (hi_exp - lo_exp) * static_cast<double>(i) / static_cast<double>(sweep_points - 1));
        const double g = gain_at(a, b, c, d, omega);
        if (g > sweep_peak) {
            sweep_peak = g;
            sweep_peak_freq = omega;
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> dsvd(d);
    const double sigma_d = d.size() > 0 ? dsvd.singularValues()(0) : 0.0;

    double lower = std::max(sweep_peak, sigma_d);
    if (lower == 0.0) return {0.0, 0.0, 0.0};  // zero plant

    // The Hamiltonian test needs gamma strictly above sigma_max(D).
    lower = std::max(lower, sigma_d * (1.0 + 1e-12) + std::numeric_limits<double>::min());
    double upper = 2.0 * lower;
    int growth = 0;
    while (gain_reached(a, b, c, d, upper)) {
        lower = upper;
        upper *= 2.0;
        if (++growth > 60) throw NumericError("hinf_norm: bisection bracket did not close");
    }
    while (upper - lower > tol) {
        const double mid = 0.5 * (lower + upper);
        if (gain_reached(a, b, c, d, mid)) {
            lower = mid;
        } else {
            upper = mid;
        }
    }
    return {0.5 * (lower + upper), sweep_peak, sweep_peak_freq};
}

double hinf_norm(const StateSpacePlant& plant, double tol) {
    return hinf_norm_detail(plant, tol).norm;
}

}  // namespace platoon_shield::numerics
