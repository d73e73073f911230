#ifndef HCD_LINALG_HPP
#define HCD_LINALG_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcd/graph.hpp"

namespace hcd {

// Minimal dense row-major matrix; only the sizes used here (test fixtures,
// block matrices, Krylov projections) ever materialize one.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    static Matrix identity(int n);
    Matrix transposed() const;
    bool symmetric(double tol = 0.0) const;
};

Matrix matmul(const Matrix& a, const Matrix& b);

// Thrown when an iterative solver fails to meet its tolerance; carries the
// best residual it reached.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& msg, double attained)
        : std::runtime_error(msg), attained_residual(attained) {}
    double attained_residual;
};

// Matrix-free operator.  apply() is instrumented: it counts invocations and
// accumulates work in units of "edge visits" (the operator's nonzero cost per
// apply), which is what the complexity accounting compares.
class LinearOperator {
public:
    using ApplyFn = std::function<void(const double*, double*)>;

    LinearOperator() = default;
    LinearOperator(std::int64_t dim, bool symmetric, std::int64_t work_per_apply, ApplyFn fn)
        : dim_(dim), symmetric_(symmetric), work_(work_per_apply), fn_(std::move(fn)) {}

    std::int64_t dim() const { return dim_; }
    bool symmetric() const { return symmetric_; }
    std::int64_t work_per_apply() const { return work_; }

    void apply(const double* x, double* y) const {
        ++applies_;
        work_done_ += work_;
        fn_(x, y);
    }

    std::int64_t applies() const { return applies_; }
    std::int64_t work_done() const { return work_done_; }
    void reset_counters() const { applies_ = 0; work_done_ = 0; }

private:
    std::int64_t dim_ = 0;
    bool symmetric_ = false;
    std::int64_t work_ = 0;
    ApplyFn fn_;
    mutable std::int64_t applies_ = 0;
    mutable std::int64_t work_done_ = 0;
};

// Operators over a graph capture it by reference; callers keep the graph
// alive for the operator's lifetime.
LinearOperator adjacency_operator(const Graph& g);
// Dense matrices are captured by value (these are small test/block matrices).
LinearOperator dense_operator(Matrix m, bool symmetric);
// L_tau = D_tau^{-1/2} (A + tau*(dbar/n) 11^T) D_tau^{-1/2} with
// d_tau,i = d_i + tau*dbar.  Any zero d_tau entry is an error.
LinearOperator regularized_laplacian_op(const Graph& g, double tau);
// base + c*I (base's apply function is copied; counters are the new op's own).
LinearOperator shifted_operator(const LinearOperator& base, double c);
// 2n x 2n block operator [[0, D-I], [-I, A]] acting on stacked (x, y).
LinearOperator nonbacktracking_op(const Graph& g);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    // ||A v - value v||_2 / max(1, |value_1|); every returned pair satisfies
    // residual <= tol.
    double residual = 0.0;
};

// Top-k eigenpairs by |value| (multiplicities included) of a symmetric
// operator, via Lanczos with full reorthogonalization and deflated restarts.
// Deterministic for a fixed seed.  Throws SolverError on non-convergence.
std::vector<EigenPair> lanczos_extreme(const LinearOperator& op, int k, double tol = 1e-8,
                                       int max_iter = 500, std::uint64_t seed = 12345);

// Flip v so its first nonzero coordinate is >= 0.
void canonicalize_sign(std::vector<double>& v);

struct SecondEigen {
    EigenPair first;
    EigenPair second;   // second largest by |value|, sign-canonicalized
    bool degenerate_gap = false;  // ||lambda_2| - |lambda_3|| below gap_tol
};
// Rank-2-by-magnitude eigenpair, extracted from the top three (top min(3, n)).
SecondEigen second_by_magnitude(const LinearOperator& op, double tol = 1e-8,
                                std::uint64_t seed = 12345, double gap_tol = 1e-12);
SecondEigen second_eigvec_adjacency(const Graph& g, double tol = 1e-8,
                                    std::uint64_t seed = 12345);

struct RealPartsResult {
    std::vector<double> values;  // leading real parts, descending
    double residual = 0.0;       // max Arnoldi residual estimate over the wanted values
    int restarts = 0;
    std::int64_t applies = 0;
    std::int64_t work = 0;
};
// Real parts of the `count` eigenvalues of largest real part of a (generally
// nonsymmetric) operator.  Explicitly restarted Arnoldi; converges on Ritz
// residuals or on real-part stability across restarts.  `subspace` is the
// starting Krylov dimension; prolonged stagnation doubles it (capped) before
// the restart budget runs out.
RealPartsResult arnoldi_leading_real(const LinearOperator& op, int count, double tol = 1e-8,
                                     int subspace = 30, int max_restarts = 80,
                                     std::uint64_t seed = 12345);

RealPartsResult nb_leading_real_parts(const Graph& g, int count, double tol = 1e-8,
                                      std::uint64_t seed = 12345);
// sum(d_i^2)/sum(d_i) - 1; requires at least one edge.
double nb_norm_estimate(const Graph& g);

// ---- small dense solvers (library side; the brute-force test oracles are a
// separate implementation in the test suite) ----

struct SymEigResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j pairs with values[j]
};
// Implicit-shift QL on a symmetric tridiagonal matrix.
SymEigResult sym_tridiag_eig(std::vector<double> diag, std::vector<double> sub);
// Householder tridiagonalization + QL; for the small dense blocks used by
// the block-tree builder and the analytic checks.
SymEigResult dense_sym_eig(const Matrix& a);
// Eigenvalues of an upper-Hessenberg matrix, Francis double-shift QR.
std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix h);
// General real matrix: Householder reduction to Hessenberg, then the above.
std::vector<std::complex<double>> dense_eigenvalues(Matrix a);

}  // namespace hcd

#endif
