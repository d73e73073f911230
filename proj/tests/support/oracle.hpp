#ifndef HCD_TESTS_SUPPORT_ORACLE_HPP
#define HCD_TESTS_SUPPORT_ORACLE_HPP

// Brute-force dense solvers used as independent oracles by the test suite.
// They deliberately take different algorithmic routes from the library's
// dense solvers (cyclic Jacobi instead of Householder+QL; complex
// single-shift QR with Givens rotations instead of Francis double-shift), so
// agreement between the two is meaningful evidence of correctness.

#include <complex>
#include <vector>

#include "hcd/graph.hpp"
#include "hcd/linalg.hpp"

namespace hcd::test {

struct JacobiResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j pairs with values[j]
};

// Cyclic Jacobi rotations on a dense symmetric matrix.
JacobiResult jacobi_sym_eig(const Matrix& a);

// All eigenvalues of a general real square matrix: complex Givens reduction
// to Hessenberg form, then explicit single-shift (Wilkinson) QR.
std::vector<std::complex<double>> qr_eigenvalues(const Matrix& a);

// Apply the operator to every basis vector.
Matrix materialize(const LinearOperator& op);

// Explicit dense 2n x 2n non-backtracking block matrix [[0, D-I], [-I, A]].
Matrix nb_block_matrix(const Graph& g);

// Real parts of the eigenvalues, sorted descending.
std::vector<double> real_parts_descending(const std::vector<std::complex<double>>& values);

}  // namespace hcd::test

#endif
