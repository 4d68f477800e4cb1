#pragma once

#include <vector>

namespace collarspec {

// Symmetric tridiagonal matrix: diag[i], off[i] = A(i,i+1).
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off; // size diag.size()-1
};

// All eigenvalues, ascending.  Implicit-shift QL iteration.
std::vector<double> tridiag_eigenvalues(Tridiagonal m);

// Number of eigenvalues strictly below x (Sturm sequence count).
int tridiag_count_below(const Tridiagonal& m, double x);

// Eigenvector by inverse iteration from the shift `lambda`; unit 2-norm.
std::vector<double> tridiag_eigenvector(const Tridiagonal& m, double lambda);

} // namespace collarspec
