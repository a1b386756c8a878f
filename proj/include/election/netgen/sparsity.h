#ifndef ELECTION_NETGEN_SPARSITY_H_
#define ELECTION_NETGEN_SPARSITY_H_

namespace election::netgen {

// Regularized lower incomplete gamma P(a, x).
double RegularizedGammaP(double a, double x);

// CDF of the chi-squared distribution with `dof` degrees of freedom.
double ChiSquaredCdf(double x, int dof);

// Inverse of ChiSquaredCdf by bisection, absolute tolerance 1e-12.
double ChiSquaredQuantile(double p, int dof);

// Squared-distance threshold for which two points drawn from N(0, I/d) are
// within reach with probability `beta`: (2/d) F_d^-1(beta).
// Throws DomainError unless 0 < beta < 1 and d >= 1.
double DeltaForSparsity(double beta, int d);

}  // namespace election::netgen

#endif  // ELECTION_NETGEN_SPARSITY_H_
