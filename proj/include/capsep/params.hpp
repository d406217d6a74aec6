// Closed-form exponents and coefficient formulas for separable solutions
// u(x) = |x|^{-beta} omega(x/|x|) of the quasilinear Lane-Emden equation
// -div(|grad u|^{p-2} grad u) = eps u^q on a cone in R^N.

#ifndef CAPSEP_PARAMS_HPP
#define CAPSEP_PARAMS_HPP

namespace capsep {

/// Parameter bundle for the reduced equation on a spherical domain.
/// The exponent beta is kept independent of q: the integral identity is
/// valid for any beta, while the separable ansatz forces beta = beta_q.
struct ProblemParams {
    double p = 2.0;      ///< p-Laplacian exponent, p > 1
    double q = 3.0;      ///< nonlinearity exponent, q > p - 1
    double beta = 1.0;   ///< decay exponent, beta > 0
    int epsilon = 1;     ///< +1 reaction (source), -1 absorption
    int N = 3;           ///< ambient space dimension, N >= 2

    /// Sphere dimension of S^{N-1}.
    int d() const { return N - 1; }

    /// Throws std::invalid_argument when any admissibility condition fails.
    void validate() const;
};

/// Coefficients of the integral identity; all finite for admissible input.
struct PohozaevCoeffs {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

/// lambda(beta) = beta(p-1) + p - N, the zeroth-order exponent combination.
double lambda_of_beta(double beta, double p, int N);

/// Scaling exponent beta_q = p/(q+1-p) forced by the separable form.
double beta_q(double q, double p);

/// Inverse of beta_q: the q with q+1 = p(1+beta)/beta.
double q_from_beta(double beta, double p);

/// Critical exponent (N-1)p/(N-1-p) - 1, or +infinity when p >= N-1.
double q_critical(double p, int N);

/// Critical decay exponent beta_c = (N-1-p)/p; requires 1 < p < N-1.
double beta_critical(double p, int N);

/// Expanded coefficients A(beta), B(beta), C(beta) of the identity.
/// Valid for any admissible (p, q, beta, N); beta need not equal beta_q.
PohozaevCoeffs pohozaev_coeffs(const ProblemParams& params);

/// Factored coefficients under the coupling q+1 = p(1+beta)/beta,
/// each carrying the common factor (beta - beta_c). Requires 1 < p < N-1.
PohozaevCoeffs pohozaev_coeffs_factored(double beta, double p, int N);

} // namespace capsep

#endif
