#include "capsep/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace capsep {

void ProblemParams::validate() const {
    if (!(p > 1.0))
        throw std::invalid_argument("ProblemParams: need p > 1, got p = " + std::to_string(p));
    if (!(q > p - 1.0))
        throw std::invalid_argument("ProblemParams: need q > p - 1, got q = " + std::to_string(q) +
                                    ", p = " + std::to_string(p));
    if (!(beta > 0.0))
        throw std::invalid_argument("ProblemParams: need beta > 0, got beta = " + std::to_string(beta));
    if (epsilon != 1 && epsilon != -1)
        throw std::invalid_argument("ProblemParams: epsilon must be +1 or -1");
    if (N < 2)
        throw std::invalid_argument("ProblemParams: need N >= 2, got N = " + std::to_string(N));
}

double lambda_of_beta(double beta, double p, int N) {
    if (!(beta > 0.0) || !(p > 1.0) || N < 2)
        throw std::invalid_argument("lambda_of_beta: need beta > 0, p > 1, N >= 2");
    return beta * (p - 1.0) + p - static_cast<double>(N);
}

double beta_q(double q, double p) {
    if (!(q > p - 1.0))
        throw std::invalid_argument("beta_q: need q > p - 1");
    return p / (q + 1.0 - p);
}

double q_from_beta(double beta, double p) {
    if (!(beta > 0.0) || !(p > 1.0))
        throw std::invalid_argument("q_from_beta: need beta > 0, p > 1");
    return p * (1.0 + beta) / beta - 1.0;
}

double q_critical(double p, int N) {
    if (!(p > 1.0) || N < 2)
        throw std::invalid_argument("q_critical: need p > 1, N >= 2");
    const double dm1 = static_cast<double>(N - 1);
    if (p >= dm1)
        return std::numeric_limits<double>::infinity();
    return dm1 * p / (dm1 - p) - 1.0;
}

double beta_critical(double p, int N) {
    if (!(p > 1.0) || !(p < static_cast<double>(N - 1)))
        throw std::invalid_argument("beta_critical: need 1 < p < N - 1");
    return (static_cast<double>(N - 1) - p) / p;
}

PohozaevCoeffs pohozaev_coeffs(const ProblemParams& params) {
    params.validate();
    const double p = params.p;
    const double q = params.q;
    const double beta = params.beta;
    const double N = static_cast<double>(params.N);
    const double pb = p * beta + p - N;

    PohozaevCoeffs c;
    c.A = -(N - 1.0) / (q + 1.0) - beta * pb;
    c.B = (N - 1.0 - p) / p + beta * pb;
    c.C = beta * beta * ((N - 1.0) / p - pb * lambda_of_beta(beta, p, params.N));
    return c;
}

PohozaevCoeffs pohozaev_coeffs_factored(double beta, double p, int N) {
    if (!(beta > 0.0))
        throw std::invalid_argument("pohozaev_coeffs_factored: need beta > 0");
    const double bc = beta_critical(p, N);
    const double Nd = static_cast<double>(N);

    PohozaevCoeffs c;
    c.A = -(beta / (beta + 1.0)) * p * (beta + 1.0 - 1.0 / p) * (beta - bc);
    c.B = (beta - bc) * (beta * p - 1.0);
    c.C = beta * beta * (beta - bc) * (1.0 - p) *
          (p * beta - 1.0 - p * (Nd - p) / (p - 1.0));
    return c;
}

} // namespace capsep
