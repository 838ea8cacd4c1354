#pragma once

#include <vector>

namespace gevlab {

// Gauss rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double alpha = 0.0;
    double beta = 0.0;
};

// Rules are cached; the returned reference stays valid for the program lifetime.
const GaussRule& gauss_jacobi(int n, double alpha, double beta);
const GaussRule& gauss_legendre(int n);

// Rule for  integral_a^b (b-y)^alpha (y-a)^beta g(y) dy  mapped from gauss_jacobi.
void mapped_rule(const GaussRule& rule, double a, double b, std::vector<double>& y,
                 std::vector<double>& w);

// Barycentric weights for Lagrange interpolation through arbitrary distinct nodes.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

// Lagrange basis values l_j(x) at x (exact 1 at a node).
void lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bw, double x,
                    double* out);

}  // namespace gevlab
