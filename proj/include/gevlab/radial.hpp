#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gevlab/common.hpp"

namespace gevlab {

using CVec = Eigen::VectorXcd;

struct RadialGridSpec {
    int panel_order = 16;
    double first_panel = 0.05;   // width of the first panel, in units of `scale`
    double growth = 1.3;         // bound on consecutive edge ratios
    double max_width = 0.5;      // in units of `scale`
    double pole_fraction = 0.4;  // panel width <= pole_fraction * distance to nearest pole
    double pole_guard = 0.05;    // nodes keep >= pole_guard * min pole gap from every pole
};

// Gauss-Legendre panels along the ray arg(tau) = gamma, from 0 to r_max.
class RadialGrid {
public:
    static RadialGrid build(double gamma, double r_max, double scale, const RadialGridSpec& spec,
                            const std::vector<cplx>& poles = {});

    double gamma() const { return gamma_; }
    double scale() const { return scale_; }
    double r_max() const { return edges_.back(); }
    int order() const { return order_; }
    int size() const { return int(radii_.size()); }
    int panels() const { return int(edges_.size()) - 1; }
    const std::vector<double>& edges() const { return edges_; }
    const std::vector<double>& radii() const { return radii_; }
    const std::vector<double>& weights() const { return weights_; }
    cplx node(int m) const;
    int panel_of(double rho) const;
    int panel_start(int p) const { return p * order_; }
    // Lagrange basis of panel p evaluated at rho (order() values).
    void basis(int p, double rho, double* out) const;
    // Interpolate nodal values at radius rho.
    cplx interpolate(const CVec& values, double rho) const;
    double min_pole_distance() const { return min_pole_distance_; }

private:
    double gamma_ = 0.0;
    double scale_ = 1.0;
    int order_ = 16;
    std::vector<double> edges_;
    std::vector<double> radii_;
    std::vector<double> weights_;
    std::vector<std::vector<double>> panel_nodes_;
    std::vector<std::vector<double>> panel_bary_;
    double min_pole_distance_ = 0.0;
};

// Dense operator f -> tau^k int_0^{tau^k} (tau^k - s)^nu s^xi f(s^{1/k}) ds at every node,
// evaluated along the ray as tau^{k(2+nu+xi)} k int_0^1 (1-w^k)^nu w^{k xi + k - 1} f(tau w) dw.
class ConvolutionOperator {
public:
    ConvolutionOperator() = default;
    ConvolutionOperator(const RadialGrid& grid, double nu, double xi, int k, Exec exec = Exec::Parallel);

    CVec apply(const CVec& f) const { return M_ * f; }
    const Eigen::MatrixXcd& matrix() const { return M_; }
    double nu() const { return nu_; }
    double xi() const { return xi_; }

    // Single row: the convolution at node m.
    static void build_row(const RadialGrid& grid, double nu, double xi, int k, int m, cplx* row);

private:
    Eigen::MatrixXcd M_;
    double nu_ = 0.0;
    double xi_ = 0.0;
};

struct LaplaceSpec {
    int order = 16;
    double step = 0.25;      // panel width in w = rho/|T|
    double log_tail = 41.5;  // cutoff where c w^k = log_tail (e^{-41.5} ~ 1e-18)
    double Delta = 0.5;
};

// L(f)(T) = k int_0^inf f(rho e^{i gamma}) exp(-(rho e^{i gamma}/T)^k) drho/rho as nodal weights.
struct LaplaceWeights {
    std::vector<cplx> w;
    double cosine = 0.0;   // cos(k (gamma - arg T))
    double w_cut = 0.0;    // cutoff in w = rho/|T|
    double tail = 0.0;     // exp(-cosine * w_cut^k)

    cplx apply(const CVec& f) const;
};

LaplaceWeights laplace_weights(const RadialGrid& grid, int k, cplx T, const LaplaceSpec& spec);

std::vector<LaplaceWeights> laplace_weights_many(const RadialGrid& grid, int k,
                                                 const std::vector<cplx>& Ts,
                                                 const LaplaceSpec& spec, Exec exec);

// Radius the grid must reach for Laplace evaluations at |T| <= T_abs_max with cos >= Delta.
double laplace_reach(double T_abs_max, int k, const LaplaceSpec& spec);

}  // namespace gevlab
