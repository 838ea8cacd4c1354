#include "gevlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gevlab/quadrature.hpp"

namespace gevlab {
namespace {

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

double segment_pole_distance(double gamma, double a, double b, const std::vector<cplx>& poles) {
    double d = std::numeric_limits<double>::infinity();
    const cplx dir = std::polar(1.0, gamma);
    for (cplx p : poles) {
        double proj = std::real(p * std::conj(dir));
        double t = std::clamp(proj, a, b);
        d = std::min(d, std::abs(p - t * dir));
    }
    return d;
}

}  // namespace

RadialGrid RadialGrid::build(double gamma, double r_max, double scale, const RadialGridSpec& spec,
                             const std::vector<cplx>& poles) {
    if (!(r_max > 0.0) || !(scale > 0.0))
        throw Error(ErrorCode::InvalidArgument, "radial grid needs positive r_max and scale");
    RadialGrid g;
    g.gamma_ = gamma;
    g.scale_ = scale;
    g.order_ = spec.panel_order;
    g.edges_.push_back(0.0);
    const double min_width = 1e-10 * scale;
    double e = 0.0;
    while (e < r_max) {
        double width = (e == 0.0) ? spec.first_panel * scale
                                  : std::min((spec.growth - 1.0) * e, spec.max_width * scale);
        for (int it = 0; it < 3; ++it) {
            double dist = segment_pole_distance(gamma, e, e + width, poles);
            width = std::min(width, std::max(spec.pole_fraction * dist, min_width));
        }
        if (width <= min_width)
            throw Error(ErrorCode::Domain, "radial grid runs into a pole of the prefactor");
        double next = e + width;
        if (next >= r_max || r_max - next < 0.3 * width) next = r_max;
        g.edges_.push_back(next);
        e = next;
    }
    const GaussRule& gl = gauss_legendre(g.order_);
    std::vector<double> bw = barycentric_weights(gl.nodes);
    for (int p = 0; p + 1 < int(g.edges_.size()); ++p) {
        double a = g.edges_[p], b = g.edges_[p + 1];
        std::vector<double> y, w;
        mapped_rule(gl, a, b, y, w);
        g.radii_.insert(g.radii_.end(), y.begin(), y.end());
        g.weights_.insert(g.weights_.end(), w.begin(), w.end());
        g.panel_nodes_.push_back(y);
        g.panel_bary_.push_back(bw);
    }
    // Pole guard.
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poles.size(); ++i) {
        for (std::size_t j = i + 1; j < poles.size(); ++j) gap = std::min(gap, std::abs(poles[i] - poles[j]));
    }
    if (poles.size() == 1) gap = std::abs(poles[0]);
    g.min_pole_distance_ = std::numeric_limits<double>::infinity();
    for (int m = 0; m < g.size(); ++m)
        for (cplx p : poles) g.min_pole_distance_ = std::min(g.min_pole_distance_, std::abs(g.node(m) - p));
    if (!poles.empty() && g.min_pole_distance_ < spec.pole_guard * gap)
        throw Error(ErrorCode::Domain, "grid node closer than the pole guard to a prefactor root");
    return g;
}

cplx RadialGrid::node(int m) const { return std::polar(radii_[m], gamma_); }

int RadialGrid::panel_of(double rho) const {
    auto it = std::upper_bound(edges_.begin(), edges_.end(), rho);
    int p = int(it - edges_.begin()) - 1;
    return std::clamp(p, 0, panels() - 1);
}

void RadialGrid::basis(int p, double rho, double* out) const {
    lagrange_basis(panel_nodes_[p], panel_bary_[p], rho, out);
}

cplx RadialGrid::interpolate(const CVec& values, double rho) const {
    int p = panel_of(rho);
    std::vector<double> l(order_);
    basis(p, rho, l.data());
    cplx s = 0.0;
    for (int q = 0; q < order_; ++q) s += l[q] * values[panel_start(p) + q];
    return s;
}

void ConvolutionOperator::build_row(const RadialGrid& grid, double nu, double xi, int k, int m,
                                    cplx* row) {
    const int N = grid.size();
    const int n = grid.order();
    std::fill(row, row + N, cplx(0.0));
    const double rho = grid.radii()[m];
    const double mu = k * xi + k - 1.0;
    if (mu <= -1.0) throw Error(ErrorCode::InvalidArgument, "convolution needs xi > -1 - ... (mu > -1)");
    const bool mu_int = is_integer(mu);
    const double total = k * (2.0 + nu + xi);
    const cplx pref = std::polar(std::pow(rho, total), total * grid.gamma()) * double(k) / rho;

    const int P = m / n;
    int Pj = P;
    const auto& E = grid.edges();
    if (P > 0 && rho - E[P] < 0.5 * (E[P + 1] - E[P])) Pj = P - 1;
    const double a = E[Pj];

    std::vector<double> l(n);
    auto spread = [&](double y, cplx value) {
        int p = std::min(grid.panel_of(y), P);
        grid.basis(p, y, l.data());
        for (int q = 0; q < n; ++q) row[grid.panel_start(p) + q] += value * l[q];
    };
    auto kernel = [&](double y) {
        return std::pow(1.0 - std::pow(y / rho, k), nu) * std::pow(y / rho, mu);
    };

    for (int p = 0; p < Pj; ++p) {
        if (p == 0 && !mu_int) {
            std::vector<double> y, w;
            mapped_rule(gauss_jacobi(n + 8, 0.0, mu), 0.0, E[1], y, w);
            for (std::size_t g = 0; g < y.size(); ++g)
                spread(y[g], pref * w[g] * std::pow(1.0 - std::pow(y[g] / rho, k), nu) *
                                 std::pow(rho, -mu));
            continue;
        }
        for (int q = 0; q < n; ++q) {
            int idx = grid.panel_start(p) + q;
            double y = grid.radii()[idx];
            row[idx] += pref * grid.weights()[idx] * kernel(y);
        }
    }

    // Segment [a, rho] with the (rho - y)^nu endpoint weight.
    const bool with_origin = (a == 0.0 && !mu_int);
    std::vector<double> y, w;
    mapped_rule(gauss_jacobi(n + 8, nu, with_origin ? mu : 0.0), a, rho, y, w);
    for (std::size_t g = 0; g < y.size(); ++g) {
        double t = y[g] / rho;
        double geo = 0.0;
        for (int i = 0; i < k; ++i) geo += std::pow(t, i);
        double rest = std::pow(rho, -nu) * std::pow(geo, nu) *
                      (with_origin ? std::pow(rho, -mu) : std::pow(t, mu));
        spread(y[g], pref * w[g] * rest);
    }
}

ConvolutionOperator::ConvolutionOperator(const RadialGrid& grid, double nu, double xi, int k, Exec exec)
    : nu_(nu), xi_(xi) {
    if (nu <= -1.0 || xi <= -1.0 - 1e-15)
        throw Error(ErrorCode::InvalidArgument, "convolution exponents must satisfy nu > -1, xi > -1");
    const int N = grid.size();
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R(N, N);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int m = 0; m < N; ++m) build_row(grid, nu, xi, k, m, R.row(m).data());
    } else {
        for (int m = 0; m < N; ++m) build_row(grid, nu, xi, k, m, R.row(m).data());
    }
    M_ = R;
}

cplx LaplaceWeights::apply(const CVec& f) const {
    cplx s = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) s += w[m] * f[m];
    return s;
}

double laplace_reach(double T_abs_max, int k, const LaplaceSpec& spec) {
    return T_abs_max * std::pow(spec.log_tail / spec.Delta, 1.0 / k);
}

LaplaceWeights laplace_weights(const RadialGrid& grid, int k, cplx T, const LaplaceSpec& spec) {
    LaplaceWeights out;
    const double Tabs = std::abs(T);
    if (!(Tabs > 0.0)) throw Error(ErrorCode::Domain, "Laplace transform at T = 0");
    out.cosine = std::cos(k * (grid.gamma() - std::arg(T)));
    if (out.cosine < spec.Delta - 1e-12)
        throw Error(ErrorCode::Domain, "cos(k(gamma - arg T)) = " + std::to_string(out.cosine) +
                                           " below Delta = " + std::to_string(spec.Delta));
    out.w_cut = std::pow(spec.log_tail / out.cosine, 1.0 / k);
    out.tail = std::exp(-out.cosine * std::pow(out.w_cut, k));
    const double rho_cut = Tabs * out.w_cut;
    if (rho_cut > grid.r_max() * (1.0 + 1e-12))
        throw Error(ErrorCode::NonConvergent, "Laplace cutoff " + std::to_string(rho_cut) +
                                                  " exceeds the radial grid reach " +
                                                  std::to_string(grid.r_max()));
    std::vector<double> cuts;
    for (double e : grid.edges())
        if (e < rho_cut) cuts.push_back(e);
    for (double s = spec.step * Tabs; s < rho_cut; s += spec.step * Tabs) cuts.push_back(s);
    cuts.push_back(rho_cut);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> pts;
    for (double c : cuts)
        if (pts.empty() || c - pts.back() > 1e-12 * rho_cut) pts.push_back(c);

    const int n = grid.order();
    out.w.assign(grid.size(), 0.0);
    const GaussRule& gl = gauss_legendre(spec.order);
    const cplx dir = std::polar(1.0, grid.gamma());
    std::vector<double> y, wq, l(n);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        mapped_rule(gl, pts[i], pts[i + 1], y, wq);
        int p = grid.panel_of(0.5 * (pts[i] + pts[i + 1]));
        for (std::size_t g = 0; g < y.size(); ++g) {
            cplx u = y[g] * dir;
            cplx val = double(k) * std::exp(-std::pow(u / T, k)) * wq[g] / y[g];
            grid.basis(p, y[g], l.data());
            for (int q = 0; q < n; ++q) out.w[grid.panel_start(p) + q] += val * l[q];
        }
    }
    return out;
}

std::vector<LaplaceWeights> laplace_weights_many(const RadialGrid& grid, int k,
                                                 const std::vector<cplx>& Ts,
                                                 const LaplaceSpec& spec, Exec exec) {
    std::vector<LaplaceWeights> out(Ts.size());
    if (exec == Exec::Parallel) {
        std::vector<std::string> errors(Ts.size());
        std::vector<int> codes(Ts.size(), -1);
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < int(Ts.size()); ++i) {
            try {
                out[i] = laplace_weights(grid, k, Ts[i], spec);
            } catch (const Error& e) {
                errors[i] = e.what();
                codes[i] = int(e.code());
            }
        }
        for (std::size_t i = 0; i < Ts.size(); ++i)
            if (codes[i] >= 0) throw Error(ErrorCode(codes[i]), errors[i]);
    } else {
        for (std::size_t i = 0; i < Ts.size(); ++i) out[i] = laplace_weights(grid, k, Ts[i], spec);
    }
    return out;
}

}  // namespace gevlab
