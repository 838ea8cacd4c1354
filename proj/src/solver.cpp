#include "gevlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "gevlab/borel_laplace.hpp"

namespace gevlab {
namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

template <class F>
void for_each_index(int n, Exec exec, F&& body) {
    if (exec == Exec::Serial) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errs(n);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

const double kStencil4[] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
const double kStencil8[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                            4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};

// Arrays along a log line; entries outside the valid window are left as NaN.
using Line = std::vector<cplx>;

struct LineOps {
    const std::vector<cplx>* t;
    double h;
    int order;  // 4 or 8
    int k;

    Line d_u(const Line& v) const {
        const int hw = order / 2;
        const double* c = order == 4 ? kStencil4 : kStencil8;
        const cplx nan(std::nan(""), 0.0);
        Line out(v.size(), nan);
        for (int i = hw; i + hw < int(v.size()); ++i) {
            cplx s = 0.0;
            for (int j = -hw; j <= hw; ++j) s += c[j + hw] * v[i + j];
            out[i] = s / h;
        }
        return out;
    }
    Line euler(Line v, int m) const {
        for (int q = 0; q < m; ++q) {
            v = d_u(v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::pow((*t)[i], k);
        }
        return v;
    }
    Line dt(Line v, int m) const {
        for (int q = 0; q < m; ++q) {
            v = d_u(v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] /= (*t)[i];
        }
        return v;
    }
};

}  // namespace

double scaled_ray(const ProblemParams& p, double gamma, const EpsPoint& eps) {
    return gamma - p.r() * eps.arg;
}

double t_radius(const ProblemParams& p, double Delta) {
    NormParams np = NormParams::from(p);
    return std::pow(Delta / (np.sigma * np.xi_b()), 1.0 / p.k);
}

cplx SolutionField::value(int e, int ti, int zi) const {
    const auto& c = coeff[e][ti];
    cplx s = 0.0, zp = 1.0;
    for (int b = 0; b <= beta_max; ++b) {
        s += c[b] * zp / factorial(b);
        zp *= z[zi];
    }
    return s;
}

double SolutionField::tail(int e, int zi, int k) const {
    const auto& m = majorants[e];
    double q = m.Z0 * std::abs(z[zi]);
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    double lambda = (kPi / 2.0) / std::sin(kPi / (2.0 * k));
    return lambda * m.M * std::pow(q, beta_max + 1) / (1.0 - q);
}

CoefficientEngine make_engine(const ProblemParams& p, const GeometryConfig& g, int sector,
                              const EpsPoint& eps, double t_abs_max, const SolverOptions& opt) {
    const Sector& sec = g.covering.at(sector);
    EpsPoint e{eps.modulus, sec.lift(eps.arg)};
    if (!sec.contains(e.value()))
        throw Error(ErrorCode::Domain, "eps outside sector " + std::to_string(sector));
    LaplaceSpec ls = opt.laplace;
    ls.Delta = g.Delta;
    double r_max = laplace_reach(t_abs_max, p.k, ls) * opt.reach_margin;
    return CoefficientEngine(p, e, scaled_ray(p, g.rays.at(sector), e), r_max, opt.grid,
                             opt.exec);
}

SolutionField assemble_solution(const ProblemParams& p, const GeometryConfig& g, int sector,
                                const std::vector<EpsPoint>& eps, const std::vector<cplx>& t,
                                const std::vector<cplx>& z, const std::vector<InitialDatum>& data,
                                const SolverOptions& opt) {
    SolutionField f;
    f.sector_index = sector;
    f.gamma = g.rays.at(sector);
    f.beta_max = opt.beta_max;
    f.t = t;
    f.z = z;
    const Sector& sec = g.covering.at(sector);
    for (const auto& e : eps) f.eps.push_back({e.modulus, sec.lift(e.arg)});
    const double tr = t_radius(p, g.Delta);
    double tmax = 0.0;
    for (cplx tv : t) {
        if (std::abs(tv) > tr * (1.0 + 1e-12))
            throw Error(ErrorCode::Domain, "|t| = " + std::to_string(std::abs(tv)) +
                                               " exceeds (Delta/(sigma xi(b)))^{1/k} = " +
                                               std::to_string(tr));
        tmax = std::max(tmax, std::abs(tv));
    }
    LaplaceSpec ls = opt.laplace;
    ls.Delta = g.Delta;
    const int ne = int(f.eps.size());
    f.scaled_gamma.resize(ne);
    f.coeff.assign(ne, {});
    f.majorants.resize(ne);
    f.laplace_error.assign(ne, 0.0);
    // Parallelize over eps when there are several; otherwise inside the engine.
    SolverOptions inner = opt;
    if (ne > 1) inner.exec = Exec::Serial;
    for_each_index(ne, opt.exec, [&](int ie) {
        const EpsPoint& e = f.eps[ie];
        CoefficientEngine eng = make_engine(p, g, sector, e, tmax, inner);
        f.scaled_gamma[ie] = eng.grid().gamma();
        CoefficientTable tab = eng.compute(data, opt.beta_max);
        std::vector<double> init = eng.initial_norms(data);
        RayPrefactorBounds rb = ray_prefactor_bounds(eng.prefactors(), eng.grid().gamma());
        MajorantConstants mc = majorant_constants(p, e.modulus, opt.beta_max, rb);
        f.majorants[ie] = majorant_recursion(init, p, e.modulus, mc.C4(), mc.C41, opt.beta_max);
        for (cplx zv : z)
            if (std::abs(zv) * f.majorants[ie].Z0 >= 0.5)
                throw Error(ErrorCode::Domain, "|z| = " + std::to_string(std::abs(zv)) +
                                                   " outside D(0, 1/(2 Z0)), Z0 = " +
                                                   std::to_string(f.majorants[ie].Z0));
        std::vector<LaplaceWeights> lw = laplace_weights_many(eng.grid(), p.k, t, ls, Exec::Serial);
        auto& rows = f.coeff[ie];
        rows.assign(t.size(), std::vector<cplx>(opt.beta_max + 1, 0.0));
        for (std::size_t ti = 0; ti < t.size(); ++ti) {
            f.laplace_error[ie] = std::max(f.laplace_error[ie], lw[ti].tail);
            for (int b = 0; b <= opt.beta_max; ++b) rows[ti][b] = lw[ti].apply(tab.entries[b]);
        }
    });
    for (int ie = 0; ie < ne; ++ie)
        for (int zi = 0; zi < int(z.size()); ++zi) {
            double tl = f.tail(ie, zi, p.k);
            if (tl > opt.tail_tolerance)
                throw Error(ErrorCode::Truncation, "z-tail bound " + std::to_string(tl) +
                                                       " exceeds tolerance at |z| = " +
                                                       std::to_string(std::abs(z[zi])));
        }
    return f;
}

std::vector<cplx> log_line(double theta, double t_min, double h, int n) {
    std::vector<cplx> out;
    for (int j = 0; j < n; ++j) out.push_back(std::polar(t_min * std::exp(j * h), theta));
    return out;
}

ResidualReport pde_residual(const SolutionField& field, const ProblemParams& p,
                            const ResidualOptions& opt) {
    ResidualReport rep;
    const int n = int(field.t.size());
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "residual needs a log line of t values");
    const double h = std::log(std::abs(field.t[1] / field.t[0]));
    for (int j = 1; j < n; ++j) {
        double hj = std::log(std::abs(field.t[j] / field.t[j - 1]));
        if (std::abs(hj - h) > 1e-9 * h || std::abs(std::arg(field.t[j] / field.t[j - 1])) > 1e-12)
            throw Error(ErrorCode::InvalidArgument, "residual needs t on a uniform log line");
    }
    int kmax = 0;
    for (const auto& f : p.forcing) kmax = std::max(kmax, f.kappa0);
    const int apps = std::max(p.s1 + p.s2, kmax);
    const int pad = std::max(opt.pad, 4 * apps);
    const int coarse = 1 << (opt.levels - 1);
    const int nc = (n - 1) / coarse + 1;
    if (nc <= 2 * pad)
        throw Error(ErrorCode::InvalidArgument, "log line too short for the stencil padding");
    const int B = field.beta_max;
    const auto kernels = kernel_terms(p);

    rep.pointwise.assign(field.eps.size(), std::vector<double>(n, -1.0));
    for (int lv = 0; lv < opt.levels; ++lv) rep.h.push_back(h * (coarse >> lv));
    rep.max_relative.assign(opt.levels, 0.0);
    double worst = -1.0;

    for (std::size_t ie = 0; ie < field.eps.size(); ++ie) {
        const cplx eps = field.eps[ie].value();
        for (int lv = 0; lv < opt.levels; ++lv) {
            const int stride = coarse >> lv;
            std::vector<int> idx;
            for (int j = 0; j < n; j += stride) idx.push_back(j);
            std::vector<cplx> tl;
            for (int j : idx) tl.push_back(field.t[j]);
            const bool finest = lv == opt.levels - 1;
            // Target points: coarse indices in [pad, nc - pad), expressed in this level.
            std::vector<int> targets;
            for (int c = pad; c < nc - pad; ++c) targets.push_back(c * (coarse / stride));
            auto X = [&](int beta) {
                Line v;
                for (int j : idx) v.push_back(field.coeff[ie][j][beta]);
                return v;
            };
            for (int beta = 0; beta + p.S <= B; ++beta) {
                auto eval = [&](int order, Line& res, std::vector<double>& scale) {
                    LineOps ops{&tl, h * stride, order, p.k};
                    Line Xs = X(beta + p.S);
                    Line e1 = ops.euler(Xs, p.s1);
                    Line e2 = ops.euler(Xs, p.s2);
                    Line e12 = ops.euler(Xs, p.s1 + p.s2);
                    const cplx c12 = std::pow(eps, p.r1 + p.r2), c2 = p.a1 * std::pow(eps, p.r2),
                               c1 = p.a2 * std::pow(eps, p.r1), c0 = p.a1 * p.a2;
                    res.assign(tl.size(), 0.0);
                    scale.assign(tl.size(), 0.0);
                    for (std::size_t i = 0; i < tl.size(); ++i) {
                        cplx terms[4] = {c12 * e12[i], c2 * e2[i], c1 * e1[i], c0 * Xs[i]};
                        for (cplx v : terms) {
                            res[i] += v;
                            scale[i] += std::abs(v);
                        }
                    }
                    for (const auto& tk : kernels)
                        for (int a0 = 0; a0 <= beta; ++a0) {
                            cplx bv = b_value(p, tk.f, a0, eps);
                            if (bv == cplx(0.0)) continue;
                            const int a1 = beta - a0;
                            double binom = factorial(beta) / (factorial(a0) * factorial(a1));
                            Line d = ops.dt(X(a1 + tk.f.kappa1), tk.f.kappa0);
                            for (std::size_t i = 0; i < tl.size(); ++i) {
                                cplx v = binom * bv * std::pow(tl[i], tk.f.s) * d[i];
                                res[i] -= v;
                                scale[i] += std::abs(v);
                            }
                        }
                };
                Line r4;
                std::vector<double> s4;
                eval(4, r4, s4);
                double smax = 0.0;
                for (int i : targets) smax = std::max(smax, s4[i]);
                if (!(smax > 0.0)) continue;
                double rmax = 0.0;
                for (int i : targets) rmax = std::max(rmax, std::abs(r4[i]) / smax);
                if (rmax > rep.max_relative[lv]) rep.max_relative[lv] = rmax;
                if (finest) {
                    if (rmax > worst) {
                        worst = rmax;
                        rep.worst_beta = beta;
                    }
                    Line r8;
                    std::vector<double> s8;
                    eval(8, r8, s8);
                    for (int i : targets) {
                        rep.stencil_estimate =
                            std::max(rep.stencil_estimate, std::abs(r4[i] - r8[i]) / smax);
                        double& pw = rep.pointwise[ie][idx[i]];
                        pw = std::max(pw, std::abs(r4[i]) / smax);
                    }
                }
            }
        }
    }
    for (int lv = 0; lv + 1 < opt.levels; ++lv)
        rep.observed_order.push_back(std::log2(rep.max_relative[lv] / rep.max_relative[lv + 1]));
    rep.quadrature_floor = opt.quadrature_floor;
    rep.budget = 2.0 * rep.stencil_estimate + rep.quadrature_floor;
    return rep;
}

InitialConditionReport initial_condition_check(const SolutionField& field, const ProblemParams& p,
                                               const std::vector<InitialDatum>& data,
                                               const LaplaceSpec& spec) {
    InitialConditionReport rep;
    for (std::size_t ie = 0; ie < field.eps.size(); ++ie) {
        const EpsPoint& e = field.eps[ie];
        const cplx er = e.pow(p.r());
        RayQuadrature q;
        q.gamma = field.scaled_gamma[ie];
        q.delta_lower_bound = spec.Delta;
        for (std::size_t ti = 0; ti < field.t.size(); ++ti)
            for (int j = 0; j < p.S && j < int(data.size()); ++j) {
                cplx direct = mk_laplace_ray(
                    [&](cplx u) { return data[j].eval(er * u, e, p.r(), p.k); }, p.k, q, field.t[ti]);
                cplx viaField = field.coeff[ie][ti][j];
                double d = std::abs(direct - viaField);
                rep.max_absolute = std::max(rep.max_absolute, d);
                if (std::abs(direct) > 0.0)
                    rep.max_relative = std::max(rep.max_relative, d / std::abs(direct));
            }
    }
    return rep;
}

}  // namespace gevlab
