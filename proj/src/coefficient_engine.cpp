#include "gevlab/coefficient_engine.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <mutex>
#include <tuple>

#include "gevlab/operator_algebra.hpp"

namespace gevlab {
namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

std::vector<cplx> roots_of(cplx c, int n) {
    std::vector<cplx> out;
    cplx w = std::pow(c, 1.0 / n);
    for (int j = 0; j < n; ++j) out.push_back(w * std::polar(1.0, 2.0 * kPi * j / n));
    return out;
}

}  // namespace

NormValue weighted_norm(const CVec& values, const RadialGrid& grid, int beta, const NormParams& np,
                        double tau_scale) {
    NormValue out;
    const double rb = np.r_b(beta);
    for (int m = 0; m < grid.size(); ++m) {
        double x = grid.radii()[m] / tau_scale;
        if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "weighted norm at tau = 0");
        double w = (1.0 + std::pow(x, 2 * np.k)) / x * std::exp(-np.sigma * rb * std::pow(x, np.k));
        double v = w * std::abs(values[m]);
        if (v > out.value || out.argmax < 0) {
            out.value = v;
            out.argmax = m;
        }
    }
    out.at_boundary = out.argmax == grid.size() - 1;
    return out;
}

cplx convolution_step(const CVec& f, const RadialGrid& grid, double nu, double xi, int k, int m) {
    if (xi <= -1.0) throw Error(ErrorCode::InvalidArgument, "convolution needs xi > -1");
    std::vector<cplx> row(grid.size());
    ConvolutionOperator::build_row(grid, nu, xi, k, m, row.data());
    cplx s = 0.0;
    for (int j = 0; j < grid.size(); ++j) s += row[j] * f[j];
    return s;
}

ScaledPrefactors ScaledPrefactors::make(const ProblemParams& p, cplx eps) {
    ScaledPrefactors out;
    out.eps = eps;
    out.params = p;
    out.fixed_poles = roots_of(-p.a2 / (std::pow(double(p.k), p.s2) * std::pow(eps, p.r2)), p.k * p.s2);
    out.movable_poles = roots_of(-p.a1 / (std::pow(double(p.k), p.s1) * std::pow(eps, p.r1)), p.k * p.s1);
    return out;
}

cplx ScaledPrefactors::fixed(cplx tau) const {
    const auto& p = params;
    return std::pow(eps, p.r2) * std::pow(double(p.k) * std::pow(tau, p.k), p.s2) + p.a2;
}

cplx ScaledPrefactors::movable(cplx tau) const {
    const auto& p = params;
    return std::pow(eps, p.r1) * std::pow(double(p.k) * std::pow(tau, p.k), p.s1) + p.a1;
}

std::vector<cplx> ScaledPrefactors::all_poles() const {
    std::vector<cplx> out = fixed_poles;
    out.insert(out.end(), movable_poles.begin(), movable_poles.end());
    return out;
}

std::vector<TripleKernels> kernel_terms(const ProblemParams& p) {
    std::vector<TripleKernels> out;
    const int k = p.k;
    for (const auto& f : p.forcing) {
        TripleKernels tk{f, {}};
        const int delta = p.delta(f);
        if (f.kappa0 == 0) {
            double nu = double(f.s) / k - 1.0;
            double c = 1.0 / std::tgamma(double(f.s) / k);
            tk.terms.push_back({nu, -1.0, c, std::abs(c), true});
        }
        for (int q = 1; q <= f.kappa0; ++q) {
            double A = 1.0;
            if (q < f.kappa0) {
                auto it = p.A_table.find({f.kappa0, q});
                if (it == p.A_table.end())
                    throw Error(ErrorCode::InvalidArgument, "A table missing entry for kappa0 = " +
                                                                std::to_string(f.kappa0));
                A = it->second;
            }
            double nu = double(delta + k * (f.kappa0 - q)) / k - 1.0;
            double c = A * std::pow(double(k), q) / std::tgamma(nu + 1.0);
            if (c != 0.0) tk.terms.push_back({nu, double(q - 1), c, std::abs(c), false});
        }
        out.push_back(tk);
    }
    return out;
}

cplx b_value(const ProblemParams& p, const ForcingTerm& f, int alpha0, cplx eps) {
    auto it = p.b_coeffs.find({f.kappa0, f.kappa1, alpha0});
    if (it == p.b_coeffs.end()) return 0.0;
    cplx s = 0.0;
    for (std::size_t j = it->second.size(); j-- > 0;) s = s * eps + it->second[j];
    return s;
}

double b_bound(const ProblemParams& p, const ForcingTerm& f, int alpha0, double eps_abs) {
    auto it = p.b_coeffs.find({f.kappa0, f.kappa1, alpha0});
    if (it == p.b_coeffs.end()) return 0.0;
    double s = 0.0;
    for (std::size_t j = it->second.size(); j-- > 0;) s = s * eps_abs + std::abs(it->second[j]);
    return s;
}

CoefficientEngine::CoefficientEngine(const ProblemParams& p, const EpsPoint& eps, double gamma_scaled,
                                     double r_max, const RadialGridSpec& spec, Exec exec)
    : p_(p), eps_(eps), np_(NormParams::from(p)) {
    for (const auto& f : p.forcing)
        if (f.kappa1 >= p.S)
            throw Error(ErrorCode::InvalidArgument, "forcing needs kappa1 < S");
    pre_ = ScaledPrefactors::make(p, eps.value());
    grid_ = std::make_shared<const RadialGrid>(
        RadialGrid::build(gamma_scaled, r_max, 1.0, spec, pre_.all_poles()));
    const int N = grid_->size();
    inv_prefactor_.resize(N);
    for (int m = 0; m < N; ++m) {
        cplx tau = grid_->node(m);
        inv_prefactor_[m] = 1.0 / (pre_.fixed(tau) * pre_.movable(tau));
    }
    kernels_ = kernel_terms(p);
    std::map<std::pair<double, double>, int> seen;
    for (std::size_t t = 0; t < kernels_.size(); ++t) {
        for (auto& term : kernels_[t].terms) {
            double xi_op = term.divide_by_tau ? 1.0 / p.k - 1.0 : term.xi;
            auto key = std::make_pair(term.nu, xi_op);
            if (!seen.count(key)) {
                seen[key] = int(ops_.size());
                ops_.emplace_back(*grid_, term.nu, xi_op, p.k, exec);
            }
        }
    }
    for (std::size_t t = 0; t < kernels_.size(); ++t)
        for (auto& term : kernels_[t].terms) {
            double xi_op = term.divide_by_tau ? 1.0 / p.k - 1.0 : term.xi;
            kernel_index_.push_back({int(t), seen[{term.nu, xi_op}]});
        }
}

std::vector<CVec> CoefficientEngine::sample(const std::vector<InitialDatum>& data) const {
    std::vector<CVec> out;
    const cplx er = eps_.pow(p_.r());
    for (const auto& d : data) {
        CVec v(grid_->size());
        // Data are given in the physical variable tau = eps^r tau'.
        for (int m = 0; m < grid_->size(); ++m) v[m] = d.eval(er * grid_->node(m), eps_, p_.r(), p_.k);
        out.push_back(v);
    }
    return out;
}

std::vector<double> CoefficientEngine::initial_norms(const std::vector<InitialDatum>& data) const {
    std::vector<double> out;
    const cplx er = eps_.pow(p_.r());
    const cplx dir = std::polar(1.0, grid_->gamma());
    for (std::size_t j = 0; j < data.size(); ++j) {
        const double rb = np_.r_b(int(j));
        double best = 0.0;
        const int n = 20000;
        for (int q = 0; q < n; ++q) {
            double x = 1e-6 * std::pow(1e10, double(q) / (n - 1));
            double w = (1.0 + std::pow(x, 2 * p_.k)) / x * std::exp(-np_.sigma * rb * std::pow(x, p_.k));
            if (w == 0.0) break;
            best = std::max(best, w * std::abs(data[j].eval(er * x * dir, eps_, p_.r(), p_.k)));
        }
        // Grid values can only be lower, but keep the bound consistent with them.
        CVec v = sample({data[j]})[0];
        best = std::max(best, weighted_norm(v, *grid_, int(j), np_).value);
        out.push_back(best);
    }
    return out;
}

CoefficientTable CoefficientEngine::start(const std::vector<CVec>& initial, int beta_max) const {
    if (int(initial.size()) != p_.S)
        throw Error(ErrorCode::InvalidArgument, "expected S initial data, got " +
                                                    std::to_string(initial.size()));
    if (beta_max < p_.S - 1) throw Error(ErrorCode::InvalidArgument, "beta_max below S - 1");
    CoefficientTable t;
    t.eps = eps_;
    t.gamma = grid_->gamma();
    t.beta_max = beta_max;
    t.grid = grid_;
    t.entries.assign(beta_max + 1, CVec::Zero(grid_->size()));
    for (int j = 0; j < p_.S; ++j) {
        if (initial[j].size() != grid_->size())
            throw Error(ErrorCode::InvalidArgument, "initial datum size does not match the grid");
        t.entries[j] = initial[j];
    }
    return t;
}

void CoefficientEngine::recursion_step(CoefficientTable& table, int beta) const {
    const int target = beta + p_.S;
    if (target > table.beta_max) throw Error(ErrorCode::InvalidArgument, "recursion past beta_max");
    const cplx eps = eps_.value();
    CVec acc = CVec::Zero(grid_->size());
    int flat = 0;
    for (std::size_t t = 0; t < kernels_.size(); ++t) {
        const auto& tk = kernels_[t];
        const int first = flat;
        flat += int(tk.terms.size());
        for (int a0 = 0; a0 <= beta; ++a0) {
            cplx bv = b_value(p_, tk.f, a0, eps);
            if (bv == cplx(0.0)) continue;
            const int a1 = beta - a0;
            const int idx = a1 + tk.f.kappa1;
            const cplx scale = bv / factorial(a0) / factorial(a1);
            for (std::size_t q = 0; q < tk.terms.size(); ++q) {
                const auto& term = tk.terms[q];
                const int op = kernel_index_[first + q].second;
                auto key = std::make_pair(op, idx);
                auto it = table.conv_cache.find(key);
                if (it == table.conv_cache.end()) {
                    CVec in = table.entries[idx];
                    if (term.divide_by_tau)
                        for (int m = 0; m < grid_->size(); ++m) in[m] /= grid_->node(m);
                    it = table.conv_cache.emplace(key, ops_[op].apply(in)).first;
                }
                acc += (scale * term.coeff) * it->second;
            }
        }
    }
    table.entries[target] = factorial(beta) * inv_prefactor_.cwiseProduct(acc);
}

CoefficientTable CoefficientEngine::compute(const std::vector<CVec>& initial, int beta_max) const {
    CoefficientTable t = start(initial, beta_max);
    for (int beta = 0; beta + p_.S <= beta_max; ++beta) recursion_step(t, beta);
    for (int beta = 0; beta <= beta_max; ++beta)
        t.norms.push_back(weighted_norm(t.entries[beta], *grid_, beta, np_));
    return t;
}

CoefficientTable CoefficientEngine::compute(const std::vector<InitialDatum>& data, int beta_max) const {
    return compute(sample(data), beta_max);
}

RayPrefactorBounds ray_prefactor_bounds(const ScaledPrefactors& pre, double gamma) {
    RayPrefactorBounds out;
    const cplx dir = std::polar(1.0, gamma);
    double R = 1.0;
    for (cplx p : pre.all_poles()) R = std::max(R, std::abs(p));
    auto sup_of = [&](auto&& inv, const std::vector<cplx>& poles) {
        std::vector<double> xs{0.0};
        const int n = 4000;
        for (int q = 0; q < n; ++q) xs.push_back(1e-6 * R * std::pow(1e9, double(q) / (n - 1)));
        for (cplx p : poles) {
            double proj = std::real(p * std::conj(dir));
            if (proj > 0.0) xs.push_back(proj);
        }
        std::sort(xs.begin(), xs.end());
        std::size_t best = 0;
        double bv = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double v = inv(xs[i] * dir);
            if (v > bv) { bv = v; best = i; }
        }
        if (best > 0 && best + 1 < xs.size()) {
            auto res = boost::math::tools::brent_find_minima(
                [&](double x) { return -inv(x * dir); }, xs[best - 1], xs[best + 1], 50);
            bv = std::max(bv, -res.second);
        }
        return bv;
    };
    out.C1 = sup_of([&](cplx t) { return 1.0 / std::abs(pre.fixed(t)); }, pre.fixed_poles);
    out.C2 = sup_of([&](cplx t) { return 1.0 / std::abs(pre.movable(t)); }, pre.movable_poles);
    return out;
}

int falling_factorial_length(const ProblemParams& p, const ForcingTerm& f) {
    return int(std::floor(p.b_param * (double(p.delta(f)) / p.k + f.kappa0)));
}

double falling_factorial(int beta, int L) {
    double s = 1.0;
    for (int j = 0; j < L; ++j) s *= std::max(beta - j, 1);
    return s;
}

namespace {

double cached_kernel_sup(double nu, double xi, int alpha, int beta, const NormParams& np) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, int, int, double, double, int>, double> cache;
    auto key = std::make_tuple(nu, xi, alpha, beta, np.sigma, np.b, np.k);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    double v = convolution_kernel_sup(nu, xi, alpha, beta, np, std::numeric_limits<double>::infinity()).value;
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = v;
    return v;
}

}  // namespace

MajorantConstants majorant_constants(const ProblemParams& p, double eps_abs, int beta_max,
                                     const RayPrefactorBounds& rb) {
    MajorantConstants mc;
    mc.C1 = rb.C1;
    mc.C2 = rb.C2;
    const NormParams np = NormParams::from(p);
    const auto kernels = kernel_terms(p);
    for (int beta = 0; beta + p.S <= beta_max; ++beta) {
        const int target = beta + p.S;
        for (const auto& tk : kernels) {
            const int L = falling_factorial_length(p, tk.f);
            for (int a0 = 0; a0 <= beta; ++a0) {
                if (b_bound(p, tk.f, a0, eps_abs) == 0.0) continue;
                const int alpha = beta - a0 + tk.f.kappa1;
                for (const auto& term : tk.terms) {
                    double e = term.nu + term.xi + 3.0;
                    double ratio = std::pow(target + 1.0, p.b_param) / double(target - alpha);
                    double re = std::pow(ratio, e);
                    double supB = cached_kernel_sup(term.nu, term.xi, alpha, target, np);
                    mc.C3 = std::max(mc.C3, supB / re);
                    mc.C41 = std::max(mc.C41, re / falling_factorial(beta, L));
                }
            }
        }
    }
    return mc;
}

MajorantTable majorant_recursion(const std::vector<double>& initial_norms, const ProblemParams& p,
                                 double eps_abs, double C4, double C41, int beta_max) {
    MajorantTable t;
    t.u.assign(beta_max + 1, 0.0);
    for (int j = 0; j < p.S && j <= beta_max; ++j) t.u[j] = initial_norms.at(j);
    const auto kernels = kernel_terms(p);
    for (int beta = 0; beta + p.S <= beta_max; ++beta) {
        double acc = 0.0;
        for (const auto& tk : kernels) {
            double bracket = 0.0;
            for (const auto& term : tk.terms) bracket += term.majorant;
            const double ff = falling_factorial(beta, falling_factorial_length(p, tk.f));
            for (int a0 = 0; a0 <= beta; ++a0) {
                double M = b_bound(p, tk.f, a0, eps_abs);
                if (M == 0.0) continue;
                const int a1 = beta - a0;
                acc += M / factorial(a0) * ff * bracket * t.u[a1 + tk.f.kappa1] / factorial(a1);
            }
        }
        t.u[beta + p.S] = factorial(beta) * C4 * C41 * acc;
    }
    // Geometric fit of log(u_beta / beta!) over the nonzero entries.
    std::vector<double> xs, ys;
    for (int b = 0; b <= beta_max; ++b)
        if (t.u[b] > 0.0) {
            xs.push_back(b);
            ys.push_back(std::log(t.u[b]) - std::lgamma(b + 1.0));
        }
    auto slope = [&](std::size_t lo, std::size_t hi) {
        double n = double(hi - lo), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    if (xs.size() >= 2) {
        t.Z0 = std::exp(slope(0, xs.size()));
        std::size_t third = std::max<std::size_t>(2, xs.size() / 3);
        t.slope_first = slope(0, std::min(third, xs.size()));
        t.slope_last = slope(xs.size() - std::min(third, xs.size()), xs.size());
    } else {
        t.Z0 = 1.0;
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        t.M = std::max(t.M, std::exp(ys[i] - xs[i] * std::log(t.Z0)));
    return t;
}

DominationReport verify_domination(const CoefficientTable& table, const MajorantTable& maj) {
    DominationReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    const int n = std::min<int>(int(table.norms.size()), int(maj.u.size()));
    for (int b = 0; b < n; ++b) {
        double w = table.norms[b].value;
        double u = maj.u[b];
        if (w > u * (1.0 + 1e-12)) rep.violations.push_back(b);
        if (w > 0.0) rep.min_margin = std::min(rep.min_margin, u / w);
        double env = maj.M * std::pow(maj.Z0, b) * factorial(b);
        if (w > env * (1.0 + 1e-12)) rep.envelope_violations.push_back(b);
        if (env > 0.0) rep.envelope_ratio = std::max(rep.envelope_ratio, w / env);
    }
    return rep;
}

double domination_control_factor(const CoefficientTable& table, const std::vector<double>& init,
                                  const ProblemParams& p, double eps_abs, const MajorantConstants& mc) {
    for (int j = 1; j <= 60; ++j) {
        double f = std::ldexp(1.0, -j);
        MajorantTable m = majorant_recursion(init, p, eps_abs, mc.C4() * f, mc.C41, table.beta_max);
        if (!verify_domination(table, m).violations.empty()) return f;
    }
    return 0.0;
}

}  // namespace gevlab
