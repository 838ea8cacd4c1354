#include "gevlab/jets.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace gevlab {
namespace {

double factorial_d(int n) { return std::tgamma(n + 1.0); }

// z-Taylor coefficients of the eps^m part of b_{kappa0 kappa1}(z, eps).
std::vector<cplx> b_z_poly(const ProblemParams& p, const ForcingTerm& f, int m) {
    std::vector<cplx> out;
    for (const auto& [key, c] : p.b_coeffs) {
        if (key[0] != f.kappa0 || key[1] != f.kappa1) continue;
        if (m >= int(c.size()) || c[m] == cplx(0.0)) continue;
        if (int(out.size()) <= key[2]) out.resize(key[2] + 1, 0.0);
        out[key[2]] += c[m] / factorial_d(key[2]);
    }
    return out;
}

int max_b_eps_degree(const ProblemParams& p) {
    int d = 0;
    for (const auto& kv : p.b_coeffs) d = std::max(d, int(kv.second.size()) - 1);
    return d;
}

// Every term of the right-hand side at order l, for G_l = H_l / l!.
std::vector<Bivariate> rhs_terms(const std::vector<Bivariate>& G, int ell, const ProblemParams& p,
                                 bool with_self) {
    std::vector<Bivariate> out;
    const int mb = max_b_eps_degree(p);
    for (const auto& f : p.forcing) {
        for (int m = with_self ? 0 : 1; m <= std::min(mb, ell); ++m) {
            auto bz = b_z_poly(p, f, m);
            if (bz.empty()) continue;
            const Bivariate& g = G[ell - m];
            out.push_back(g.dz(f.kappa1).dt(f.kappa0).times_t(f.s).times_z_poly(bz));
        }
    }
    auto lin = [&](int shift, int power, cplx c) {
        if (ell - shift < 0) return;
        out.push_back(G[ell - shift].dz(p.S).euler(p.k, power).scaled(-c));
    };
    lin(p.r1, p.s1, p.a2);
    lin(p.r2, p.s2, p.a1);
    lin(p.r1 + p.r2, p.s1 + p.s2, 1.0);
    return out;
}

double window_max(const Bivariate& b, int tw, int zw) {
    double m = 0.0;
    for (int i = 0; i <= std::min(tw, b.deg_t()); ++i)
        for (int j = 0; j <= std::min(zw, b.deg_z()); ++j) m = std::max(m, std::abs(b.get(i, j)));
    return m;
}

std::vector<Bivariate> normalized(const EpsilonJet& jet) {
    std::vector<Bivariate> G;
    for (int l = 0; l <= jet.ell_max(); ++l) G.push_back(jet.H[l].scaled(1.0 / factorial_d(l)));
    return G;
}

void check_window(const ProblemParams& p, int z_order) {
    if (z_order < p.S)
        throw Error(ErrorCode::Truncation, "jet z-order " + std::to_string(z_order) +
                                               " is below S = " + std::to_string(p.S));
    for (const auto& f : p.forcing)
        if (f.s < f.kappa0)
            throw Error(ErrorCode::Truncation,
                        "forcing term with s < kappa0 needs t-orders beyond the jet truncation");
}

// Laplace coefficients L(W_beta)(eps^r t) at one eps for several t, on scaled ray gamma.
std::vector<std::vector<cplx>> continued_coefficients(const ProblemParams& p,
                                                      const std::vector<InitialDatum>& data,
                                                      const SolverOptions& opt, const EpsPoint& eps,
                                                      double gamma, const std::vector<cplx>& t,
                                                      int beta_max) {
    double tmax = 0.0;
    for (cplx v : t) tmax = std::max(tmax, std::abs(v));
    const double r_max = laplace_reach(tmax, p.k, opt.laplace) * opt.reach_margin;
    CoefficientEngine eng(p, eps, gamma, r_max, opt.grid, Exec::Serial);
    CoefficientTable tab = eng.compute(data, beta_max);
    auto lw = laplace_weights_many(eng.grid(), p.k, t, opt.laplace, Exec::Serial);
    std::vector<std::vector<cplx>> out(t.size(), std::vector<cplx>(beta_max + 1));
    for (std::size_t i = 0; i < t.size(); ++i)
        for (int b = 0; b <= beta_max; ++b) out[i][b] = lw[i].apply(tab.entries[b]);
    return out;
}

EpsilonJet torus_jet(const ProblemParams& p, const std::vector<InitialDatum>& data,
                     const SolverOptions& opt, const JetFitSpec& spec, double rho, double R) {
    const int ne = spec.eps_points, nt = spec.t_points, nr = spec.rays;
    const int B = spec.z_order;
    // samples[q][j][beta]; t_j is served by the ray nearest to arg t_j.
    std::vector<std::vector<std::vector<cplx>>> samples(
        ne, std::vector<std::vector<cplx>>(nt, std::vector<cplx>(B + 1)));
    std::vector<std::vector<int>> served(nr);
    for (int j = 0; j < nt; ++j) served[int(std::lround(double(j) * nr / nt)) % nr].push_back(j);
    std::vector<std::exception_ptr> errs(ne * nr);
#pragma omp parallel for schedule(dynamic) if (opt.exec == Exec::Parallel)
    for (int w = 0; w < ne * nr; ++w) {
        const int q = w / nr, m = w % nr;
        if (served[m].empty()) continue;
        try {
            EpsPoint e{rho, 2.0 * kPi * q / ne};
            std::vector<cplx> t;
            for (int j : served[m]) t.push_back(std::polar(R, 2.0 * kPi * j / nt));
            auto c = continued_coefficients(p, data, opt, e, 2.0 * kPi * m / nr, t, B);
            for (std::size_t i = 0; i < served[m].size(); ++i) samples[q][served[m][i]] = c[i];
        } catch (...) {
            errs[w] = std::current_exception();
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);

    EpsilonJet jet = EpsilonJet::zero(spec.ell_max, spec.t_order, spec.z_order);
    for (int l = 0; l <= spec.ell_max; ++l)
        for (int i = 0; i <= spec.t_order; ++i) {
            const double scale = std::pow(rho, l) * std::pow(R, i) * ne * nt;
            for (int b = 0; b <= B; ++b) {
                cplx s = 0.0;
                for (int q = 0; q < ne; ++q)
                    for (int j = 0; j < nt; ++j)
                        s += samples[q][j][b] *
                             std::polar(1.0, -2.0 * kPi * (double(l) * q / ne + double(i) * j / nt));
                jet.H[l].add_to(i, b, s / scale / factorial_d(b) * factorial_d(l));
            }
        }
    return jet;
}

}  // namespace

EpsilonJet EpsilonJet::zero(int ell_max, int t_order, int z_order) {
    EpsilonJet j;
    j.t_order = t_order;
    j.z_order = z_order;
    j.H.assign(ell_max + 1, Bivariate(t_order, z_order));
    return j;
}

EpsilonJet EpsilonJet::operator-(const EpsilonJet& o) const {
    if (o.H.size() != H.size())
        throw Error(ErrorCode::InvalidArgument, "jets of different eps order");
    EpsilonJet r = *this;
    for (std::size_t l = 0; l < H.size(); ++l) r.H[l] = H[l] - o.H[l];
    return r;
}

EpsilonJet EpsilonJet::scaled(cplx a) const {
    EpsilonJet r = *this;
    for (auto& h : r.H) h = h.scaled(a);
    return r;
}

EpsilonRecursionReport epsilon_recursion_check(const EpsilonJet& jet, const ProblemParams& p) {
    check_window(p, jet.z_order);
    EpsilonRecursionReport rep;
    rep.t_window = jet.t_order;
    rep.z_window = jet.z_order - p.S;
    auto G = normalized(jet);
    const cplx a12 = p.a1 * p.a2;
    for (int l = 0; l <= jet.ell_max(); ++l) {
        Bivariate lhs = G[l].dz(p.S).scaled(a12);
        double scale = window_max(lhs, rep.t_window, rep.z_window);
        Bivariate diff = lhs;
        for (const auto& term : rhs_terms(G, l, p, true)) {
            scale = std::max(scale, window_max(term, rep.t_window, rep.z_window));
            diff = diff - term;
        }
        double mis = window_max(diff, rep.t_window, rep.z_window);
        rep.mismatch.push_back(mis);
        rep.scale.push_back(scale);
        rep.max_mismatch = std::max(rep.max_mismatch, mis);
    }
    // Orders whose terms are all at roundoff level would report a relative mismatch of 1.
    const double top = *std::max_element(rep.scale.begin(), rep.scale.end());
    for (std::size_t l = 0; l < rep.scale.size(); ++l)
        if (rep.scale[l] > 1e-8 * top)
            rep.max_relative = std::max(rep.max_relative, rep.mismatch[l] / rep.scale[l]);
    return rep;
}

std::vector<std::vector<std::vector<cplx>>> initial_jets(const ProblemParams& p,
                                                         const std::vector<InitialDatum>& data,
                                                         int ell_max, int t_order) {
    std::vector<std::vector<std::vector<cplx>>> out(
        ell_max + 1, std::vector<std::vector<cplx>>(p.S, std::vector<cplx>(t_order + 1, 0.0)));
    for (int j = 0; j < p.S && j < int(data.size()); ++j) {
        const auto& d = data[j];
        if (d.is_zero()) continue;
        if (d.gauss_rate != 0.0)
            throw Error(ErrorCode::InvalidArgument, "gaussian data have no polynomial eps-jet");
        for (std::size_t n = 1; n < d.coeffs.size(); ++n) {
            if (d.coeffs[n] == cplx(0.0)) continue;
            double e = d.eps_power + (d.scaled ? 0.0 : p.r() * double(n));
            double el = std::round(e);
            if (std::abs(e - el) > 1e-12 || el < 0.0)
                throw Error(ErrorCode::InvalidArgument,
                            "initial datum gives a non-integer power of eps");
            if (int(el) > ell_max) continue;
            if (int(n) > t_order)
                throw Error(ErrorCode::Truncation, "initial datum exceeds the jet t-order");
            out[int(el)][j][n] += d.coeffs[n] * std::tgamma(double(n) / p.k);
        }
    }
    return out;
}

EpsilonJet formal_jet(const ProblemParams& p,
                      const std::vector<std::vector<std::vector<cplx>>>& initial, int ell_max,
                      int t_order, int z_order) {
    check_window(p, z_order);
    EpsilonJet jet = EpsilonJet::zero(ell_max, t_order, z_order);
    std::vector<Bivariate> G(ell_max + 1, Bivariate(t_order, z_order));
    const cplx a12 = p.a1 * p.a2;
    for (int l = 0; l <= ell_max; ++l) {
        if (l < int(initial.size()))
            for (int j = 0; j < p.S; ++j)
                for (int i = 0; i <= t_order && i < int(initial[l][j].size()); ++i)
                    G[l].add_to(i, j, initial[l][j][i] / factorial_d(j));
        Bivariate fixed(t_order, z_order);
        for (const auto& term : rhs_terms(G, l, p, false)) fixed = fixed + term;
        // The eps^0 part of b couples G_l to itself only through z-orders below j + S.
        for (int j = 0; j + p.S <= z_order; ++j) {
            Bivariate rhs = fixed;
            for (const auto& f : p.forcing) {
                auto bz = b_z_poly(p, f, 0);
                if (!bz.empty())
                    rhs = rhs + G[l].dz(f.kappa1).dt(f.kappa0).times_t(f.s).times_z_poly(bz);
            }
            const double ff = factorial_d(j + p.S) / factorial_d(j);
            for (int i = 0; i <= t_order; ++i) G[l].add_to(i, j + p.S, rhs.get(i, j) / (a12 * ff));
        }
        jet.H[l] = G[l].scaled(factorial_d(l));
    }
    return jet;
}

JetFitReport fit_epsilon_jet(const ProblemParams& p, const GeometryConfig& g,
                             const std::vector<InitialDatum>& data, const SolverOptions& opt,
                             const JetFitSpec& spec) {
    if (spec.sector < 0 || spec.sector >= int(g.covering.size()))
        throw Error(ErrorCode::InvalidArgument, "jet fit sector out of range");
    if (spec.eps_points <= 2 * spec.ell_max || spec.t_points <= 2 * spec.t_order || spec.rays < 6)
        throw Error(ErrorCode::InvalidArgument,
                    "jet fit needs more than twice the jet orders in samples and at least 6 rays");
    check_window(p, spec.z_order);
    SolverOptions o = opt;
    o.laplace.Delta = g.Delta;

    JetFitReport rep;
    // Anchor: the continuation must agree with the sector's own assembly.
    const Sector& sec = g.covering[spec.sector];
    EpsPoint es = sec.point(spec.eps_radius, sec.bisector());
    const cplx ts = std::polar(spec.t_radius, g.t_sector.bisector());
    SolverOptions so = o;
    so.beta_max = spec.z_order;
    SolutionField f = assemble_solution(p, g, spec.sector, {es}, {ts}, {cplx(0.0)}, data, so);
    auto c = continued_coefficients(p, data, o, es, std::arg(ts), {ts}, spec.z_order);
    double num = 0.0, den = 0.0;
    for (int b = 0; b <= spec.z_order; ++b) {
        num = std::max(num, std::abs(c[0][b] - f.coeff[0][0][b]));
        den = std::max(den, std::abs(f.coeff[0][0][b]));
    }
    rep.sector_agreement = den > 0.0 ? num / den : num;

    rep.jet = torus_jet(p, data, o, spec, spec.eps_radius, spec.t_radius);
    EpsilonJet refit = torus_jet(p, data, o, spec, spec.eps_radius * spec.refit_scale,
                                 spec.t_radius * spec.refit_scale);
    rep.recursion = epsilon_recursion_check(rep.jet, p);
    rep.difference = epsilon_recursion_check(rep.jet - refit, p);
    rep.budget = 2.0 * rep.difference.max_mismatch;
    try {
        auto init = initial_jets(p, data, spec.ell_max, spec.t_order);
        EpsilonJet formal = formal_jet(p, init, spec.ell_max, spec.t_order, spec.z_order);
        double num = 0.0, den = 0.0;
        for (int l = 0; l <= spec.ell_max; ++l) {
            num = std::max(num, window_max(rep.jet.H[l] - formal.H[l], spec.t_order, spec.z_order));
            den = std::max(den, window_max(formal.H[l], spec.t_order, spec.z_order));
        }
        rep.formal_deviation = den > 0.0 ? num / den : num;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidArgument) throw;
    }
    return rep;
}

}  // namespace gevlab
