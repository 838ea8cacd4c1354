#include "gevlab/config.hpp"

#include <fstream>

#include "gevlab/operator_algebra.hpp"

namespace gevlab {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::Parse, path + ": " + what);
}

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing field");
    return *it;
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

cplx as_complex(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_object()) fail(path, "expected {re, im}");
    double re = as_double(need(j, "re", path), path + ".re");
    double im = j.contains("im") ? as_double(j["im"], path + ".im") : 0.0;
    return {re, im};
}

template <class T, class F>
void opt_field(const json& j, const std::string& key, const std::string& path, T& out, F conv) {
    if (j.is_object() && j.contains(key)) out = conv(j[key], path + "." + key);
}

std::vector<double> as_doubles(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<int> as_ints(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Sector as_sector(const json& j, const std::string& path) {
    Sector s;
    s.radius = j.contains("radius") ? as_double(j["radius"], path + ".radius")
                                    : std::numeric_limits<double>::infinity();
    s.theta1 = as_double(need(j, "theta1", path), path + ".theta1");
    s.theta2 = as_double(need(j, "theta2", path), path + ".theta2");
    return s;
}

ProblemParams parse_problem(const json& j, const std::string& path) {
    ProblemParams p;
    p.k = as_int(need(j, "k", path), path + ".k");
    p.s1 = as_int(need(j, "s1", path), path + ".s1");
    p.s2 = as_int(need(j, "s2", path), path + ".s2");
    p.r1 = as_int(need(j, "r1", path), path + ".r1");
    p.r2 = as_int(need(j, "r2", path), path + ".r2");
    p.S = as_int(need(j, "S", path), path + ".S");
    p.a1 = as_complex(need(j, "a1", path), path + ".a1");
    p.a2 = as_complex(need(j, "a2", path), path + ".a2");
    opt_field(j, "b_param", path, p.b_param, as_double);
    opt_field(j, "sigma", path, p.sigma, as_double);
    const json& f = need(j, "forcing", path);
    if (!f.is_array()) fail(path + ".forcing", "expected an array");
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::string fp = path + ".forcing[" + std::to_string(i) + "]";
        p.forcing.push_back({as_int(need(f[i], "s", fp), fp + ".s"),
                             as_int(need(f[i], "kappa0", fp), fp + ".kappa0"),
                             as_int(need(f[i], "kappa1", fp), fp + ".kappa1")});
    }
    if (j.contains("b_coeffs")) {
        const json& b = j["b_coeffs"];
        if (!b.is_array()) fail(path + ".b_coeffs", "expected an array");
        for (std::size_t i = 0; i < b.size(); ++i) {
            std::string bp = path + ".b_coeffs[" + std::to_string(i) + "]";
            BKey key{as_int(need(b[i], "kappa0", bp), bp + ".kappa0"),
                     as_int(need(b[i], "kappa1", bp), bp + ".kappa1"),
                     as_int(need(b[i], "beta", bp), bp + ".beta")};
            const json& c = need(b[i], "eps_coeffs", bp);
            if (!c.is_array()) fail(bp + ".eps_coeffs", "expected an array");
            std::vector<cplx> v;
            for (std::size_t q = 0; q < c.size(); ++q)
                v.push_back(as_complex(c[q], bp + ".eps_coeffs[" + std::to_string(q) + "]"));
            p.b_coeffs[key] = v;
        }
    }
    try {
        p.validate();
    } catch (const Error& e) {
        fail(path, e.what());
    }
    populate_euler_table(p);
    return p;
}

GeometryConfig parse_geometry(const json& j, const std::string& path) {
    GeometryConfig g;
    const json& cov = need(j, "covering", path);
    if (!cov.is_array()) fail(path + ".covering", "expected an array");
    for (std::size_t i = 0; i < cov.size(); ++i)
        g.covering.push_back(as_sector(cov[i], path + ".covering[" + std::to_string(i) + "]"));
    g.rays = as_doubles(need(j, "rays", path), path + ".rays");
    opt_field(j, "rho0", path, g.rho0, as_double);
    opt_field(j, "delta1", path, g.delta1, as_double);
    opt_field(j, "delta2", path, g.delta2, as_double);
    opt_field(j, "Delta", path, g.Delta, as_double);
    if (j.contains("t_sector")) g.t_sector = as_sector(j["t_sector"], path + ".t_sector");
    if (j.contains("sd_directions"))
        g.sd_directions = as_doubles(j["sd_directions"], path + ".sd_directions");
    if (g.rays.size() != g.covering.size())
        fail(path + ".rays", "needs one ray per covering sector");
    if (!(g.Delta > 0.0 && g.Delta <= 1.0)) fail(path + ".Delta", "must lie in (0, 1]");
    return g;
}

InitialDatum parse_datum(const json& j, const std::string& path) {
    InitialDatum d;
    std::string fam = need(j, "family", path).get<std::string>();
    if (fam == "zero") return InitialDatum::zero();
    opt_field(j, "scaled", path, d.scaled, as_bool);
    opt_field(j, "eps_power", path, d.eps_power, as_double);
    if (fam == "monomial") {
        int n = as_int(need(j, "n", path), path + ".n");
        if (n < 1) fail(path + ".n", "Borel-side data need n >= 1");
        cplx c = j.contains("coeff") ? as_complex(j["coeff"], path + ".coeff") : cplx(1.0);
        InitialDatum m = InitialDatum::monomial(n, c, d.scaled);
        m.eps_power = d.eps_power;
        return m;
    }
    if (fam == "polynomial" || fam == "gaussian") {
        d.family = fam == "polynomial" ? InitialDatum::Family::Polynomial
                                       : InitialDatum::Family::Gaussian;
        const json& c = need(j, "coeffs", path);
        if (!c.is_array()) fail(path + ".coeffs", "expected an array");
        for (std::size_t q = 0; q < c.size(); ++q)
            d.coeffs.push_back(as_complex(c[q], path + ".coeffs[" + std::to_string(q) + "]"));
        if (!d.coeffs.empty() && d.coeffs[0] != cplx(0.0))
            fail(path + ".coeffs[0]", "Borel-side data must vanish at tau = 0");
        if (fam == "gaussian") d.gauss_rate = as_double(need(j, "rate", path), path + ".rate");
        return d;
    }
    fail(path + ".family", "unknown family '" + fam + "'");
}

EpsWindow parse_window(const json& j, const std::string& path, EpsWindow w) {
    opt_field(j, "eps_max", path, w.eps_max, as_double);
    opt_field(j, "eps_min", path, w.eps_min, as_double);
    opt_field(j, "candidates", path, w.candidates, as_int);
    if (!(w.eps_max > w.eps_min && w.eps_min > 0.0)) fail(path, "needs eps_max > eps_min > 0");
    return w;
}

}  // namespace

nlohmann::json complex_to_json(cplx c) { return {{"re", c.real()}, {"im", c.imag()}}; }

RunConfig parse_config(const json& j) {
    RunConfig c;
    c.problem = parse_problem(need(j, "problem", "config"), "problem");
    c.geometry = parse_geometry(need(j, "geometry", "config"), "geometry");
    const json& init = need(j, "initial_data", "config");
    if (!init.is_array() || int(init.size()) != c.problem.S)
        fail("initial_data", "expected an array of S = " + std::to_string(c.problem.S) + " entries");
    for (std::size_t i = 0; i < init.size(); ++i)
        c.initial.push_back(parse_datum(init[i], "initial_data[" + std::to_string(i) + "]"));

    if (j.contains("numerics")) {
        const json& n = j["numerics"];
        const std::string np = "numerics";
        opt_field(n, "beta_max", np, c.solver.beta_max, as_int);
        opt_field(n, "reach_margin", np, c.solver.reach_margin, as_double);
        opt_field(n, "tail_tolerance", np, c.solver.tail_tolerance, as_double);
        if (n.contains("radial")) {
            const json& r = n["radial"];
            const std::string rp = np + ".radial";
            opt_field(r, "panel_order", rp, c.solver.grid.panel_order, as_int);
            opt_field(r, "first_panel", rp, c.solver.grid.first_panel, as_double);
            opt_field(r, "growth", rp, c.solver.grid.growth, as_double);
            opt_field(r, "max_width", rp, c.solver.grid.max_width, as_double);
            opt_field(r, "pole_fraction", rp, c.solver.grid.pole_fraction, as_double);
            opt_field(r, "pole_guard", rp, c.solver.grid.pole_guard, as_double);
        }
        if (n.contains("laplace")) {
            const json& l = n["laplace"];
            const std::string lp = np + ".laplace";
            opt_field(l, "order", lp, c.solver.laplace.order, as_int);
            opt_field(l, "step", lp, c.solver.laplace.step, as_double);
            opt_field(l, "log_tail", lp, c.solver.laplace.log_tail, as_double);
        }
        if (n.contains("residual")) {
            const json& r = n["residual"];
            const std::string rp = np + ".residual";
            opt_field(r, "levels", rp, c.residual.levels, as_int);
            opt_field(r, "pad", rp, c.residual.pad, as_int);
        }
        if (c.solver.beta_max < c.problem.S)
            fail(np + ".beta_max", "must be at least S");
    }
    c.solver.laplace.Delta = c.geometry.Delta;
    if (j.contains("coeffs")) {
        const json& q = j["coeffs"];
        opt_field(q, "sectors", "coeffs", c.coeffs.sectors, as_ints);
        opt_field(q, "eps_moduli", "coeffs", c.coeffs.eps_moduli, as_doubles);
        opt_field(q, "t_abs_max", "coeffs", c.coeffs.t_abs_max, as_double);
    }
    if (j.contains("solve")) {
        const json& s = j["solve"];
        opt_field(s, "sector", "solve", c.solve.sector, as_int);
        opt_field(s, "eps_moduli", "solve", c.solve.eps_moduli, as_doubles);
        opt_field(s, "t_min", "solve", c.solve.t_min, as_double);
        opt_field(s, "t_max", "solve", c.solve.t_max, as_double);
        opt_field(s, "t_arg", "solve", c.solve.t_arg, as_double);
        opt_field(s, "h", "solve", c.solve.h, as_double);
        opt_field(s, "z_points", "solve", c.solve.z_points, as_int);
        opt_field(s, "z_factor", "solve", c.solve.z_factor, as_double);
        if (c.solve.z_factor <= 0.0 || c.solve.z_factor >= 0.5)
            fail("solve.z_factor", "must lie in (0, 0.5) (|z| < 1/(2 Z0))");
        if (!(c.solve.t_min > 0.0 && c.solve.t_max > c.solve.t_min)) fail("solve.t_min", "need 0 < t_min < t_max");
        if (!(c.solve.h > 0.0)) fail("solve.h", "must be positive");
    }
    if (j.contains("campaign")) {
        const json& s = j["campaign"];
        auto& cs = c.campaign;
        opt_field(s, "gaps", "campaign", cs.gaps, as_ints);
        opt_field(s, "samples", "campaign", cs.samples, as_int);
        opt_field(s, "t_points", "campaign", cs.t_points, as_int);
        opt_field(s, "t_arg", "campaign", cs.t_arg, as_double);
        opt_field(s, "z_points", "campaign", cs.z_points, as_int);
        opt_field(s, "z_factor", "campaign", cs.z_factor, as_double);
        opt_field(s, "noise_factor", "campaign", cs.noise_factor, as_double);
        opt_field(s, "guard", "campaign", cs.guard, as_double);
        opt_field(s, "tolerance", "campaign", cs.tolerance, as_double);
        if (s.contains("first_kind"))
            cs.first_kind = parse_window(s["first_kind"], "campaign.first_kind", cs.first_kind);
        if (s.contains("second_kind"))
            cs.second_kind = parse_window(s["second_kind"], "campaign.second_kind", cs.second_kind);
        if (s.contains("empty")) cs.empty = parse_window(s["empty"], "campaign.empty", cs.empty);
        if (cs.z_factor >= 0.5) fail("campaign.z_factor", "must be < 0.5 (|z| < 1/(2 Z0))");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    for (int s : c.coeffs.sectors)
        if (s < 0 || s >= int(c.geometry.covering.size())) fail("coeffs.sectors", "sector out of range");
    if (c.solve.sector < 0 || c.solve.sector >= int(c.geometry.covering.size()))
        fail("solve.sector", "sector out of range");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Parse, "cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, path + ": " + e.what());
    }
    return parse_config(j);
}

}  // namespace gevlab
