#include "gevlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gevlab/angles.hpp"

namespace gevlab {
namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

void add(AssumptionReport& rep, std::string name, bool ok, double q, std::string detail) {
    rep.items.push_back({std::move(name), ok, q, std::move(detail)});
}

double ray_direction(const GeometryConfig& g, int i) {
    if (i < int(g.sd_directions.size())) return g.sd_directions[i];
    return g.rays.at(i);
}

}  // namespace

std::vector<double> first_kind_directions(const ProblemParams& p) {
    const int n = p.k * p.s2;
    std::vector<double> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j)
        out.push_back(wrap_angle((kPi * (2 * j + 1) + std::arg(p.a2)) / n));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> second_kind_directions(const ProblemParams& p, const Sector& sector) {
    const int gap = p.movable_gap();
    if (gap > 0 && sector.opening() >= 2.0 * kPi * p.s2 / gap)
        throw Error(ErrorCode::Assumption,
                    "sector opening " + fmt_num(sector.opening()) +
                        " violates the aperture bound 2*pi*s2/(s1*r2-s2*r1) = " +
                        fmt_num(2.0 * kPi * p.s2 / gap));
    const int n = p.k * p.s1;
    const double shift = double(gap) / p.s2 * sector.bisector();
    std::vector<double> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j)
        out.push_back(wrap_angle((kPi * (2 * j + 1) + std::arg(p.a1) + shift) / n));
    std::sort(out.begin(), out.end());
    return out;
}

double second_kind_halfwidth(const ProblemParams& p, const Sector& sector) {
    return double(p.movable_gap()) / double(p.k * p.s1 * p.s2) * sector.opening();
}

double rho_of(const ProblemParams& p, double eps_abs) {
    const double expo = double(p.movable_gap()) / double(p.s1 * p.s2 * p.k);
    return std::pow(std::abs(p.a1), 1.0 / (p.k * p.s1)) * std::pow(eps_abs, expo) /
           (2.0 * std::pow(double(p.k), 1.0 / p.k));
}

bool omega_membership(const GeometryConfig& g, const ProblemParams& p, cplx eps, cplx tau,
                      int sector_index) {
    const Sector& sec = g.covering.at(sector_index);
    const double mod = std::abs(tau);
    const double d = ray_direction(g, sector_index);
    bool in_base = mod < g.rho0 || (mod > 0.0 && angular_distance(std::arg(tau), d) < g.delta1);
    if (!in_base) return false;
    if (mod == 0.0) return true;
    if (mod < rho_of(p, std::abs(eps))) return true;
    for (double dj : second_kind_directions(p, sec))
        if (angular_distance(std::arg(tau), dj) < g.delta2) return false;
    return true;
}

bool AssumptionReport::all_passed() const {
    return std::all_of(items.begin(), items.end(), [](const auto& it) { return it.passed; });
}

std::vector<std::string> AssumptionReport::failures() const {
    std::vector<std::string> out;
    for (const auto& it : items)
        if (!it.passed) out.push_back(it.name + ": " + it.detail);
    return out;
}

Overlap sector_overlap(const Sector& a, const Sector& b) {
    Overlap best{0.0, 0.0, -1.0};
    for (int m = -2; m <= 2; ++m) {
        double lo = std::max(a.theta1, b.theta1 + 2.0 * kPi * m);
        double hi = std::min(a.theta2, b.theta2 + 2.0 * kPi * m);
        if (hi - lo > best.opening) best = {0.5 * (lo + hi), 2.0 * kPi * m, hi - lo};
    }
    return best;
}

AssumptionReport check_assumptions(const GeometryConfig& g, const ProblemParams& p) {
    AssumptionReport rep;
    try {
        p.validate();
        add(rep, "params.structure", true, 0.0, "structural ranges ok");
    } catch (const Error& e) {
        add(rep, "params.structure", false, 0.0, e.what());
        return rep;
    }

    const double a2_bound =
        std::pow(std::abs(p.a2), 1.0 / (p.k * p.s2)) / (2.0 * std::pow(double(p.k), 1.0 / p.k));
    add(rep, "A.2", g.rho0 < a2_bound, g.rho0,
        "rho0 = " + fmt_num(g.rho0) + " must be < |a2|^{1/(k s2)}/(2 k^{1/k}) = " +
            fmt_num(a2_bound));

    const int gap = p.movable_gap();
    add(rep, "B.1'", gap > p.s2, gap,
        "s1*r2 - s2*r1 = " + std::to_string(gap) + " must be > s2 = " + std::to_string(p.s2));

    NormParams np = NormParams::from(p);
    for (std::size_t n = 0; n < p.forcing.size(); ++n) {
        const auto& f = p.forcing[n];
        const std::string tag = "D[" + std::to_string(n) + "]";
        const int delta = p.delta(f);
        const int floor_term = int(std::floor(np.b * (double(delta) / p.k + f.kappa0)));
        bool ok = f.kappa0 >= 1 && p.S > f.kappa0 && p.S > f.kappa1 && delta >= p.k &&
                  p.S > floor_term + 1;
        add(rep, tag, ok, delta,
            "(s,kappa0,kappa1)=(" + std::to_string(f.s) + "," + std::to_string(f.kappa0) + "," +
                std::to_string(f.kappa1) + "): delta = " + std::to_string(delta) +
                " (needs >= k), S = " + std::to_string(p.S) +
                " needs > kappa0, > kappa1 and > floor(b(delta/k+kappa0))+1 = " +
                std::to_string(floor_term + 1));
        auto it = p.b_coeffs.find({f.kappa0, f.kappa1, 0});
        bool zero0 = true;
        if (it != p.b_coeffs.end())
            for (auto c : it->second)
                if (c != cplx(0.0)) zero0 = false;
        add(rep, tag + ".b0", zero0, 0.0, "b_{kappa0 kappa1 0}(eps) must vanish identically");
    }

    const int nsec = int(g.covering.size());
    if (nsec == 0) {
        add(rep, "covering", false, 0.0, "covering is empty");
        return rep;
    }
    if (int(g.rays.size()) != nsec) {
        add(rep, "rays", false, g.rays.size(), "one ray per covering sector is required");
        return rep;
    }

    // Good covering: consecutive overlaps and full angular coverage.
    bool consecutive = true;
    double min_overlap = 1e300;
    for (int i = 0; i < nsec; ++i) {
        const Sector& s = g.covering[i];
        if (!(s.theta1 >= 0.0 && s.theta1 < 2.0 * kPi && s.theta2 > s.theta1 &&
              s.opening() < 2.0 * kPi))
            consecutive = false;
        Overlap ov = sector_overlap(s, g.covering[(i + 1) % nsec]);
        min_overlap = std::min(min_overlap, ov.opening);
        if (nsec > 1 && !(ov.opening > 0.0)) consecutive = false;
    }
    std::vector<double> marks;
    for (const auto& s : g.covering) {
        marks.push_back(wrap_angle(s.theta1));
        marks.push_back(wrap_angle(s.theta2));
    }
    std::sort(marks.begin(), marks.end());
    bool covered = true;
    auto inside_any = [&](double a) {
        for (const auto& s : g.covering) {
            double l = s.lift(a);
            if (l > s.theta1 && l < s.theta2) return true;
        }
        return false;
    };
    for (std::size_t m = 0; m < marks.size(); ++m) {
        double next = (m + 1 < marks.size()) ? marks[m + 1] : marks[0] + 2.0 * kPi;
        if (!inside_any(marks[m]) || !inside_any(0.5 * (marks[m] + next))) covered = false;
    }
    add(rep, "good_covering", consecutive && covered, min_overlap,
        "consecutive sectors overlap (min overlap " + fmt_num(min_overlap) +
            ") and the union covers a punctured disc");

    const auto first = first_kind_directions(p);
    const double r = p.r();
    const double theta = kPi / p.k * (1.0 + 1e-3);
    for (int i = 0; i < nsec; ++i) {
        const Sector& s = g.covering[i];
        const std::string tag = "[" + std::to_string(i) + "]";
        const double aperture = gap > 0 ? 2.0 * kPi * p.s2 / gap : 1e300;
        add(rep, "C" + tag, s.opening() < aperture, s.opening(),
            "opening " + fmt_num(s.opening()) + " must be < " + fmt_num(aperture));
        const double need = double(gap) / (p.k * p.s1 * p.s2) * s.opening();
        add(rep, "delta2" + tag, g.delta2 > need, g.delta2,
            "delta2 = " + fmt_num(g.delta2) + " must exceed " + fmt_num(need));

        const double d = ray_direction(g, i);
        double dmin = 1e300;
        for (double f : first) dmin = std::min(dmin, angular_distance(d, f));
        add(rep, "def3.1" + tag, dmin > 1e-9, dmin,
            "distance of d_i to the nearest first-kind direction = " + fmt_num(dmin));

        std::vector<double> second;
        bool c_ok = true;
        try {
            second = second_kind_directions(p, s);
        } catch (const Error&) {
            c_ok = false;
        }
        if (c_ok) {
            const double hw = second_kind_halfwidth(p, s);
            double smin = 1e300;
            for (double dj : second) smin = std::min(smin, angular_distance(d, dj));
            add(rep, "def3.2" + tag, smin > hw, smin - hw,
                "distance of d_i to second-kind directions " + fmt_num(smin) +
                    " must exceed delta_2i = " + fmt_num(hw));
        }

        double worst = 0.0;
        for (double ea : {s.theta1, s.theta2})
            for (double ta : {g.t_sector.theta1, g.t_sector.theta2})
                worst = std::max(worst, angular_distance(r * ea + ta, d));
        add(rep, "def3.3" + tag, worst < theta / 2.0, worst,
            "max |arg(eps^r t) - d_i| = " + fmt_num(worst) + " must be < theta/2 = " +
                fmt_num(theta / 2.0));

        // Laplace aperture at the arguments where solutions are evaluated.
        std::vector<double> eval_args{s.bisector()};
        if (nsec > 1) {
            eval_args.push_back(sector_overlap(s, g.covering[(i + 1) % nsec]).arg);
            Overlap prev = sector_overlap(g.covering[(i + nsec - 1) % nsec], s);
            eval_args.push_back(prev.arg - prev.frame_offset);
        }
        double cmin = 1e300;
        for (double ea : eval_args)
            for (double ta : {g.t_sector.theta1, g.t_sector.bisector(), g.t_sector.theta2})
                cmin = std::min(cmin, std::cos(p.k * (g.rays[i] - r * ea - ta)));
        add(rep, "laplace_aperture" + tag, cmin >= g.Delta, cmin,
            "min cos(k(gamma_i - arg T)) at evaluation arguments = " + fmt_num(cmin) +
                " must be >= Delta = " + fmt_num(g.Delta));

        // Rays d_i inside D(0, rho0) lie in Omega(eps).
        bool omega_ok = true;
        for (double frac : {0.25, 0.5, 0.75}) {
            double ea = s.theta1 + frac * s.opening();
            double em = std::isfinite(s.radius) ? 0.5 * s.radius : 0.1;
            cplx eps = std::polar(em, ea);
            for (double t : {0.25, 0.5, 0.99})
                if (!omega_membership(g, p, eps, std::polar(t * g.rho0, d), i)) omega_ok = false;
        }
        add(rep, "omega_rays" + tag, omega_ok, 0.0,
            "points of the ray d_i inside D(0, rho0) belong to Omega(eps)");
    }
    return rep;
}

const char* to_string(GapCase c) {
    switch (c) {
        case GapCase::Empty: return "EMPTY";
        case GapCase::FirstKindOnly: return "FIRST_KIND_ONLY";
        case GapCase::SecondKind: return "SECOND_KIND";
    }
    return "UNKNOWN";
}

GapClassification classify_gap(const GeometryConfig& g, const ProblemParams& p, int i) {
    const int n = int(g.covering.size());
    if (i < 0 || i >= n || int(g.rays.size()) != n)
        throw Error(ErrorCode::InvalidArgument, "sector index out of range");
    const int j = (i + 1) % n;
    const Sector& si = g.covering[i];
    Overlap ov = sector_overlap(si, g.covering[j]);
    GapClassification out;
    out.gamma_from = g.rays[i];
    out.gamma_to = g.rays[j] + p.r() * ov.frame_offset;
    out.overlap_arg = ov.arg;

    const auto first = first_kind_directions(p);
    for (double ray : {out.gamma_from, out.gamma_to})
        for (double f : first)
            if (angular_distance(ray, f) < 1e-12)
                throw Error(ErrorCode::Domain, "ray lies on a first-kind singular direction");

    Arc arc = shorter_arc(out.gamma_from, out.gamma_to);
    bool has_first = false, has_second = false;
    for (double f : first)
        if (distance_to_arc(f, arc) == 0.0) {
            has_first = true;
            out.separating.push_back({f, false});
        }
    const double hw = second_kind_halfwidth(p, si);
    for (double d : second_kind_directions(p, si))
        if (distance_to_arc(d, arc) <= hw) {
            has_second = true;
            out.separating.push_back({d, true});
        }
    if (has_second) {
        out.case_id = GapCase::SecondKind;
        out.rhat_num = p.r1;
        out.rhat_den = p.s1;
    } else if (has_first) {
        out.case_id = GapCase::FirstKindOnly;
        out.rhat_num = p.r2;
        out.rhat_den = p.s2;
    }
    return out;
}

}  // namespace gevlab
