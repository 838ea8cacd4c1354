#include "gevlab/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace gevlab {

double measure_difference(const SolutionField& a, const SolutionField& b, int e) {
    if (a.t.size() != b.t.size() || a.z.size() != b.z.size())
        throw Error(ErrorCode::InvalidArgument, "difference of fields on mismatched grids");
    for (std::size_t i = 0; i < a.t.size(); ++i)
        if (a.t[i] != b.t[i]) throw Error(ErrorCode::InvalidArgument, "t grids differ");
    for (std::size_t i = 0; i < a.z.size(); ++i)
        if (a.z[i] != b.z[i]) throw Error(ErrorCode::InvalidArgument, "z grids differ");
    if (std::abs(a.eps[e].value() - b.eps[e].value()) > 1e-14 * a.eps[e].modulus)
        throw Error(ErrorCode::InvalidArgument, "fields sampled at different eps");
    double d = 0.0;
    for (int ti = 0; ti < int(a.t.size()); ++ti)
        for (int zi = 0; zi < int(a.z.size()); ++zi)
            d = std::max(d, std::abs(b.value(e, ti, zi) - a.value(e, ti, zi)));
    return d;
}

GevreyFit fit_decay(const std::vector<FitSample>& s) {
    const int n = int(s.size());
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "decay fit needs at least three samples");
    double dmax = 0.0;
    for (const auto& q : s) {
        if (!(q.difference > 0.0) || !(q.eps_abs > 0.0))
            throw Error(ErrorCode::InvalidArgument, "decay fit needs positive samples");
        dmax = std::max(dmax, q.difference);
    }
    auto small = std::min_element(s.begin(), s.end(),
                                  [](auto& a, auto& b) { return a.eps_abs < b.eps_abs; });
    auto large = std::max_element(s.begin(), s.end(),
                                  [](auto& a, auto& b) { return a.eps_abs < b.eps_abs; });
    if (!(small->difference < large->difference))
        throw Error(ErrorCode::InsufficientDecay, "difference does not shrink with |eps|");

    // First pass.
    const double logK0 = std::log(dmax) + 1.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& q : s) {
        double x = std::log(q.eps_abs);
        double y = std::log(logK0 - std::log(q.difference));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icpt = (sy - slope * sx) / n;
    Eigen::Vector3d th(logK0, icpt, -slope);  // (log K, log M, rhat)

    auto residuals = [&](const Eigen::Vector3d& t, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        r.resize(n);
        if (J) J->resize(n, 3);
        for (int i = 0; i < n; ++i) {
            double le = std::log(s[i].eps_abs);
            double pw = std::exp(t[1] - t[2] * le);  // M eps^{-rhat}
            r[i] = std::log(s[i].difference) - (t[0] - pw);
            if (J) {
                (*J)(i, 0) = -1.0;
                (*J)(i, 1) = pw;
                (*J)(i, 2) = -pw * le;
            }
        }
    };
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    residuals(th, r, &J);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    GevreyFit fit;
    for (int it = 0; it < 500; ++it) {
        Eigen::Matrix3d A = J.transpose() * J;
        Eigen::Vector3d g = J.transpose() * r;
        Eigen::Matrix3d Ad = A;
        for (int d = 0; d < 3; ++d) Ad(d, d) += lambda * std::max(A(d, d), 1e-12);
        Eigen::Vector3d step = Ad.ldlt().solve(-g);
        Eigen::Vector3d trial = th + step;
        Eigen::VectorXd rt;
        residuals(trial, rt, nullptr);
        double ct = rt.squaredNorm();
        fit.iterations = it + 1;
        if (std::isfinite(ct) && ct < cost) {
            bool done = (cost - ct) < 1e-15 * (1.0 + cost) && step.norm() < 1e-10;
            th = trial;
            cost = ct;
            residuals(th, r, &J);
            lambda = std::max(lambda / 3.0, 1e-12);
            if (done) break;
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) break;
        }
    }
    double mean = 0.0;
    for (const auto& q : s) mean += std::log(q.difference);
    mean /= n;
    double tot = 0.0;
    for (const auto& q : s) tot += std::pow(std::log(q.difference) - mean, 2);
    fit.K = std::exp(th[0]);
    fit.M = std::exp(th[1]);
    fit.rhat = th[2];
    fit.r_squared = tot > 0.0 ? 1.0 - cost / tot : 1.0;
    return fit;
}

double GevreyFitReport::relative_error() const {
    double pr = predicted.predicted_rhat();
    if (pr == 0.0) return 0.0;
    return std::abs(fit.rhat - pr) / pr;
}

GevreyFitReport fit_gevrey_level(const std::vector<FitSample>& samples, double noise_floor,
                                 double noise_factor) {
    GevreyFitReport rep;
    std::vector<FitSample> s = samples;
    std::sort(s.begin(), s.end(), [](auto& a, auto& b) { return a.eps_abs > b.eps_abs; });
    for (const auto& q : s) {
        rep.eps.push_back(q.eps_abs);
        rep.differences.push_back(q.difference);
        if (q.difference < noise_factor * noise_floor) rep.noise_flag = true;
    }
    rep.noise_floor = noise_floor;
    rep.monotone = true;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i].difference < s[i - 1].difference)) rep.monotone = false;
    if (!s.empty()) rep.decades = std::log10(s.front().eps_abs / s.back().eps_abs);
    rep.fit = fit_decay(s);
    if (s.size() > 3) {
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            std::vector<FitSample> sub;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != drop) sub.push_back(s[i]);
            double rh = fit_decay(sub).rhat;
            rep.loo_max_change = std::max(rep.loo_max_change, std::abs(rh - rep.fit.rhat) /
                                                                   std::abs(rep.fit.rhat));
        }
    }
    if (rep.noise_flag) rep.status = "NOISE_FLOOR";
    return rep;
}

namespace {

std::vector<double> geometric(double hi, double lo, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? hi : hi * std::pow(lo / hi, double(i) / (n - 1)));
    return out;
}

bool all_zero(const std::vector<InitialDatum>& d) {
    return std::all_of(d.begin(), d.end(), [](const auto& x) { return x.is_zero(); });
}

}  // namespace

GevreyFitReport measure_gap(const ProblemParams& p, const GeometryConfig& g,
                            const std::vector<InitialDatum>& data, const SolverOptions& opt,
                            const CampaignSpec& spec, int gap) {
    const int n = int(g.covering.size());
    const int j = (gap + 1) % n;
    GapClassification cls = classify_gap(g, p, gap);
    const double phi = sector_overlap(g.covering[gap], g.covering[j]).arg;
    const EpsWindow& w = cls.case_id == GapCase::SecondKind      ? spec.second_kind
                         : cls.case_id == GapCase::FirstKindOnly ? spec.first_kind
                                                                 : spec.empty;
    std::vector<double> cand = geometric(w.eps_max, w.eps_min, w.candidates);
    std::vector<EpsPoint> eps;
    for (double m : cand) eps.push_back({m, phi});

    const double tmax = t_radius(p, g.Delta) * 0.999;
    std::vector<cplx> t;
    for (int q = 0; q < spec.t_points; ++q) {
        double frac = spec.t_points == 1 ? 1.0 : 0.25 + 0.75 * q / (spec.t_points - 1);
        t.push_back(std::polar(tmax * frac, spec.t_arg));
    }
    // z radius from the majorant at the largest eps (Z0 grows with |eps|).
    double Z0 = 0.0;
    for (int sec : {gap, j}) {
        SolutionField probe = assemble_solution(p, g, sec, {eps.front()}, {t.back()}, {0.0}, data, opt);
        Z0 = std::max(Z0, probe.majorants[0].Z0);
    }
    const double zr = Z0 > 0.0 ? spec.z_factor / Z0 : spec.z_factor;
    std::vector<cplx> z;
    for (int q = 0; q < spec.z_points; ++q) z.push_back(std::polar(zr, 2.0 * kPi * q / spec.z_points));

    SolutionField fa = assemble_solution(p, g, gap, eps, t, z, data, opt);
    SolutionField fb = assemble_solution(p, g, j, eps, t, z, data, opt);
    std::vector<double> D(eps.size());
    for (std::size_t e = 0; e < eps.size(); ++e) D[e] = measure_difference(fa, fb, int(e));

    // Noise: rerun both ends of the window with doubled quadrature nodes.
    SolverOptions fine = opt;
    fine.grid.panel_order *= 2;
    fine.laplace.order *= 2;
    std::vector<EpsPoint> ends{eps.front(), eps.back()};
    double noise = 0.0;
    for (int sec : {gap, j}) {
        SolutionField f2 = assemble_solution(p, g, sec, ends, t, z, data, fine);
        const SolutionField& f1 = sec == gap ? fa : fb;
        for (int e2 = 0; e2 < 2; ++e2) {
            int e1 = e2 == 0 ? 0 : int(eps.size()) - 1;
            for (int ti = 0; ti < int(t.size()); ++ti)
                for (int zi = 0; zi < int(z.size()); ++zi)
                    noise = std::max(noise, std::abs(f2.value(e2, ti, zi) - f1.value(e1, ti, zi)));
        }
    }

    GevreyFitReport rep;
    rep.candidate_eps = cand;
    rep.candidate_differences = D;
    rep.z_radius = zr;
    rep.noise_floor = noise;
    if (cls.case_id == GapCase::Empty || all_zero(data)) {
        rep.eps = cand;
        rep.differences = D;
        rep.noise_flag = std::any_of(D.begin(), D.end(),
                                     [&](double d) { return d > spec.noise_factor * noise; });
        rep.status = all_zero(data) ? "SKIPPED" : "EMPTY";
        rep.gap = gap;
        rep.predicted = cls;
        return rep;
    }
    std::vector<FitSample> s;
    for (std::size_t e = 0; e < cand.size() && int(s.size()) < spec.samples; ++e)
        if (D[e] >= spec.guard * noise) s.push_back({cand[e], D[e]});
    try {
        rep = fit_gevrey_level(s, noise, spec.noise_factor);
        if (int(s.size()) < spec.samples) rep.status = "NOISE_FLOOR";
    } catch (const Error& e) {
        rep.status = e.code() == ErrorCode::InsufficientDecay ? "INSUFFICIENT_DECAY" : "NOISE_FLOOR";
        for (const auto& q : s) {
            rep.eps.push_back(q.eps_abs);
            rep.differences.push_back(q.difference);
        }
    }
    rep.candidate_eps = cand;
    rep.candidate_differences = D;
    rep.z_radius = zr;
    rep.noise_floor = noise;
    rep.gap = gap;
    rep.predicted = cls;
    return rep;
}

CampaignReport verify_two_levels(const ProblemParams& p, const GeometryConfig& g,
                                 const std::vector<InitialDatum>& data, const SolverOptions& opt,
                                 const CampaignSpec& spec) {
    CampaignReport rep;
    rep.degenerate = all_zero(data);
    std::vector<int> gaps = spec.gaps;
    if (gaps.empty())
        for (int i = 0; i < int(g.covering.size()); ++i) gaps.push_back(i);
    double min_first = 1e300, max_second = -1e300;
    rep.levels_match = true;
    rep.empty_null_ok = true;
    rep.r2_ok = true;
    for (int gap : gaps) {
        GevreyFitReport r = measure_gap(p, g, data, opt, spec, gap);
        const GapCase c = r.predicted.case_id;
        if (c == GapCase::FirstKindOnly) rep.first_kind_gaps.push_back(gap);
        if (c == GapCase::SecondKind) rep.second_kind_gaps.push_back(gap);
        if (r.status == "EMPTY" && r.noise_flag) rep.empty_null_ok = false;
        if (c != GapCase::Empty && !rep.degenerate) {
            bool ok = r.status == "OK" && r.relative_error() <= spec.tolerance;
            if (!ok) rep.levels_match = false;
            if (r.status == "OK" && r.fit.r_squared < 0.98) rep.r2_ok = false;
            if (r.status != "OK") rep.r2_ok = false;
            if (c == GapCase::FirstKindOnly) {
                rep.has_first = rep.has_first || r.status == "OK";
                min_first = std::min(min_first, r.fit.rhat);
            } else {
                rep.has_second = rep.has_second || r.status == "OK";
                max_second = std::max(max_second, r.fit.rhat);
            }
        }
        rep.gaps.push_back(std::move(r));
    }
    rep.ordering_ok = rep.has_first && rep.has_second && max_second < min_first;
    return rep;
}

}  // namespace gevlab
