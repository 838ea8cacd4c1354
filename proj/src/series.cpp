#include "gevlab/series.hpp"

#include <algorithm>
#include <cmath>

namespace gevlab {

TruncatedSeries TruncatedSeries::monomial(int n, int order, cplx a, SeriesVar var) {
    TruncatedSeries s = zero(order, var);
    if (n < order) s.c_[n] = a;
    return s;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
    int n = std::max(order(), o.order());
    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i) r[i] = (*this)[i] + o[i];
    return {r, var_};
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
    return *this + o.scaled(-1.0);
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
    int n = std::min(order(), o.order());
    std::vector<cplx> r(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) r[i + j] += c_[i] * o.c_[j];
    return {r, var_};
}

TruncatedSeries TruncatedSeries::scaled(cplx a) const {
    std::vector<cplx> r(c_);
    for (auto& v : r) v *= a;
    return {r, var_};
}

TruncatedSeries TruncatedSeries::derivative() const {
    std::vector<cplx> r(order(), 0.0);
    for (int i = 1; i < order(); ++i) r[i - 1] = double(i) * c_[i];
    return {r, var_};
}

TruncatedSeries TruncatedSeries::shifted(int m) const {
    std::vector<cplx> r(order(), 0.0);
    for (int i = 0; i + m < order(); ++i) r[i + m] = c_[i];
    return {r, var_};
}

cplx TruncatedSeries::eval(cplx x) const {
    cplx s = 0.0;
    for (int i = order(); i-- > 0;) s = s * x + c_[i];
    return s;
}

double TruncatedSeries::max_abs_diff(const TruncatedSeries& o) const {
    double m = 0.0;
    for (int i = 0; i < std::max(order(), o.order()); ++i) m = std::max(m, std::abs((*this)[i] - o[i]));
    return m;
}

Bivariate::Bivariate(int deg_t, int deg_z)
    : c_(std::max(deg_t + 1, 1), std::vector<cplx>(std::max(deg_z + 1, 1), 0.0)) {}

cplx Bivariate::get(int i, int j) const {
    if (i < 0 || j < 0 || i > deg_t() || j > deg_z()) return 0.0;
    return c_[i][j];
}

void Bivariate::grow(int dt, int dz) {
    if (c_.empty()) c_.assign(1, std::vector<cplx>(1, 0.0));
    int nz = std::max(dz, deg_z()) + 1;
    for (auto& row : c_) row.resize(nz, 0.0);
    if (dt > deg_t()) c_.resize(dt + 1, std::vector<cplx>(nz, 0.0));
}

void Bivariate::add_to(int i, int j, cplx v) {
    if (i > deg_t() || j > deg_z()) grow(i, j);
    c_[i][j] += v;
}

Bivariate Bivariate::operator+(const Bivariate& o) const {
    Bivariate r = *this;
    for (int i = 0; i <= o.deg_t(); ++i)
        for (int j = 0; j <= o.deg_z(); ++j)
            if (o.c_[i][j] != cplx(0.0)) r.add_to(i, j, o.c_[i][j]);
    return r;
}

Bivariate Bivariate::operator-(const Bivariate& o) const { return *this + o.scaled(-1.0); }

Bivariate Bivariate::scaled(cplx a) const {
    Bivariate r = *this;
    for (auto& row : r.c_)
        for (auto& v : row) v *= a;
    return r;
}

Bivariate Bivariate::dz(int m) const {
    Bivariate r(deg_t(), std::max(deg_z() - m, 0));
    for (int i = 0; i <= deg_t(); ++i)
        for (int j = m; j <= deg_z(); ++j) {
            double f = 1.0;
            for (int q = 0; q < m; ++q) f *= (j - q);
            r.c_[i][j - m] += f * c_[i][j];
        }
    return r;
}

Bivariate Bivariate::dt(int m) const {
    Bivariate r(std::max(deg_t() - m, 0), deg_z());
    for (int i = m; i <= deg_t(); ++i) {
        double f = 1.0;
        for (int q = 0; q < m; ++q) f *= (i - q);
        for (int j = 0; j <= deg_z(); ++j) r.c_[i - m][j] += f * c_[i][j];
    }
    return r;
}

Bivariate Bivariate::times_t(int s) const {
    Bivariate r(deg_t() + s, deg_z());
    for (int i = 0; i <= deg_t(); ++i)
        for (int j = 0; j <= deg_z(); ++j) r.c_[i + s][j] = c_[i][j];
    return r;
}

Bivariate Bivariate::euler(int k, int m) const {
    Bivariate r = *this;
    for (int q = 0; q < m; ++q) {
        Bivariate n(r.deg_t() + k, r.deg_z());
        for (int i = 1; i <= r.deg_t(); ++i)
            for (int j = 0; j <= r.deg_z(); ++j) n.c_[i + k][j] = double(i) * r.c_[i][j];
        r = std::move(n);
    }
    return r;
}

Bivariate Bivariate::times_z_poly(const std::vector<cplx>& zp) const {
    Bivariate r(deg_t(), deg_z() + std::max(int(zp.size()) - 1, 0));
    for (int i = 0; i <= deg_t(); ++i)
        for (int j = 0; j <= deg_z(); ++j)
            for (std::size_t q = 0; q < zp.size(); ++q) r.c_[i][j + q] += c_[i][j] * zp[q];
    return r;
}

double Bivariate::max_abs() const {
    double m = 0.0;
    for (const auto& row : c_)
        for (auto v : row) m = std::max(m, std::abs(v));
    return m;
}

cplx Bivariate::eval(cplx t, cplx z) const {
    cplx s = 0.0;
    for (int i = deg_t(); i >= 0; --i) {
        cplx row = 0.0;
        for (int j = deg_z(); j >= 0; --j) row = row * z + c_[i][j];
        s = s * t + row;
    }
    return s;
}

}  // namespace gevlab
