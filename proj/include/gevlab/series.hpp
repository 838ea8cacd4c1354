#pragma once

#include <vector>

#include "gevlab/common.hpp"

namespace gevlab {

enum class SeriesVar { T, Tau, Z, Epsilon };

// Finite power series sum_{n < order} c_n x^n; products are truncated at the order.
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(std::vector<cplx> coeffs, SeriesVar var = SeriesVar::T)
        : c_(std::move(coeffs)), var_(var) {}
    static TruncatedSeries zero(int order, SeriesVar var = SeriesVar::T) {
        return TruncatedSeries(std::vector<cplx>(order, 0.0), var);
    }
    static TruncatedSeries monomial(int n, int order, cplx a = 1.0, SeriesVar var = SeriesVar::T);

    int order() const { return int(c_.size()); }
    SeriesVar var() const { return var_; }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx operator[](int n) const { return n < order() ? c_[n] : cplx(0.0); }
    cplx& at(int n) { return c_.at(n); }

    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator-(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    TruncatedSeries scaled(cplx a) const;
    TruncatedSeries derivative() const;
    // x^m times the series, truncated.
    TruncatedSeries shifted(int m) const;
    cplx eval(cplx x) const;
    double max_abs_diff(const TruncatedSeries& o) const;

private:
    std::vector<cplx> c_;
    SeriesVar var_ = SeriesVar::T;
};

// Polynomial in (t, z): c[i][j] multiplies t^i z^j.
class Bivariate {
public:
    Bivariate() = default;
    Bivariate(int deg_t, int deg_z);

    int deg_t() const { return int(c_.size()) - 1; }
    int deg_z() const { return c_.empty() ? -1 : int(c_[0].size()) - 1; }
    cplx get(int i, int j) const;
    void add_to(int i, int j, cplx v);

    Bivariate operator+(const Bivariate& o) const;
    Bivariate operator-(const Bivariate& o) const;
    Bivariate scaled(cplx a) const;
    Bivariate dz(int m = 1) const;
    Bivariate dt(int m = 1) const;
    Bivariate times_t(int s) const;
    // t^{k+1} d_t applied m times.
    Bivariate euler(int k, int m = 1) const;
    // Product with a polynomial in z (coefficients of z^j).
    Bivariate times_z_poly(const std::vector<cplx>& zpoly) const;
    double max_abs() const;
    cplx eval(cplx t, cplx z) const;

private:
    void grow(int deg_t, int deg_z);
    std::vector<std::vector<cplx>> c_;
};

}  // namespace gevlab
