#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "magbill/errors.hpp"

namespace magbill {

struct Tolerances {
    double quad_rel = 1e-10;  ///< relative quadrature tolerance
    double ode_step = 1e-3;   ///< fixed RK4 step, arclength units
    double root_tol = 1e-13;  ///< bracketing tolerance for root finding

    void validate() const {
        if (!(quad_rel > 0.0) || !(ode_step > 0.0) || !(root_tol > 0.0))
            throw std::invalid_argument("Tolerances must be strictly positive");
    }
};

/// Bessel function J_n(w) of nonnegative integer order, summed directly from
/// the power series. Accumulation in long double keeps the alternating-sum
/// cancellation below ~1e-13 for |w| up to the first half dozen J1 roots.
double bessel_j(int n, double w);

/// First k positive roots of J_1, strictly increasing. Isolation by a sign
/// scan with step 0.5, then bisection; each root r has |J_1(r)| < 1e-12.
std::vector<double> bessel_j1_roots(int k);

namespace quad_detail {

// 15-point Kronrod nodes on [-1,1] (positive half, descending; last is 0)
// and weights, with the embedded 7-point Gauss weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Cell {
    double a, b;
    std::array<double, N> integral;
    std::array<double, N> err;
    std::array<double, N> resabs;
    double maxerr;  // split priority
};

template <std::size_t N, class F>
Cell<N> gk15(F&& f, double a, double b) {
    const double hl = 0.5 * (b - a);
    const double cen = 0.5 * (a + b);

    std::array<std::array<double, N>, 15> fv{};
    // fv[0..6]: center - hl*x for x = xgk[0..6]; fv[7]: center; fv[8..14]: center + hl*x.
    for (int j = 0; j < 7; ++j) fv[j] = f(cen - hl * kXgk[j]);
    fv[7] = f(cen);
    for (int j = 0; j < 7; ++j) fv[8 + j] = f(cen + hl * kXgk[j]);

    Cell<N> out{a, b, {}, {}, {}, 0.0};
    for (std::size_t i = 0; i < N; ++i) {
        double resk = kWgk[7] * fv[7][i];
        double resg = kWg[3] * fv[7][i];
        double resabs = std::abs(resk);
        for (int j = 0; j < 7; ++j) {
            const double sum = fv[j][i] + fv[8 + j][i];
            resk += kWgk[j] * sum;
            resabs += kWgk[j] * (std::abs(fv[j][i]) + std::abs(fv[8 + j][i]));
            if (j % 2 == 1) resg += kWg[j / 2] * sum;  // xgk odd indices are Gauss nodes
        }
        const double reskh = resk * 0.5;
        double resasc = kWgk[7] * std::abs(fv[7][i] - reskh);
        for (int j = 0; j < 7; ++j)
            resasc += kWgk[j] * (std::abs(fv[j][i] - reskh) + std::abs(fv[8 + j][i] - reskh));
        resasc *= std::abs(hl);
        resabs *= std::abs(hl);

        double err = std::abs((resk - resg) * hl);
        if (resasc != 0.0 && err != 0.0)
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        const double eps = std::numeric_limits<double>::epsilon();
        if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
            err = std::max(err, 50.0 * eps * resabs);

        out.integral[i] = resk * hl;
        out.err[i] = err;
        out.resabs[i] = resabs;
        out.maxerr = std::max(out.maxerr, err);
    }
    return out;
}

}  // namespace quad_detail

/// Globally adaptive Gauss-Kronrod 7-15 quadrature for a vector-valued
/// integrand f : double -> array<double,N>. All components are integrated on
/// the shared node set; the worst cell is split until every component meets
/// err_i <= max(rel_tol*|I_i|, 1e-15*resabs_i). Throws QuadratureError if the
/// cell budget is exhausted first.
template <std::size_t N, class F>
std::array<double, N> quad_vec(F&& f, double a, double b, double rel_tol,
                               int max_cells = 4096) {
    std::array<double, N> total{};
    if (a == b) return total;

    using Cell = quad_detail::Cell<N>;
    auto cmp = [](const Cell& u, const Cell& v) { return u.maxerr < v.maxerr; };
    std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> cells(cmp);
    cells.push(quad_detail::gk15<N>(f, a, b));

    std::array<double, N> err_sum{}, int_sum{}, abs_sum{};
    {
        const Cell& c0 = cells.top();
        err_sum = c0.err;
        int_sum = c0.integral;
        abs_sum = c0.resabs;
    }

    int n_cells = 1;
    while (true) {
        bool ok = true;
        const double eps = std::numeric_limits<double>::epsilon();
        for (std::size_t i = 0; i < N; ++i) {
            // Floors: the attainable roundoff level (each cell reports at
            // least 50*eps*resabs) and an absolute scale for integrands that
            // vanish identically up to rounding noise.
            const double bound =
                std::max({rel_tol * std::abs(int_sum[i]), 100.0 * eps * abs_sum[i],
                          1e-16 * std::abs(b - a), 1e-300});
            if (err_sum[i] > bound) { ok = false; break; }
        }
        if (ok) break;
        if (n_cells >= max_cells)
            throw QuadratureError("quad_vec: no convergence after max subdivisions "
                                  "(pathological integrand?)");

        Cell worst = cells.top();
        cells.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Cell left = quad_detail::gk15<N>(f, worst.a, mid);
        Cell right = quad_detail::gk15<N>(f, mid, worst.b);
        for (std::size_t i = 0; i < N; ++i) {
            int_sum[i] += left.integral[i] + right.integral[i] - worst.integral[i];
            err_sum[i] += left.err[i] + right.err[i] - worst.err[i];
            abs_sum[i] += left.resabs[i] + right.resabs[i] - worst.resabs[i];
        }
        cells.push(left);
        cells.push(right);
        ++n_cells;
    }
    return int_sum;
}

/// Adaptive quadrature of a scalar integrand with relative tolerance
/// tol.quad_rel. Signed: a > b integrates with a sign flip.
double quad_1d(const std::function<double(double)>& f, double a, double b,
               const Tolerances& tol);

/// Classic fixed-step RK4. The final step is shortened so the last sample
/// lands exactly on s_max.
template <std::size_t N>
struct OdeSamples {
    std::vector<double> s;
    std::vector<std::array<double, N>> y;
};

template <std::size_t N, class F>
OdeSamples<N> rk4_integrate(F&& deriv, const std::array<double, N>& y0,
                            double s_max, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("rk4_integrate: h must be positive");
    OdeSamples<N> out;
    const std::size_t n_steps =
        static_cast<std::size_t>(std::ceil(s_max / h - 1e-12));
    out.s.reserve(n_steps + 1);
    out.y.reserve(n_steps + 1);

    std::array<double, N> y = y0;
    double s = 0.0;
    out.s.push_back(s);
    out.y.push_back(y);

    auto axpy = [](const std::array<double, N>& u, double c,
                   const std::array<double, N>& v) {
        std::array<double, N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = u[i] + c * v[i];
        return r;
    };

    while (s < s_max - 1e-15 * std::max(1.0, s_max)) {
        const double hs = std::min(h, s_max - s);
        const auto k1 = deriv(s, y);
        const auto k2 = deriv(s + 0.5 * hs, axpy(y, 0.5 * hs, k1));
        const auto k3 = deriv(s + 0.5 * hs, axpy(y, 0.5 * hs, k2));
        const auto k4 = deriv(s + hs, axpy(y, hs, k3));
        for (std::size_t i = 0; i < N; ++i)
            y[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        s += hs;
        out.s.push_back(s);
        out.y.push_back(y);
    }
    return out;
}

/// Bisection on a bracketed sign change; returns the midpoint of the final
/// bracket of width <= xtol.
double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol, int max_iter = 200);

/// Scan [a,b] in n equal steps and return all sign-change brackets.
std::vector<std::pair<double, double>> scan_brackets(
    const std::function<double(double)>& f, double a, double b, int n);

/// Gauss-Legendre nodes and weights on [-1,1], by Newton iteration on the
/// three-term recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace magbill
