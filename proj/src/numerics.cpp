#include "magbill/numerics.hpp"

#include <cmath>

#include "magbill/vec2.hpp"

namespace magbill {

double bessel_j(int n, double w) {
    if (n < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
    const long double half = static_cast<long double>(w) / 2.0L;
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i) term *= half / i;
    long double sum = term;
    const long double msq = -half * half;
    for (int j = 1; j < 500; ++j) {
        term *= msq / (static_cast<long double>(j) * (n + j));
        sum += term;
        if (std::abs(term) < 1e-16L * (1.0L + std::abs(sum))) break;
    }
    return static_cast<double>(sum);
}

std::vector<double> bessel_j1_roots(int k) {
    if (k < 1) throw std::invalid_argument("bessel_j1_roots: k must be >= 1");
    std::vector<double> roots;
    roots.reserve(k);
    const double step = 0.5;
    double a = step;              // J1 > 0 on (0, first root)
    double fa = bessel_j(1, a);
    while (static_cast<int>(roots.size()) < k) {
        const double b = a + step;
        const double fb = bessel_j(1, b);
        if ((fa < 0.0) != (fb < 0.0)) {
            double lo = a, hi = b, flo = fa;
            for (int it = 0; it < 120 && hi - lo > 1e-14 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = bessel_j(1, mid);
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    return roots;
}

double quad_1d(const std::function<double(double)>& f, double a, double b,
               const Tolerances& tol) {
    const double sgn = (a <= b) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    auto fv = [&f](double t) { return std::array<double, 1>{f(t)}; };
    return sgn * quad_vec<1>(fv, lo, hi, tol.quad_rel)[0];
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol, int max_iter) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw std::invalid_argument("bisect: no sign change on bracket");
    for (int it = 0; it < max_iter && std::abs(b - a) > xtol; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

std::vector<std::pair<double, double>> scan_brackets(
    const std::function<double(double)>& f, double a, double b, int n) {
    std::vector<std::pair<double, double>> out;
    double t0 = a;
    double f0 = f(t0);
    for (int i = 1; i <= n; ++i) {
        const double t1 = a + (b - a) * i / n;
        const double f1 = f(t1);
        if ((f0 < 0.0) != (f1 < 0.0) || f0 == 0.0) out.emplace_back(t0, t1);
        t0 = t1;
        f0 = f1;
    }
    return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

}  // namespace magbill
