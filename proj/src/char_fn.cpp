#include "tickmoments/char_fn.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "tickmoments/errors.hpp"

namespace tickmoments {

namespace {

constexpr double kPi = std::numbers::pi;

// The integration window [-X, X] with X = 12/sigma keeps the truncated tail
// of |F_k| = exp(-a2 x^2 / 2) below e^{-72}.
constexpr double kWindowSigmas = 12.0;

// Hard cap on FFT size / oversampling so a pathological grid fails loudly
// instead of exhausting memory.
constexpr std::size_t kMaxFftSize = std::size_t{1} << 26;

void check_density_order(const CharFnApprox& approx) {
    if (approx.k == 1) {
        throw Error(Errc::invalid_argument,
                    "k=1 is a pure phase (point forecast); it has no density");
    }
    if (approx.k != 2 && approx.k != 3) {
        throw Error(Errc::invalid_argument,
                    "density approximation supports k in {2,3}, got " + std::to_string(approx.k));
    }
    if (!(approx.a2 > 0.0)) {
        throw Error(Errc::zero_variance, "zero price variance: density is a point mass");
    }
}

void check_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) {
        throw Error(Errc::invalid_argument, "density grid needs at least two points");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) {
            throw Error(Errc::invalid_argument, "density grid contains a non-finite point");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(Errc::invalid_argument, "density grid must be strictly increasing");
        }
    }
}

// In-place iterative radix-2 FFT with kernel e^{-2 pi i j m / N}.
void fft(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t t = 0; t < n / 2; ++t) {
        twiddle[t] = std::polar(1.0, -2.0 * kPi * static_cast<double>(t) / static_cast<double>(n));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[base + j];
                const std::complex<double> v = a[base + j + len / 2] * twiddle[j * stride];
                a[base + j] = u + v;
                a[base + j + len / 2] = u - v;
            }
        }
    }
}

// Inversion samples eta(p0 + m*delta) for m = 0..m_count-1 from an n-point
// trapezoid of (1/2pi) integral F(x) e^{-ipx} dx over [-X, X], X = pi/delta.
// Sampling x at spacing dx = 2pi/(n*delta) makes the p-domain result
// periodic with period n*delta; the caller chooses n large enough that the
// aliased images sit far outside the requested grid.
std::vector<double> invert_on_fine_grid(const CharFnApprox& approx, double p0, double delta,
                                        std::size_t m_count, std::size_t n) {
    const double dx = 2.0 * kPi / (static_cast<double>(n) * delta);
    const double x_max = 0.5 * static_cast<double>(n) * dx;
    std::vector<std::complex<double>> a(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = -x_max + dx * static_cast<double>(j);
        a[j] = eval_charfn(approx, x) * std::polar(1.0, -p0 * dx * static_cast<double>(j));
    }
    fft(a);
    std::vector<double> out(m_count);
    const double scale = dx / (2.0 * kPi);
    for (std::size_t m = 0; m < m_count; ++m) {
        const double p = p0 + delta * static_cast<double>(m);
        out[m] = scale * (std::polar(1.0, p * x_max) * a[m]).real();
    }
    return out;
}

// Direct quadrature fallback for irregular grids. The integrand folds to
//   eta(p) = (1/pi) integral_0^X exp(-a2 x^2/2) cos((a1-p)x - a3 x^3/6) dx
// by Hermitian symmetry; composite Simpson over n_intervals.
double invert_direct_point(const CharFnApprox& approx, double p, double x_max,
                           std::size_t n_intervals) {
    const double h = x_max / static_cast<double>(n_intervals);
    const double u = approx.a1 - p;
    auto integrand = [&](double x) {
        return std::exp(-0.5 * approx.a2 * x * x) *
               std::cos(u * x - approx.a3 * x * x * x / 6.0);
    };
    double odd = 0.0, even = 0.0;
    for (std::size_t j = 1; j < n_intervals; ++j) {
        const double fx = integrand(h * static_cast<double>(j));
        if (j % 2 == 1) odd += fx;
        else even += fx;
    }
    const double simpson = (integrand(0.0) + integrand(x_max) + 4.0 * odd + 2.0 * even) * h / 3.0;
    return simpson / kPi;
}

double trapezoid_mass(const std::vector<double>& grid, const std::vector<double>& f) {
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        mass += 0.5 * (f[i] + f[i + 1]) * (grid[i + 1] - grid[i]);
    }
    return mass;
}

void check_convergence(const std::vector<double>& coarse, const std::vector<double>& fine) {
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        err = std::max(err, std::abs(coarse[i] - fine[i]));
        scale = std::max(scale, std::abs(fine[i]));
    }
    if (err > 1e-5 * scale) {
        throw Error(Errc::quadrature_failure,
                    "inversion did not converge: doubling the quadrature resolution moved the "
                    "result by " +
                        std::to_string(err / scale) + " relative");
    }
}

DensityApprox finish_density(std::vector<double> grid, std::vector<double> raw) {
    DensityApprox out;
    out.raw_density = raw;
    const double raw_mass = trapezoid_mass(grid, raw);
    std::vector<double> clipped(raw.size());
    std::vector<double> negative(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        clipped[i] = std::max(raw[i], 0.0);
        negative[i] = std::max(-raw[i], 0.0);
    }
    const double lost = trapezoid_mass(grid, negative);
    if (lost < 1e-12) {
        out.clipped_mass = 0.0;
        out.density = std::move(clipped);
    } else {
        out.clipped_mass = lost;
        const double kept = trapezoid_mass(grid, clipped);
        const double rescale = kept > 0.0 ? raw_mass / kept : 1.0;
        for (double& d : clipped) d *= rescale;
        out.density = std::move(clipped);
    }
    out.grid = std::move(grid);
    return out;
}

} // namespace

CharFnApprox fit_charfn(const PriceMoments& moments, int k) {
    if (k < 1 || k > 3) {
        throw Error(Errc::invalid_argument, "approximation order must be in {1,2,3}, got " +
                                                std::to_string(k));
    }
    if (moments.n_max < k) {
        throw Error(Errc::insufficient_moments,
                    "order-" + std::to_string(k) + " fit needs " + std::to_string(k) +
                        " price moments, have " + std::to_string(moments.n_max));
    }
    CharFnApprox approx;
    approx.k = k;
    approx.a1 = moments.price_moment(1);
    if (k >= 2) {
        const double raw = moments.variance_raw.value();
        const double band = kVarianceBandRel * moments.price_moment(2);
        if (raw < -band) {
            throw Error(Errc::negative_variance,
                        "p(2) - p(1)^2 = " + std::to_string(raw) +
                            " is negative beyond rounding: prices and volumes anticorrelate");
        }
        approx.a2 = moments.variance.value();
    }
    if (k >= 3) {
        const double p1 = moments.price_moment(1);
        approx.a3 = moments.price_moment(3) - 3.0 * moments.price_moment(2) * p1 +
                    2.0 * p1 * p1 * p1;
    }
    return approx;
}

std::complex<double> eval_charfn(const CharFnApprox& approx, double x) {
    if (!std::isfinite(x)) {
        throw Error(Errc::invalid_argument, "characteristic function argument must be finite");
    }
    // exp of sum_{m<=k} (i^m/m!) a_m x^m: odd terms are imaginary, the even
    // one is the real decay term.
    double re = 0.0;
    double im = approx.a1 * x;
    if (approx.k >= 2) re = -0.5 * approx.a2 * x * x;
    if (approx.k >= 3) im -= approx.a3 * x * x * x / 6.0;
    const double mag = std::exp(re);
    return {mag * std::cos(im), mag * std::sin(im)};
}

DensityApprox gaussian_density(const CharFnApprox& approx, std::vector<double> grid) {
    if (approx.k != 2) {
        throw Error(Errc::invalid_argument,
                    "closed-form Gaussian density requires k=2, got " + std::to_string(approx.k));
    }
    if (!(approx.a2 > 0.0)) {
        throw Error(Errc::zero_variance, "zero price variance: density is a point mass");
    }
    check_grid(grid);
    const double sigma = std::sqrt(approx.a2);
    const double slack = 1e-9 * sigma;
    if (grid.front() > approx.a1 - 6.0 * sigma + slack ||
        grid.back() < approx.a1 + 6.0 * sigma - slack) {
        throw Error(Errc::invalid_argument,
                    "grid must cover [mean - 6 sigma, mean + 6 sigma]");
    }
    DensityApprox out;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));
    out.density.reserve(grid.size());
    for (double p : grid) {
        const double z = (p - approx.a1) / sigma;
        out.density.push_back(norm * std::exp(-0.5 * z * z));
    }
    out.raw_density = out.density;
    out.clipped_mass = 0.0;
    out.grid = std::move(grid);
    return out;
}

DensityApprox invert_charfn(const CharFnApprox& approx, std::vector<double> grid) {
    check_density_order(approx);
    check_grid(grid);
    const double sigma = std::sqrt(approx.a2);
    const double x_needed = kWindowSigmas / sigma;
    const std::size_t m = grid.size();
    const double dp = (grid.back() - grid.front()) / static_cast<double>(m - 1);

    bool uniform = true;
    for (std::size_t i = 1; i < m; ++i) {
        if (std::abs((grid[i] - grid[i - 1]) - dp) > 1e-9 * dp) {
            uniform = false;
            break;
        }
    }

    std::vector<double> raw;
    if (uniform) {
        // Refine the p-spacing until the x-window pi/delta covers [-X, X],
        // then pad the transform so the p-domain period clears the grid span
        // plus the density's support.
        std::size_t r = 1;
        while (kPi * static_cast<double>(r) / dp < x_needed) {
            r <<= 1;
            if (r > kMaxFftSize) {
                throw Error(Errc::quadrature_failure,
                            "grid spacing too coarse relative to the distribution width");
            }
        }
        const double delta = dp / static_cast<double>(r);
        const std::size_t m_fine = r * (m - 1) + 1;
        const double min_period = (grid.back() - grid.front()) + 2.0 * kWindowSigmas * sigma;
        std::size_t n = 4096;
        while (n < m_fine || static_cast<double>(n) * delta < min_period) {
            n <<= 1;
            if (n > kMaxFftSize) {
                throw Error(Errc::quadrature_failure,
                            "grid too large for the FFT inversion");
            }
        }
        const auto coarse = invert_on_fine_grid(approx, grid.front(), delta, m_fine, n);
        const auto fine = invert_on_fine_grid(approx, grid.front(), delta, m_fine, 2 * n);
        std::vector<double> coarse_pts(m), fine_pts(m);
        for (std::size_t i = 0; i < m; ++i) {
            coarse_pts[i] = coarse[i * r];
            fine_pts[i] = fine[i * r];
        }
        check_convergence(coarse_pts, fine_pts);
        raw = std::move(fine_pts);
    } else {
        constexpr std::size_t kIntervals = 16384;
        std::vector<double> coarse_pts(m), fine_pts(m);
        for (std::size_t i = 0; i < m; ++i) {
            coarse_pts[i] = invert_direct_point(approx, grid[i], x_needed, kIntervals);
            fine_pts[i] = invert_direct_point(approx, grid[i], x_needed, 2 * kIntervals);
        }
        check_convergence(coarse_pts, fine_pts);
        raw = std::move(fine_pts);
    }
    return finish_density(std::move(grid), std::move(raw));
}

std::vector<double> uniform_grid(double center, double sigma, int n_points, double n_sigmas) {
    if (n_points < 2 || n_points > (1 << 24)) {
        throw Error(Errc::invalid_argument, "grid size must be in [2, 2^24]");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(Errc::zero_variance, "grid width requires a positive sigma");
    }
    if (!(n_sigmas > 0.0) || !std::isfinite(n_sigmas) || !std::isfinite(center)) {
        throw Error(Errc::invalid_argument, "grid center and width must be finite and positive");
    }
    const double lo = center - n_sigmas * sigma;
    const double hi = center + n_sigmas * sigma;
    const double step = (hi - lo) / static_cast<double>(n_points - 1);
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        grid[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

} // namespace tickmoments
