#include "covario/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "covario/error.hpp"
#include "covario/parallel.hpp"

namespace covario::oracles {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double RandomStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RandomStream::normal() { return normal_(engine_); }

MonteCarloEstimate mc_volume(const Membership& member, std::span<const double> lower, std::span<const double> upper,
                             std::uint64_t n, std::uint64_t seed) {
    if (lower.size() != upper.size() || lower.empty())
        throw Error(ErrorKind::InvalidArgument, "box bounds must have equal, non-zero dimension");
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
    const std::size_t dim = lower.size();
    double box = 1.0;
    for (std::size_t i = 0; i < dim; ++i) box *= upper[i] - lower[i];

    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> hits(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        RandomStream rng(seed, c);
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t end = std::min(n, begin + kChunk);
        std::vector<double> x(dim);
        std::uint64_t h = 0;
        for (std::uint64_t s = begin; s < end; ++s) {
            for (std::size_t i = 0; i < dim; ++i) x[i] = rng.uniform(lower[i], upper[i]);
            if (member(x)) ++h;
        }
        hits[c] = h;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    const double p = static_cast<double>(total) / static_cast<double>(n);
    return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

MonteCarloEstimate mc_area(const std::function<bool(Vec2)>& member, const BoundingBox& box, std::uint64_t n,
                           std::uint64_t seed) {
    const std::array<double, 2> lo{box.lo.x, box.lo.y}, hi{box.hi.x, box.hi.y};
    return mc_volume([&](std::span<const double> x) { return member({x[0], x[1]}); }, lo, hi, n, seed);
}

double lens_area(double r, double d) {
    if (d >= 2.0 * r) return 0.0;
    const double half = 0.5 * d;
    return 2.0 * r * r * std::acos(half / r) - half * std::sqrt(4.0 * r * r - d * d);
}

// ---------------------------------------------------------------------------

MatrixIdentityReport matrix_identities(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw Error(ErrorKind::InvalidArgument, "A and B must be square matrices of equal size");
    const Eigen::MatrixXd sum_inv = (a + b).inverse();
    MatrixIdentityReport r;
    r.expressions[0] = a - a * sum_inv * a;
    r.expressions[1] = b * sum_inv * a;
    r.expressions[2] = a * sum_inv * b;
    r.expressions[3] = (a.inverse() + b.inverse()).inverse();

    const double scale = r.expressions[3].cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            const double dev = (r.expressions[i] - r.expressions[j]).cwiseAbs().maxCoeff() / scale;
            r.max_relative_deviation = std::max(r.max_relative_deviation, dev);
        }
    }
    r.det_lhs = r.expressions[3].determinant();
    r.det_rhs = a.determinant() * b.determinant() / (a + b).determinant();
    r.det_relative_deviation = std::abs(r.det_lhs - r.det_rhs) / std::abs(r.det_rhs);
    return r;
}

Eigen::MatrixXd random_spd(int dim, double lo, double hi, RandomStream& rng) {
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd orth = qr.householderQ();
    Eigen::VectorXd eig(dim);
    for (int i = 0; i < dim; ++i) eig(i) = rng.uniform(lo, hi);
    Eigen::MatrixXd m = orth * eig.asDiagonal() * orth.transpose();
    return 0.5 * (m + m.transpose());
}

// ---------------------------------------------------------------------------

double sphere_surface_area(int k) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "sphere dimension must be >= 1");
    return 2.0 * std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k);
}

ParaboloidReport paraboloid_volume(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& q,
                                   double t, std::uint64_t n, std::uint64_t seed) {
    const int d = static_cast<int>(a.rows());
    if (d < 1 || a.cols() != d || b.rows() != d || b.cols() != d || q.size() != d)
        throw Error(ErrorKind::InvalidArgument, "A, B must be d x d and q of length d");
    const Eigen::MatrixXd harmonic = (a.inverse() + b.inverse()).inverse();
    const double quad = q.dot(harmonic * q);
    if (!(t > 0.0) || 2.0 * t - quad < 0.0) throw Error(ErrorKind::InvalidCap, "requires t > 0 and 2t >= <Qq, q>");

    ParaboloidReport r;
    r.dim = d;
    r.s = t - 0.5 * quad;
    const int dim_n = d + 1;
    const double expo = 0.5 * (dim_n + 1);
    const Eigen::MatrixXd sum = a + b;
    r.closed_form = sphere_surface_area(d) * std::pow(2.0, expo) / (dim_n * dim_n - 1.0) * std::pow(r.s, expo) /
                    std::sqrt(sum.determinant());
    r.statement_form = r.closed_form * std::pow(2.0, expo);

    // Bounding box: the x-footprint is the ellipsoid <(A+B) y, y> <= 2s around
    // y0 = (A+B)^-1 A q; the height lies in [0, t].
    const Eigen::MatrixXd sum_inv = sum.inverse();
    const Eigen::VectorXd center = sum_inv * a * q;
    std::vector<double> lo(static_cast<std::size_t>(dim_n)), hi(static_cast<std::size_t>(dim_n));
    for (int i = 0; i < d; ++i) {
        const double half = std::sqrt(2.0 * r.s * sum_inv(i, i));
        lo[static_cast<std::size_t>(i)] = center(i) - half;
        hi[static_cast<std::size_t>(i)] = center(i) + half;
    }
    lo.back() = 0.0;
    hi.back() = t;

    const auto member = [&](std::span<const double> p) {
        Eigen::Map<const Eigen::VectorXd> x(p.data(), d);
        const double h = p[static_cast<std::size_t>(d)];
        const Eigen::VectorXd xq = x - q;
        const double f1 = t - 0.5 * xq.dot(a * xq);
        const double f2 = 0.5 * x.dot(b * x);
        return f2 <= h && h <= f1;
    };
    r.estimate = mc_volume(member, lo, hi, n, seed);
    r.z_closed = (r.estimate.mean - r.closed_form) / r.estimate.std_error;
    r.z_statement = (r.estimate.mean - r.statement_form) / r.estimate.std_error;
    r.relative_error = std::abs(r.estimate.mean - r.closed_form) / r.closed_form;
    return r;
}

// ---------------------------------------------------------------------------
// Bessel functions

namespace {

long double taylor_jn(int order, long double x) {
    // sum_k (-1)^k (x/2)^{2k+order} / (k! (k+order)!)
    const long double half = x / 2.0L;
    long double term = 1.0L;
    for (int i = 1; i <= order; ++i) term *= half / i;
    long double sum = term;
    const long double h2 = half * half;
    for (int k = 1; k < 200; ++k) {
        term *= -h2 / (static_cast<long double>(k) * (k + order));
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) && k > 4) break;
    }
    return sum;
}

double hankel_jn(int order, double x) {
    const double mu = 4.0 * order * order;
    double p = 0.0, q = 0.0;
    double a = 1.0;  // a_k / x^k
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 60; ++k) {
        const double mag = std::abs(a);
        if (k > 2 && mag > last) break;  // optimal truncation of the divergent series
        last = mag;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) p += sign * a;
        else q += sign * a;
        if (mag < 1e-18) break;
        const double odd = 2.0 * k + 1.0;
        a *= (mu - odd * odd) / ((k + 1) * 8.0 * x);
    }
    const double chi = x - (0.5 * order + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j1_taylor(double x) { return static_cast<double>(taylor_jn(1, x)); }
double bessel_j1_asymptotic(double x) { return hankel_jn(1, x); }

double bessel_j0(double x) {
    const double ax = std::abs(x);
    return ax <= kBesselSwitch ? static_cast<double>(taylor_jn(0, ax)) : hankel_jn(0, ax);
}

double bessel_j1(double x) {
    const double ax = std::abs(x);
    const double v = ax <= kBesselSwitch ? bessel_j1_taylor(ax) : bessel_j1_asymptotic(ax);
    return x < 0.0 ? -v : v;
}

double bessel_j1_zero(int m) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "zero index must be >= 1");
    const double beta = (m + 0.25) * kPi;
    double lo = beta - 0.5 * kPi, hi = beta + 0.5 * kPi;
    double flo = bessel_j1(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_j1(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace covario::oracles
