#include "covario/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "covario/error.hpp"

namespace covario {

namespace {

template <int N>
void expand(std::vector<double>& x, std::vector<double>& w) {
    using Rule = boost::math::quadrature::gauss<double, N>;
    const auto& a = Rule::abscissa();
    const auto& wt = Rule::weights();
    // Boost stores the non-negative half; N even means no zero node.
    for (std::size_t i = a.size(); i-- > 0;) {
        x.push_back(-a[i]);
        w.push_back(wt[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        x.push_back(a[i]);
        w.push_back(wt[i]);
    }
}

}  // namespace

GaussLegendre::GaussLegendre(int order) {
    switch (order) {
    case 32: expand<32>(nodes_, weights_); break;
    case 64: expand<64>(nodes_, weights_); break;
    default: throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be 32 or 64");
    }
}

void GaussLegendre::append(double a, double b, std::vector<double>& t, std::vector<double>& w) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        t.push_back(mid + half * nodes_[i]);
        w.push_back(half * weights_[i]);
    }
}

const GaussLegendre& gauss_legendre(int order) {
    static const GaussLegendre r32(32);
    static const GaussLegendre r64(64);
    if (order == 32) return r32;
    if (order == 64) return r64;
    throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be 32 or 64");
}

}  // namespace covario
