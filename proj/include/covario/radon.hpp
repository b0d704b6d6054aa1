#pragma once

// Chord-length (Radon) transform S_K(u, t) of planar bodies and its
// autocorrelation in t.

#include <optional>
#include <string>
#include <vector>

#include "covario/geometry.hpp"

namespace covario {

/// t -> S_K(u, t), the length of K ∩ {<x, u> = t}, on [-h_K(-u), h_K(u)].
class ChordFunction {
public:
    ChordFunction(const Body& k, const Direction& u);

    double operator()(double t) const;
    double lower() const { return lower_; }
    double upper() const { return upper_; }
    double width() const { return upper_ - lower_; }
    const Direction& direction() const { return u_; }
    bool is_polygon() const { return polygon_.has_value(); }
    /// Interior t where S has a kink (vertex projections); empty for smooth bodies.
    const std::vector<double>& breakpoints() const { return breaks_; }
    /// "polygon-edges", "boundary-roots" or "closed-form".
    std::string method() const;

private:
    double smooth_chord(const SupportBody& s, double t) const;

    Body body_;
    Direction u_;
    std::optional<Polygon> polygon_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    double shift_ = 0.0;  ///< <offset, u>, removed before root solving
    std::vector<double> breaks_;
};

double radon(const Body& k, const Direction& u, double t);

/// int S(u, t) S(u, t + s) dt by composite Gauss-Legendre. Smooth bodies use
/// the substitutions t = a + tau^2 and t = b - tau^2 on the two halves of the
/// overlap, with tau-panels graded at sqrt(|s|) for the nearby endpoint of the
/// shifted chord function.
double chord_autocorrelation(const ChordFunction& chord, double s);
double chord_autocorrelation(const Body& k, const Direction& u, double s);

/// Leading coefficients of S near its endpoints:
/// S(u, -h(-u) + d) ~ a0 sqrt(d), S(u, h(u) - d) ~ b0 sqrt(d), with
/// a0 = (2 pi)^{1/2} / (Gamma(3/2) sqrt(tau(-u))) and b0 likewise with tau(u).
struct LeadingCoefficients {
    double a0;
    double b0;
};

LeadingCoefficients leading_coefficients(const Body& k, const Direction& u);

}  // namespace covario
