#pragma once

#include <map>
#include <utility>
#include <vector>

namespace nbody {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Which harmonic indices a series may carry.
enum class Parity { all, odd_only, even_only };

bool parity_allows(Parity parity, int k);

/// Truncated Fourier series of one periodic scalar coordinate on [0, 2π):
///
///     f(t) = Σ_k a_k sin kt + Σ_k b_k cos kt
///
/// Coefficients are stored densely, indexed 0…k_max. The parity mask is
/// enforced at write time: setting a disallowed harmonic throws instead of
/// being silently dropped. A const series is never modified.
class FourierSeries {
public:
    explicit FourierSeries(Parity parity = Parity::all);
    FourierSeries(const std::map<int, double>& sin_coeffs,
                  const std::map<int, double>& cos_coeffs = {},
                  Parity parity = Parity::all);

    Parity parity() const { return parity_; }

    /// Highest stored harmonic (0 for an empty series).
    int k_max() const { return static_cast<int>(sin_.size()) - 1; }

    /// Coefficient of sin kt (0 for k beyond the truncation or k = 0).
    double sin_coeff(int k) const;
    /// Coefficient of cos kt.
    double cos_coeff(int k) const;

    void set_sin(int k, double value);
    void set_cos(int k, double value);

    std::map<int, double> sin_map() const;
    std::map<int, double> cos_map() const;

    /// Multiplies every coefficient by `factor`.
    FourierSeries scaled(double factor) const;

    bool operator==(const FourierSeries& other) const;

private:
    void check_index(int k, bool is_sin) const;
    void grow(int k);

    Parity parity_;
    std::vector<double> sin_; // sin_[0] is unused and always 0
    std::vector<double> cos_;
};

FourierSeries operator+(const FourierSeries& lhs, const FourierSeries& rhs);
FourierSeries operator*(double c, const FourierSeries& series);

double eval(const FourierSeries& series, double t);

/// First or second time derivative of the series at t. Any other order throws
/// std::invalid_argument.
double eval_deriv(const FourierSeries& series, double t, int order);

/// Divides the series by its a_1 coefficient. Returns the normalized series and
/// the original a_1 (so `normalized.scaled(scale)` restores the input).
/// Throws NormalizationError when |a_1| <= eps.
std::pair<FourierSeries, double> normalize(const FourierSeries& series, double eps = 1e-14);

/// Homogeneous-potential scaling: a period-T orbit is T^{2/(2-α)} times the
/// same orbit with period 2π, up to the time reparameterization t -> 2πt/T.
struct ScalingLaw {
    double alpha = -1.0;
    double period = kTwoPi;

    /// Spatial factor (T/2π)^{2/(2-α)}. Throws std::invalid_argument for
    /// α >= 2, α == 0 or T <= 0.
    double factor() const;
};

std::vector<FourierSeries> rescale_period(const std::vector<FourierSeries>& coordinates,
                                          const ScalingLaw& law);

} // namespace nbody
