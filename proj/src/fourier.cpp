#include "nbody/fourier.hpp"

#include "nbody/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nbody {

bool parity_allows(Parity parity, int k)
{
    switch (parity) {
    case Parity::all: return true;
    case Parity::odd_only: return k % 2 != 0;
    case Parity::even_only: return k % 2 == 0;
    }
    return false;
}

FourierSeries::FourierSeries(Parity parity) : parity_(parity), sin_(1, 0.0), cos_(1, 0.0) {}

FourierSeries::FourierSeries(const std::map<int, double>& sin_coeffs,
                             const std::map<int, double>& cos_coeffs, Parity parity)
    : FourierSeries(parity)
{
    for (const auto& [k, v] : sin_coeffs)
        set_sin(k, v);
    for (const auto& [k, v] : cos_coeffs)
        set_cos(k, v);
}

double FourierSeries::sin_coeff(int k) const
{
    return (k > 0 && k < static_cast<int>(sin_.size())) ? sin_[k] : 0.0;
}

double FourierSeries::cos_coeff(int k) const
{
    return (k >= 0 && k < static_cast<int>(cos_.size())) ? cos_[k] : 0.0;
}

void FourierSeries::check_index(int k, bool is_sin) const
{
    if (k < 0 || (is_sin && k == 0))
        throw std::invalid_argument("invalid harmonic index " + std::to_string(k) +
                                    (is_sin ? " for a sine term" : " for a cosine term"));
    if (!parity_allows(parity_, k))
        throw std::invalid_argument("harmonic " + std::to_string(k) +
                                    " violates the series parity mask");
}

void FourierSeries::grow(int k)
{
    if (k >= static_cast<int>(sin_.size())) {
        sin_.resize(k + 1, 0.0);
        cos_.resize(k + 1, 0.0);
    }
}

void FourierSeries::set_sin(int k, double value)
{
    check_index(k, true);
    if (!std::isfinite(value))
        throw std::invalid_argument("non-finite coefficient at harmonic " + std::to_string(k));
    grow(k);
    sin_[k] = value;
}

void FourierSeries::set_cos(int k, double value)
{
    check_index(k, false);
    if (!std::isfinite(value))
        throw std::invalid_argument("non-finite coefficient at harmonic " + std::to_string(k));
    grow(k);
    cos_[k] = value;
}

std::map<int, double> FourierSeries::sin_map() const
{
    std::map<int, double> out;
    for (int k = 1; k <= k_max(); ++k)
        if (sin_[k] != 0.0)
            out[k] = sin_[k];
    return out;
}

std::map<int, double> FourierSeries::cos_map() const
{
    std::map<int, double> out;
    for (int k = 0; k <= k_max(); ++k)
        if (cos_[k] != 0.0)
            out[k] = cos_[k];
    return out;
}

FourierSeries FourierSeries::scaled(double factor) const
{
    FourierSeries out = *this;
    for (auto& v : out.sin_)
        v *= factor;
    for (auto& v : out.cos_)
        v *= factor;
    return out;
}

bool FourierSeries::operator==(const FourierSeries& other) const
{
    if (parity_ != other.parity_)
        return false;
    const int kmax = std::max(k_max(), other.k_max());
    for (int k = 0; k <= kmax; ++k)
        if (sin_coeff(k) != other.sin_coeff(k) || cos_coeff(k) != other.cos_coeff(k))
            return false;
    return true;
}

FourierSeries operator+(const FourierSeries& lhs, const FourierSeries& rhs)
{
    const Parity parity = lhs.parity() == rhs.parity() ? lhs.parity() : Parity::all;
    FourierSeries out(parity);
    const int kmax = std::max(lhs.k_max(), rhs.k_max());
    for (int k = 0; k <= kmax; ++k) {
        const double s = lhs.sin_coeff(k) + rhs.sin_coeff(k);
        const double c = lhs.cos_coeff(k) + rhs.cos_coeff(k);
        if (k > 0 && s != 0.0)
            out.set_sin(k, s);
        if (c != 0.0)
            out.set_cos(k, c);
    }
    return out;
}

FourierSeries operator*(double c, const FourierSeries& series)
{
    return series.scaled(c);
}

double eval(const FourierSeries& series, double t)
{
    double sum = series.cos_coeff(0);
    for (int k = 1; k <= series.k_max(); ++k) {
        const double kt = k * t;
        sum += series.sin_coeff(k) * std::sin(kt) + series.cos_coeff(k) * std::cos(kt);
    }
    return sum;
}

double eval_deriv(const FourierSeries& series, double t, int order)
{
    if (order != 1 && order != 2)
        throw std::invalid_argument("eval_deriv supports order 1 or 2, got " +
                                    std::to_string(order));
    double sum = 0.0;
    for (int k = 1; k <= series.k_max(); ++k) {
        const double kt = k * t;
        const double a = series.sin_coeff(k);
        const double b = series.cos_coeff(k);
        if (order == 1)
            sum += k * (a * std::cos(kt) - b * std::sin(kt));
        else
            sum -= static_cast<double>(k) * k * (a * std::sin(kt) + b * std::cos(kt));
    }
    return sum;
}

std::pair<FourierSeries, double> normalize(const FourierSeries& series, double eps)
{
    const double a1 = series.sin_coeff(1);
    if (!(std::abs(a1) > eps))
        throw NormalizationError("cannot normalize a series whose a_1 coefficient vanishes");
    return {series.scaled(1.0 / a1), a1};
}

double ScalingLaw::factor() const
{
    if (!(alpha < 2.0) || alpha == 0.0)
        throw std::invalid_argument("scaling law needs a potential exponent alpha < 2, alpha != 0");
    if (!(period > 0.0))
        throw std::invalid_argument("scaling law needs a positive period");
    return std::pow(period / kTwoPi, 2.0 / (2.0 - alpha));
}

std::vector<FourierSeries> rescale_period(const std::vector<FourierSeries>& coordinates,
                                          const ScalingLaw& law)
{
    const double f = law.factor();
    std::vector<FourierSeries> out;
    out.reserve(coordinates.size());
    for (const auto& s : coordinates)
        out.push_back(s.scaled(f));
    return out;
}

} // namespace nbody
