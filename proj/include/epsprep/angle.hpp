#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace epsprep {

/// Rotation angle in radians that remembers an exact rational multiple of pi
/// when it was built from one.
class Angle {
   public:
    struct PiFraction {
        std::int64_t num = 0;
        std::int64_t den = 1;
        friend bool operator==(const PiFraction&, const PiFraction&) = default;
    };

    Angle() = default;

    static Angle pi_fraction(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::invalid_argument("pi fraction with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        Angle a;
        a.radians_ = std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
        a.fraction_ = PiFraction{num, den};
        return a;
    }

    static Angle from_radians(double radians) {
        if (!std::isfinite(radians)) throw std::invalid_argument("angle must be finite");
        Angle a;
        a.radians_ = radians;
        return a;
    }

    double radians() const { return radians_; }
    const std::optional<PiFraction>& fraction() const { return fraction_; }

    Angle operator-() const {
        if (fraction_) return pi_fraction(-fraction_->num, fraction_->den);
        return from_radians(-radians_);
    }

    /// Multiplies by an integer, staying exact for rational angles.
    Angle scaled(std::int64_t k) const {
        if (fraction_) return pi_fraction(fraction_->num * k, fraction_->den);
        return from_radians(radians_ * static_cast<double>(k));
    }

    std::string str() const {
        if (!fraction_) return std::to_string(radians_);
        if (fraction_->num == 0) return "0";
        std::string s = fraction_->num == 1    ? "pi"
                        : fraction_->num == -1 ? "-pi"
                                               : std::to_string(fraction_->num) + "pi";
        if (fraction_->den != 1) s += "/" + std::to_string(fraction_->den);
        return s;
    }

    friend bool operator==(const Angle& a, const Angle& b) {
        return a.radians_ == b.radians_ && a.fraction_ == b.fraction_;
    }

   private:
    double radians_ = 0.0;
    std::optional<PiFraction> fraction_ = PiFraction{0, 1};
};

}  // namespace epsprep
