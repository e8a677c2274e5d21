#pragma once

// Exact algebra over n-spin product operators built from E, I_x, I_y, I_z
// with the spin-1/2 normalization I = sigma / 2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epsprep {

using Complex = std::complex<double>;

/// Coefficients smaller than this in magnitude are dropped from canonical sums.
inline constexpr double kCanonicalTolerance = 1e-14;

class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Per-site factor. The underlying characters order E < X < Y < Z, which is
/// the canonical term ordering.
enum class Factor : char { E = 'E', X = 'X', Y = 'Y', Z = 'Z' };
using FactorString = std::vector<Factor>;

inline FactorString parse_factors(std::string_view text) {
    FactorString out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'E': out.push_back(Factor::E); break;
            case 'X': out.push_back(Factor::X); break;
            case 'Y': out.push_back(Factor::Y); break;
            case 'Z': out.push_back(Factor::Z); break;
            default:
                throw std::invalid_argument("factor string may only contain E, X, Y, Z; got '" +
                                            std::string(text) + "'");
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("factor string must name at least one spin");
    }
    return out;
}

inline std::string to_string(const FactorString& factors) {
    std::string s;
    s.reserve(factors.size());
    for (Factor f : factors) s.push_back(static_cast<char>(f));
    return s;
}

/// Number of non-identity factors.
inline int weight(const FactorString& factors) {
    int w = 0;
    for (Factor f : factors) w += (f != Factor::E);
    return w;
}

/// Factor string with `axis` on each listed spin (0-based) and E elsewhere.
inline FactorString factors_on(int spin_count, const std::vector<int>& spins, Factor axis) {
    FactorString out(static_cast<std::size_t>(spin_count), Factor::E);
    for (int k : spins) {
        if (k < 0 || k >= spin_count) throw DimensionError("spin index out of range");
        out[static_cast<std::size_t>(k)] = axis;
    }
    return out;
}

struct ProductTerm {
    Complex coeff{1.0, 0.0};
    FactorString factors;

    int spin_count() const { return static_cast<int>(factors.size()); }
};

namespace detail {

// I_a * I_b = scale * I_c on one site, with I = sigma / 2.
struct SiteProduct {
    Complex scale;
    Factor result;
};

inline SiteProduct site_product(Factor a, Factor b) {
    constexpr Complex half_i{0.0, 0.5};
    if (a == Factor::E) return {1.0, b};
    if (b == Factor::E) return {1.0, a};
    if (a == b) return {0.25, Factor::E};
    // Cyclic x -> y -> z gives +i/2, anticyclic gives -i/2.
    auto idx = [](Factor f) { return f == Factor::X ? 0 : (f == Factor::Y ? 1 : 2); };
    const int ia = idx(a);
    const int ib = idx(b);
    const int ic = 3 - ia - ib;
    const Factor c = ic == 0 ? Factor::X : (ic == 1 ? Factor::Y : Factor::Z);
    const bool cyclic = (ib - ia + 3) % 3 == 1;
    return {cyclic ? half_i : -half_i, c};
}

inline void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionError("spin count mismatch: " + std::to_string(a) + " vs " +
                             std::to_string(b));
    }
}

}  // namespace detail

/// Exact product of two product terms; per site I_mu I_mu = E/4 and
/// I_x I_y = (i/2) I_z cyclically.
inline ProductTerm multiply(const ProductTerm& a, const ProductTerm& b) {
    detail::require_same_size(a.factors.size(), b.factors.size());
    ProductTerm out{a.coeff * b.coeff, FactorString(a.factors.size(), Factor::E)};
    for (std::size_t k = 0; k < a.factors.size(); ++k) {
        const auto sp = detail::site_product(a.factors[k], b.factors[k]);
        out.coeff *= sp.scale;
        out.factors[k] = sp.result;
    }
    return out;
}

/// True when the two basis products commute (an even number of sites carry
/// distinct non-identity factors).
inline bool commutes(const FactorString& a, const FactorString& b) {
    detail::require_same_size(a.size(), b.size());
    int clashes = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        clashes += (a[k] != Factor::E && b[k] != Factor::E && a[k] != b[k]);
    }
    return clashes % 2 == 0;
}

/// Canonical sum of product terms keyed by factor string.
class OperatorSum {
   public:
    using TermMap = std::map<FactorString, Complex>;

    explicit OperatorSum(int spin_count) : spin_count_(spin_count) {
        if (spin_count < 1) throw DimensionError("spin count must be at least 1");
    }

    static OperatorSum identity(int spin_count, Complex coeff = 1.0) {
        OperatorSum s(spin_count);
        s.add(FactorString(static_cast<std::size_t>(spin_count), Factor::E), coeff);
        return s;
    }

    static OperatorSum from_term(const ProductTerm& t) {
        OperatorSum s(t.spin_count());
        s.add(t.factors, t.coeff);
        return s;
    }

    /// `coeff` times the named factor string, e.g. term("YZ", 2.0).
    static OperatorSum term(std::string_view factors, Complex coeff = 1.0) {
        const auto f = parse_factors(factors);
        OperatorSum s(static_cast<int>(f.size()));
        s.add(f, coeff);
        return s;
    }

    int spin_count() const { return spin_count_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Complex coefficient(const FactorString& factors) const {
        auto it = terms_.find(factors);
        return it == terms_.end() ? Complex{} : it->second;
    }

    /// Accumulates `coeff` onto `factors`; drops the entry if it cancels.
    void add(const FactorString& factors, Complex coeff) {
        detail::require_same_size(factors.size(), static_cast<std::size_t>(spin_count_));
        auto [it, inserted] = terms_.try_emplace(factors, coeff);
        if (!inserted) it->second += coeff;
        if (std::abs(it->second) < kCanonicalTolerance) terms_.erase(it);
    }

    void add(const ProductTerm& t) { add(t.factors, t.coeff); }

    OperatorSum& operator+=(const OperatorSum& other) {
        detail::require_same_size(other.spin_count_, spin_count_);
        for (const auto& [f, c] : other.terms_) add(f, c);
        return *this;
    }

    OperatorSum& operator-=(const OperatorSum& other) {
        detail::require_same_size(other.spin_count_, spin_count_);
        for (const auto& [f, c] : other.terms_) add(f, -c);
        return *this;
    }

    OperatorSum& operator*=(Complex scale) {
        TermMap scaled;
        for (const auto& [f, c] : terms_) {
            const Complex v = c * scale;
            if (std::abs(v) >= kCanonicalTolerance) scaled.emplace(f, v);
        }
        terms_ = std::move(scaled);
        return *this;
    }

    friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
    friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
    friend OperatorSum operator*(OperatorSum a, Complex s) { return a *= s; }
    friend OperatorSum operator*(Complex s, OperatorSum a) { return a *= s; }

    friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
        detail::require_same_size(a.spin_count_, b.spin_count_);
        OperatorSum out(a.spin_count_);
        for (const auto& [fa, ca] : a.terms_) {
            for (const auto& [fb, cb] : b.terms_) {
                out.add(multiply(ProductTerm{ca, fa}, ProductTerm{cb, fb}));
            }
        }
        return out;
    }

    /// Largest coefficient difference over the union of terms.
    friend double max_coefficient_difference(const OperatorSum& a, const OperatorSum& b) {
        detail::require_same_size(a.spin_count_, b.spin_count_);
        double worst = 0.0;
        for (const auto& [f, c] : a.terms_) worst = std::max(worst, std::abs(c - b.coefficient(f)));
        for (const auto& [f, c] : b.terms_) {
            if (!a.terms_.count(f)) worst = std::max(worst, std::abs(c));
        }
        return worst;
    }

   private:
    int spin_count_;
    TermMap terms_;
};

inline OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) { return a * b - b * a; }

inline OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b) {
    return a * b + b * a;
}

/// Sum of all matrix entries of the dense form. Per-factor entry sums are
/// E -> 2, I_x -> 1, I_y -> 0, I_z -> 0.
inline Complex f_functional(const OperatorSum& a) {
    Complex total{};
    for (const auto& [factors, coeff] : a.terms()) {
        double product = 1.0;
        for (Factor f : factors) {
            product *= f == Factor::E ? 2.0 : (f == Factor::X ? 1.0 : 0.0);
            if (product == 0.0) break;
        }
        total += coeff * product;
    }
    return total;
}

enum class GClass { kInG, kInGx };

/// kInGx iff every factor is E or I_x.
inline GClass classify_g(const FactorString& factors) {
    for (Factor f : factors) {
        if (f == Factor::Y || f == Factor::Z) return GClass::kInG;
    }
    return GClass::kInGx;
}

/// exp(-i theta G) A exp(i theta G) for G = 2^(w-1) times the product of the
/// generator's non-identity factors. Exact per term: commuting terms are
/// untouched, anticommuting terms T map to cos(theta) T - i sin(theta) sigma_G T.
inline OperatorSum rotate(const OperatorSum& a, const FactorString& generator, double theta) {
    detail::require_same_size(generator.size(), static_cast<std::size_t>(a.spin_count()));
    const int w = weight(generator);
    if (w == 0) return a;
    const ProductTerm pauli{std::ldexp(1.0, w), generator};
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    OperatorSum out(a.spin_count());
    for (const auto& [f, coeff] : a.terms()) {
        if (commutes(generator, f)) {
            out.add(f, coeff);
            continue;
        }
        out.add(f, coeff * c);
        const auto moved = multiply(pauli, ProductTerm{coeff, f});
        out.add(moved.factors, moved.coeff * Complex{0.0, -s});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ladder basis: E, I^+, I^-, I_z.

enum class LadderFactor : char { E = 'E', Plus = '+', Minus = '-', Z = 'Z' };
using LadderString = std::vector<LadderFactor>;

inline std::string to_string(const LadderString& factors) {
    std::string s;
    for (LadderFactor f : factors) s.push_back(static_cast<char>(f));
    return s;
}

/// (#I^+) - (#I^-).
inline int coherence_order(const LadderString& factors) {
    int p = 0;
    for (LadderFactor f : factors) p += (f == LadderFactor::Plus) - (f == LadderFactor::Minus);
    return p;
}

struct LadderTerm {
    Complex coeff{1.0, 0.0};
    LadderString factors;
};

class LadderSum {
   public:
    using TermMap = std::map<LadderString, Complex>;

    explicit LadderSum(int spin_count) : spin_count_(spin_count) {}

    int spin_count() const { return spin_count_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    Complex coefficient(const LadderString& f) const {
        auto it = terms_.find(f);
        return it == terms_.end() ? Complex{} : it->second;
    }

    void add(const LadderString& factors, Complex coeff) {
        detail::require_same_size(factors.size(), static_cast<std::size_t>(spin_count_));
        auto [it, inserted] = terms_.try_emplace(factors, coeff);
        if (!inserted) it->second += coeff;
        if (std::abs(it->second) < kCanonicalTolerance) terms_.erase(it);
    }

   private:
    int spin_count_;
    TermMap terms_;
};

namespace detail {

// Expands a product of per-site linear combinations into all tensor terms.
template <typename Out, typename In, typename Expand, typename Sink>
void expand_sites_rec(const std::vector<In>& factors, std::size_t k, std::vector<Out>& current,
                      Complex coeff, Expand& expand, Sink& sink) {
    if (k == factors.size()) {
        sink(current, coeff);
        return;
    }
    for (const auto& [f, c] : expand(factors[k])) {
        current[k] = f;
        expand_sites_rec(factors, k + 1, current, coeff * c, expand, sink);
    }
}

}  // namespace detail

/// I_x = (I^+ + I^-)/2, I_y = (I^+ - I^-)/(2i).
inline LadderSum to_ladder(const OperatorSum& a) {
    using Pair = std::pair<LadderFactor, Complex>;
    auto expand = [](Factor f) -> std::vector<Pair> {
        switch (f) {
            case Factor::E: return {{LadderFactor::E, 1.0}};
            case Factor::Z: return {{LadderFactor::Z, 1.0}};
            case Factor::X: return {{LadderFactor::Plus, 0.5}, {LadderFactor::Minus, 0.5}};
            case Factor::Y:
                return {{LadderFactor::Plus, Complex{0.0, -0.5}},
                        {LadderFactor::Minus, Complex{0.0, 0.5}}};
        }
        return {};
    };
    LadderSum out(a.spin_count());
    auto sink = [&out](const LadderString& f, Complex c) { out.add(f, c); };
    LadderString current(static_cast<std::size_t>(a.spin_count()), LadderFactor::E);
    for (const auto& [factors, coeff] : a.terms()) {
        detail::expand_sites_rec(factors, 0, current, coeff, expand, sink);
    }
    return out;
}

/// I^+ = I_x + i I_y, I^- = I_x - i I_y.
inline OperatorSum from_ladder(const LadderSum& a) {
    using Pair = std::pair<Factor, Complex>;
    auto expand = [](LadderFactor f) -> std::vector<Pair> {
        switch (f) {
            case LadderFactor::E: return {{Factor::E, 1.0}};
            case LadderFactor::Z: return {{Factor::Z, 1.0}};
            case LadderFactor::Plus: return {{Factor::X, 1.0}, {Factor::Y, Complex{0.0, 1.0}}};
            case LadderFactor::Minus: return {{Factor::X, 1.0}, {Factor::Y, Complex{0.0, -1.0}}};
        }
        return {};
    };
    OperatorSum out(a.spin_count());
    auto sink = [&out](const FactorString& f, Complex c) { out.add(f, c); };
    FactorString current(static_cast<std::size_t>(a.spin_count()), Factor::E);
    for (const auto& [factors, coeff] : a.terms()) {
        detail::expand_sites_rec(factors, 0, current, coeff, expand, sink);
    }
    return out;
}

/// Drops every ladder component of nonzero coherence order, as a field
/// gradient does to transverse magnetization.
inline OperatorSum crush_transverse(const OperatorSum& a) {
    const LadderSum ladder = to_ladder(a);
    LadderSum kept(a.spin_count());
    for (const auto& [f, c] : ladder.terms()) {
        if (coherence_order(f) == 0) kept.add(f, c);
    }
    return from_ladder(kept);
}

inline std::string to_string(const OperatorSum& a) {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [f, c] : a.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real();
        if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
        os << ")" << to_string(f);
    }
    return os.str();
}

}  // namespace epsprep
