// Exact arithmetic in prime fields F_p and extensions F_{p^m}, univariate
// polynomial helpers, and root extraction over the working field.
//
// One fixed working field is chosen per experiment; every other module
// receives it as a shared immutable object. Elements are coefficient vectors
// of length m in the power basis of the modulus (little-endian). All residues
// lie in [0, p).
#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "klab/errors.hpp"
#include "klab/rng.hpp"

namespace klab {

using Limb = std::uint64_t;
using Fel = std::vector<Limb>;

struct FieldSpec {
    std::uint64_t p = 0;
    std::uint32_t m = 1;
    std::vector<Limb> min_poly; // monic, length m+1; canonical [0,1] when m == 1
};

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<Limb> find_irreducible(std::uint64_t p, std::uint32_t m, std::uint64_t seed = 1);

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
public:
    explicit Field(FieldSpec spec) : spec_(std::move(spec)) {
        if (!is_prime_u64(spec_.p) || spec_.p < 3)
            throw SpecMismatch("field characteristic must be a prime >= 3, got " + std::to_string(spec_.p));
        if (spec_.p >= (1ull << 31))
            throw SpecMismatch("field characteristic too large (requires p < 2^31)");
        if (spec_.m < 1) throw SpecMismatch("extension degree must be >= 1");
        if (spec_.m == 1) {
            spec_.min_poly = {0, 1};
        } else {
            if (spec_.min_poly.size() != spec_.m + 1 || spec_.min_poly[spec_.m] != 1)
                throw SpecMismatch("modulus must be monic of degree m");
            for (Limb& c : spec_.min_poly)
                if (c >= spec_.p) throw SpecMismatch("modulus coefficient out of range");
        }
        q_ = 1;
        for (std::uint32_t i = 0; i < spec_.m; ++i) {
            if (q_ > (1ull << 62) / spec_.p)
                throw SpecMismatch("field order p^m too large (requires p^m < 2^62)");
            q_ *= spec_.p;
        }
        if (spec_.m > 1 && !modulus_irreducible())
            throw SpecMismatch("modulus is reducible over F_p");
    }

    static FieldPtr prime_field(std::uint64_t p) { return std::make_shared<Field>(FieldSpec{p, 1, {}}); }

    static FieldPtr extension(std::uint64_t p, std::uint32_t m, std::uint64_t seed = 1) {
        if (m == 1) return prime_field(p);
        return std::make_shared<Field>(FieldSpec{p, m, find_irreducible(p, m, seed)});
    }

    const FieldSpec& spec() const { return spec_; }
    std::uint64_t p() const { return spec_.p; }
    std::uint32_t m() const { return spec_.m; }
    std::uint64_t q() const { return q_; }

    Fel zero() const { return Fel(spec_.m, 0); }
    Fel one() const {
        Fel r(spec_.m, 0);
        r[0] = 1;
        return r;
    }

    Fel from_int(std::uint64_t v) const {
        Fel r(spec_.m, 0);
        r[0] = v % spec_.p;
        return r;
    }

    Fel from_signed(std::int64_t v) const {
        std::int64_t pp = static_cast<std::int64_t>(spec_.p);
        std::int64_t r = v % pp;
        if (r < 0) r += pp;
        return from_int(static_cast<std::uint64_t>(r));
    }

    void check(const Fel& a) const {
        if (a.size() != spec_.m) throw SpecMismatch("element has wrong length for this field");
        for (Limb c : a)
            if (c >= spec_.p) throw SpecMismatch("element coefficient out of range");
    }

    bool is_zero(const Fel& a) const {
        for (Limb c : a)
            if (c != 0) return false;
        return true;
    }

    bool eq(const Fel& a, const Fel& b) const { return a == b; }

    Fel add(const Fel& a, const Fel& b) const {
        Fel r(spec_.m);
        r_add(a.data(), b.data(), r.data());
        return r;
    }

    Fel sub(const Fel& a, const Fel& b) const {
        Fel r(spec_.m);
        r_sub(a.data(), b.data(), r.data());
        return r;
    }

    Fel neg(const Fel& a) const {
        Fel r(spec_.m);
        r_neg(a.data(), r.data());
        return r;
    }

    Fel mul(const Fel& a, const Fel& b) const {
        Fel r(spec_.m);
        r_mul(a.data(), b.data(), r.data());
        return r;
    }

    Fel pow(const Fel& a, std::uint64_t e) const {
        Fel base = a, r = one();
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    Fel inv(const Fel& a) const {
        if (is_zero(a)) throw DivisionByZero("inverse of zero");
        return pow(a, q_ - 2);
    }

    Fel scalar(const Fel& a, Limb c) const {
        c %= spec_.p;
        Fel r(spec_.m);
        for (std::uint32_t i = 0; i < spec_.m; ++i) r[i] = (a[i] * c) % spec_.p;
        return r;
    }

    Fel element_from_rng(Rng& rng) const {
        Fel r(spec_.m);
        for (std::uint32_t i = 0; i < spec_.m; ++i) r[i] = rng.below(spec_.p);
        return r;
    }

    Fel nonzero_from_rng(Rng& rng) const {
        for (;;) {
            Fel r = element_from_rng(rng);
            if (!is_zero(r)) return r;
        }
    }

    // Enumerate all field elements in a fixed order (lexicographic in the
    // power basis). Only valid for small fields; used by exhaustive root
    // scans.
    Fel enumerate(std::uint64_t index) const {
        Fel r(spec_.m);
        for (std::uint32_t i = 0; i < spec_.m; ++i) {
            r[i] = index % spec_.p;
            index /= spec_.p;
        }
        return r;
    }

    std::string to_string(const Fel& a) const {
        if (spec_.m == 1) return std::to_string(a[0]);
        std::ostringstream os;
        os << '[';
        for (std::uint32_t i = 0; i < spec_.m; ++i) {
            if (i) os << ',';
            os << a[i];
        }
        os << ']';
        return os.str();
    }

    std::string describe() const {
        if (spec_.m == 1) return "F_" + std::to_string(spec_.p);
        return "F_{" + std::to_string(spec_.p) + "^" + std::to_string(spec_.m) + "}";
    }

    // ---- raw kernels on limb spans of length m (used by Mat hot loops) ----

    void r_add(const Limb* a, const Limb* b, Limb* out) const {
        for (std::uint32_t i = 0; i < spec_.m; ++i) {
            Limb s = a[i] + b[i];
            out[i] = s >= spec_.p ? s - spec_.p : s;
        }
    }

    void r_sub(const Limb* a, const Limb* b, Limb* out) const {
        for (std::uint32_t i = 0; i < spec_.m; ++i)
            out[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + spec_.p - b[i];
    }

    void r_neg(const Limb* a, Limb* out) const {
        for (std::uint32_t i = 0; i < spec_.m; ++i) out[i] = a[i] == 0 ? 0 : spec_.p - a[i];
    }

    bool r_is_zero(const Limb* a) const {
        for (std::uint32_t i = 0; i < spec_.m; ++i)
            if (a[i] != 0) return false;
        return true;
    }

    void r_mul(const Limb* a, const Limb* b, Limb* out) const {
        const std::uint32_t m = spec_.m;
        const std::uint64_t p = spec_.p;
        if (m == 1) {
            out[0] = (a[0] * b[0]) % p;
            return;
        }
        // Schoolbook product, then fold down modulo the monic modulus.
        unsigned __int128 acc[2 * 8 - 1] = {};
        Limb t[2 * 8 - 1];
        for (std::uint32_t i = 0; i < m; ++i) {
            if (a[i] == 0) continue;
            for (std::uint32_t j = 0; j < m; ++j) acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
        }
        for (std::uint32_t i = 0; i < 2 * m - 1; ++i) t[i] = static_cast<Limb>(acc[i] % p);
        for (std::uint32_t i = 2 * m - 2; i >= m; --i) {
            Limb c = t[i];
            if (c == 0) continue;
            t[i] = 0;
            for (std::uint32_t j = 0; j < m; ++j) {
                Limb red = (c * spec_.min_poly[j]) % p;
                Limb cur = t[i - m + j];
                t[i - m + j] = cur >= red ? cur - red : cur + p - red;
            }
        }
        for (std::uint32_t i = 0; i < m; ++i) out[i] = t[i];
    }

private:
    bool modulus_irreducible() const;

    FieldSpec spec_;
    std::uint64_t q_ = 0;
};

// ---------------------------------------------------------------------------
// Univariate polynomials over a field: little-endian coefficient lists.
// ---------------------------------------------------------------------------

using Poly = std::vector<Fel>;

inline int poly_deg(const Field& F, const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (!F.is_zero(f[i])) return i;
    return -1;
}

inline Poly poly_trim(const Field& F, Poly f) {
    f.resize(static_cast<std::size_t>(poly_deg(F, f) + 1));
    return f;
}

inline Poly poly_zero() { return {}; }

inline Poly poly_x(const Field& F) { return {F.zero(), F.one()}; }

inline Poly poly_const(const Field&, Fel c) { return {std::move(c)}; }

inline Poly poly_add(const Field& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), F.zero());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = F.add(r[i], a[i]);
        if (i < b.size()) r[i] = F.add(r[i], b[i]);
    }
    return poly_trim(F, r);
}

inline Poly poly_sub(const Field& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), F.zero());
    for (std::size_t i = 0; i < r.size(); ++i) {
        Fel x = i < a.size() ? a[i] : F.zero();
        Fel y = i < b.size() ? b[i] : F.zero();
        r[i] = F.sub(x, y);
    }
    return poly_trim(F, r);
}

inline Poly poly_mul(const Field& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (F.is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return poly_trim(F, r);
}

inline Poly poly_scale(const Field& F, const Poly& a, const Fel& c) {
    Poly r = a;
    for (Fel& x : r) x = F.mul(x, c);
    return poly_trim(F, r);
}

// Division with remainder; divisor must be nonzero.
inline std::pair<Poly, Poly> poly_divrem(const Field& F, Poly a, const Poly& b) {
    int db = poly_deg(F, b);
    if (db < 0) throw DivisionByZero("polynomial division by zero");
    a = poly_trim(F, std::move(a));
    int da = poly_deg(F, a);
    if (da < db) return {poly_zero(), a};
    Fel lead_inv = F.inv(b[static_cast<std::size_t>(db)]);
    Poly quot(static_cast<std::size_t>(da - db + 1), F.zero());
    for (int i = da; i >= db; --i) {
        Fel c = F.mul(a[static_cast<std::size_t>(i)], lead_inv);
        if (F.is_zero(c)) continue;
        quot[static_cast<std::size_t>(i - db)] = c;
        for (int j = 0; j <= db; ++j) {
            std::size_t k = static_cast<std::size_t>(i - db + j);
            a[k] = F.sub(a[k], F.mul(c, b[static_cast<std::size_t>(j)]));
        }
    }
    return {poly_trim(F, quot), poly_trim(F, a)};
}

inline Poly poly_mod(const Field& F, const Poly& a, const Poly& b) { return poly_divrem(F, a, b).second; }

inline Poly poly_monic(const Field& F, const Poly& a) {
    int d = poly_deg(F, a);
    if (d < 0) return {};
    return poly_scale(F, a, F.inv(a[static_cast<std::size_t>(d)]));
}

inline Poly poly_gcd(const Field& F, Poly a, Poly b) {
    a = poly_trim(F, std::move(a));
    b = poly_trim(F, std::move(b));
    while (poly_deg(F, b) >= 0) {
        Poly r = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(F, a);
}

inline Fel poly_eval(const Field& F, const Poly& f, const Fel& x) {
    Fel r = F.zero();
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = F.add(F.mul(r, x), *it);
    return r;
}

// base^e mod f, with e allowed up to 2^127 (q-driven exponents).
inline Poly poly_powmod(const Field& F, Poly base, unsigned __int128 e, const Poly& f) {
    Poly r = {F.one()};
    base = poly_mod(F, base, f);
    while (e) {
        if (e & 1) r = poly_mod(F, poly_mul(F, r, base), f);
        base = poly_mod(F, poly_mul(F, base, base), f);
        e >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Root extraction over the working field.
//
// gcd with x^q - x isolates the part that splits into distinct linear factors
// over F_q; tiny fields are finished by exhaustive scan, larger ones by
// random equal-degree splitting. Multiplicities are recovered by repeated
// exact division, which stays valid even when a multiplicity reaches the
// characteristic.
// ---------------------------------------------------------------------------

namespace detail {

constexpr std::uint64_t kExhaustiveRootScanMax = 1ull << 16;

inline void split_linear_factors(const Field& F, const Poly& g, Rng& rng, std::vector<Fel>& out) {
    int d = poly_deg(F, g);
    if (d <= 0) return;
    if (d == 1) {
        // monic x + c  ->  root -c
        out.push_back(F.neg(F.mul(g[0], F.inv(g[1]))));
        return;
    }
    const std::uint64_t half = (F.q() - 1) / 2;
    for (;;) {
        Poly shift = {F.element_from_rng(rng), F.one()};
        Poly t = poly_powmod(F, shift, half, g);
        t = poly_sub(F, t, {F.one()});
        Poly h = poly_gcd(F, t, g);
        int dh = poly_deg(F, h);
        if (dh > 0 && dh < d) {
            split_linear_factors(F, h, rng, out);
            split_linear_factors(F, poly_divrem(F, g, h).first, rng, out);
            return;
        }
    }
}

} // namespace detail

// All roots of `f` in the working field, with multiplicities. The sum of the
// returned multiplicities never exceeds deg f.
inline std::vector<std::pair<Fel, int>> univariate_roots(const Field& F, const Poly& f_in) {
    Poly f = poly_trim(F, f_in);
    int d = poly_deg(F, f);
    if (d < 0) throw ZeroPolynomial("root extraction of the zero polynomial");
    std::vector<Fel> roots;
    if (d >= 1) {
        if (F.q() <= detail::kExhaustiveRootScanMax) {
            for (std::uint64_t i = 0; i < F.q(); ++i) {
                Fel x = F.enumerate(i);
                if (F.is_zero(poly_eval(F, f, x))) roots.push_back(std::move(x));
            }
        } else {
            // g = gcd(f, x^q - x): the product of (x - r) over distinct roots.
            Poly xq = poly_powmod(F, poly_x(F), static_cast<unsigned __int128>(F.q()), f);
            Poly g = poly_gcd(F, poly_sub(F, xq, poly_x(F)), f);
            Rng rng(0x6b6f737a756c0000ULL ^ F.q());
            detail::split_linear_factors(F, g, rng, roots);
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<std::pair<Fel, int>> out;
    for (const Fel& r : roots) {
        Poly lin = {F.neg(r), F.one()};
        int mult = 0;
        Poly cur = f;
        for (;;) {
            auto [q, rem] = poly_divrem(F, cur, lin);
            if (poly_deg(F, rem) >= 0) break;
            ++mult;
            cur = std::move(q);
            if (poly_deg(F, cur) < 1) break;
        }
        out.emplace_back(r, mult);
    }
    return out;
}

// Deterministic search for a monic irreducible of degree m over F_p.
inline std::vector<Limb> find_irreducible(std::uint64_t p, std::uint32_t m, std::uint64_t seed) {
    if (m < 1) throw SpecMismatch("extension degree must be >= 1");
    FieldPtr Fp = Field::prime_field(p);
    const Field& F = *Fp;
    Rng rng(seed ^ (p * 1000003ull + m));
    if (m == 1) {
        return {rng.below(p), 1};
    }
    auto prime_divisors = [](std::uint32_t n) {
        std::vector<std::uint32_t> ds;
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                ds.push_back(d);
                while (n % d == 0) n /= d;
            }
        if (n > 1) ds.push_back(n);
        return ds;
    };
    const auto mdivs = prime_divisors(m);
    for (;;) {
        Poly f(m + 1, F.zero());
        f[m] = F.one();
        for (std::uint32_t i = 0; i < m; ++i) f[i] = {rng.below(p)};
        // x^(p^m) == x mod f, and gcd(x^(p^(m/l)) - x, f) = 1 for prime l | m.
        unsigned __int128 pm = 1;
        for (std::uint32_t i = 0; i < m; ++i) pm *= p;
        Poly frob = poly_powmod(F, poly_x(F), pm, f);
        if (poly_deg(F, poly_sub(F, frob, poly_x(F))) >= 0) continue;
        bool ok = true;
        for (std::uint32_t l : mdivs) {
            unsigned __int128 e = 1;
            for (std::uint32_t i = 0; i < m / l; ++i) e *= p;
            Poly fr = poly_powmod(F, poly_x(F), e, f);
            Poly g = poly_gcd(F, poly_sub(F, fr, poly_x(F)), f);
            if (poly_deg(F, g) != 0) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<Limb> coeffs(m + 1);
        for (std::uint32_t i = 0; i <= m; ++i) coeffs[i] = f[i][0];
        return coeffs;
    }
}

inline bool Field::modulus_irreducible() const {
    FieldPtr Fp = Field::prime_field(spec_.p);
    const Field& F = *Fp;
    Poly f(spec_.m + 1);
    for (std::uint32_t i = 0; i <= spec_.m; ++i) f[i] = {spec_.min_poly[i]};
    unsigned __int128 pm = 1;
    for (std::uint32_t i = 0; i < spec_.m; ++i) pm *= spec_.p;
    Poly frob = poly_powmod(F, poly_x(F), pm, f);
    if (poly_deg(F, poly_sub(F, frob, poly_x(F))) >= 0) return false;
    for (std::uint32_t l = 2; l <= spec_.m; ++l) {
        if (spec_.m % l != 0) continue;
        bool lprime = true;
        for (std::uint32_t d = 2; d * d <= l; ++d)
            if (l % d == 0) lprime = false;
        if (!lprime) continue;
        unsigned __int128 e = 1;
        for (std::uint32_t i = 0; i < spec_.m / l; ++i) e *= spec_.p;
        Poly fr = poly_powmod(F, poly_x(F), e, f);
        if (poly_deg(F, poly_gcd(F, poly_sub(F, fr, poly_x(F)), f)) != 0) return false;
    }
    return true;
}

} // namespace klab
