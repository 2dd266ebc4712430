#pragma once

#include <cstdint>
#include <ostream>

#include "wtrnet/error.hpp"

namespace wtrnet {

using Symbol = std::uint32_t;

constexpr bool is_prime(std::uint32_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t d = 3; d <= n / d; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// Arithmetic on raw residues of a prime field GF(q).
///
/// Moduli are capped at 2^16 so products never leave 64-bit range and
/// inversion by Fermat's little theorem stays cheap.
class PrimeField {
public:
    static constexpr std::uint32_t max_modulus = 1u << 16;

    explicit PrimeField(std::uint32_t q) : q_(q) {
        if (!is_prime(q) || q > max_modulus)
            throw Error(Errc::invalid_modulus, "field modulus " + std::to_string(q) + " is not a supported prime");
    }

    std::uint32_t modulus() const noexcept { return q_; }

    Symbol reduce(std::uint64_t v) const noexcept { return static_cast<Symbol>(v % q_); }
    Symbol add(Symbol a, Symbol b) const noexcept { return reduce(std::uint64_t{a} + b); }
    Symbol sub(Symbol a, Symbol b) const noexcept { return reduce(std::uint64_t{a} + q_ - b); }
    Symbol neg(Symbol a) const noexcept { return a == 0 ? 0 : q_ - a; }
    Symbol mul(Symbol a, Symbol b) const noexcept { return reduce(std::uint64_t{a} * b); }

    Symbol inv(Symbol a) const {
        if (a % q_ == 0) throw Error(Errc::division_by_zero, "inverse of zero");
        Symbol result = 1;
        Symbol base = a % q_;
        for (std::uint32_t e = q_ - 2; e > 0; e >>= 1) {
            if (e & 1u) result = mul(result, base);
            base = mul(base, base);
        }
        return result;
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t q_;
};

/// An element of GF(q) that remembers its modulus.
class FieldElement {
public:
    FieldElement(std::uint64_t value, std::uint32_t modulus) : field_(modulus), value_(field_.reduce(value)) {}

    Symbol value() const noexcept { return value_; }
    std::uint32_t modulus() const noexcept { return field_.modulus(); }

    FieldElement inverse() const { return {field_.inv(value_), modulus()}; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        check_same(a, b);
        return {a.field_.add(a.value_, b.value_), a.modulus()};
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        check_same(a, b);
        return {a.field_.sub(a.value_, b.value_), a.modulus()};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        check_same(a, b);
        return {a.field_.mul(a.value_, b.value_), a.modulus()};
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
    FieldElement operator-() const { return {field_.neg(value_), modulus()}; }

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

    friend std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
        return os << e.value_ << " (mod " << e.modulus() << ')';
    }

private:
    static void check_same(const FieldElement& a, const FieldElement& b) {
        if (a.modulus() != b.modulus())
            throw Error(Errc::modulus_mismatch,
                        "GF(" + std::to_string(a.modulus()) + ") vs GF(" + std::to_string(b.modulus()) + ")");
    }

    PrimeField field_;
    Symbol value_;
};

enum class FieldOp { add, sub, mul, inv };

/// Single entry point for the four field operations; `b` is ignored for `inv`.
inline FieldElement field_arithmetic(const FieldElement& a, const FieldElement& b, FieldOp op) {
    if (a.modulus() != b.modulus())
        throw Error(Errc::modulus_mismatch,
                    "GF(" + std::to_string(a.modulus()) + ") vs GF(" + std::to_string(b.modulus()) + ")");
    switch (op) {
        case FieldOp::add: return a + b;
        case FieldOp::sub: return a - b;
        case FieldOp::mul: return a * b;
        case FieldOp::inv: return a.inverse();
    }
    return a;
}

}  // namespace wtrnet
