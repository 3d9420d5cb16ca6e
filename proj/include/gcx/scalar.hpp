#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/traits/is_byte_container.hpp>

// Eigen 3.4 declares `const_iterator` as void for non-vector expressions, which breaks
// the byte-container probe Boost.Multiprecision runs on every constructor argument.
namespace boost::multiprecision::detail {
template <class Derived>
    requires requires { typename Derived::StorageKind; typename Derived::Scalar; }
struct is_byte_container<Derived> : boost::false_type {};
}  // namespace boost::multiprecision::detail

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace gcx {

// Expression templates are turned off so the types behave as plain values inside Eigen.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

enum class Ring { Z, Q, Z2 };

// Element of the field with two elements.
struct Mod2 {
    std::uint8_t v = 0;

    Mod2() = default;
    Mod2(int x) : v(static_cast<std::uint8_t>(x & 1)) {}
    explicit Mod2(const Integer& x) : v(static_cast<std::uint8_t>(bit_test(x, 0) ? 1 : 0)) {}

    friend Mod2 operator+(Mod2 a, Mod2 b) { return Mod2(a.v ^ b.v); }
    friend Mod2 operator-(Mod2 a, Mod2 b) { return Mod2(a.v ^ b.v); }
    friend Mod2 operator*(Mod2 a, Mod2 b) { return Mod2(a.v & b.v); }
    friend Mod2 operator/(Mod2 a, Mod2 b) {
        if (!b.v) throw std::domain_error("division by zero in Z/2");
        return a;
    }
    Mod2 operator-() const { return *this; }
    Mod2& operator+=(Mod2 b) { v ^= b.v; return *this; }
    Mod2& operator-=(Mod2 b) { v ^= b.v; return *this; }
    Mod2& operator*=(Mod2 b) { v &= b.v; return *this; }
    Mod2& operator/=(Mod2 b) { *this = *this / b; return *this; }
    friend bool operator==(Mod2 a, Mod2 b) { return a.v == b.v; }
    friend bool operator!=(Mod2 a, Mod2 b) { return a.v != b.v; }
    friend std::ostream& operator<<(std::ostream& os, Mod2 a) { return os << int(a.v); }
};

inline Mod2 abs(Mod2 a) { return a; }

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;

std::string to_string(Ring r);
Ring ring_from_string(const std::string& s);

std::string to_decimal(const Integer& x);
std::string to_decimal(const Rational& x);
Integer parse_integer(const std::string& s);
Rational parse_rational(const std::string& s);

// Reduces a rational coefficient into the ring: Z requires an integer, Z2 reduces mod 2.
Rational normalize_coefficient(const Rational& x, Ring r);

inline bool is_zero(const Integer& x) { return x == 0; }
inline bool is_zero(const Rational& x) { return x == 0; }
inline bool is_zero(Mod2 x) { return x.v == 0; }

}  // namespace gcx

namespace Eigen {
template <>
struct NumTraits<gcx::Mod2> : GenericNumTraits<gcx::Mod2> {
    using Real = gcx::Mod2;
    using NonInteger = gcx::Mod2;
    using Literal = gcx::Mod2;
    using Nested = gcx::Mod2;
    enum {
        IsComplex = 0,
        IsInteger = 1,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 1,
        MulCost = 1
    };
    static gcx::Mod2 epsilon() { return gcx::Mod2(0); }
    static gcx::Mod2 dummy_precision() { return gcx::Mod2(0); }
    static gcx::Mod2 highest() { return gcx::Mod2(1); }
    static gcx::Mod2 lowest() { return gcx::Mod2(0); }
    static int digits10() { return 0; }
};
}  // namespace Eigen
