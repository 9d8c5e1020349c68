// Exact scalar types and Eigen interop.
//
// All exact arithmetic in this library runs on GMP integers/rationals;
// Eigen supplies the dense containers and expression machinery.

#ifndef NOV_SCALAR_HPP
#define NOV_SCALAR_HPP

#include <gmpxx.h>

#include <Eigen/Core>

#include <string>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
    typedef mpz_class Real;
    typedef mpz_class NonInteger;
    typedef mpz_class Nested;
    enum {
        IsComplex = 0,
        IsInteger = 1,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 30,
        MulCost = 50
    };
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
    typedef mpq_class Real;
    typedef mpq_class NonInteger;
    typedef mpq_class Nested;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 60,
        MulCost = 100
    };
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace nov {

using Int = mpz_class;
using Rat = mpq_class;

using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using IntCovector = Eigen::Matrix<Int, 1, Eigen::Dynamic>;

inline Int int_from_string(const std::string& s) { return Int(s); }
inline std::string to_decimal(const Int& v) { return v.get_str(); }

inline Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

}  // namespace nov

#endif
