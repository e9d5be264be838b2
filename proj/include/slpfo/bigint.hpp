#ifndef SLPFO_BIGINT_HPP
#define SLPFO_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace slpfo {

// Arbitrary-precision natural numbers used for lex ranks, path counts and weights.
using Nat = boost::multiprecision::cpp_int;

inline std::string to_string(const Nat& n) { return n.str(); }

inline Nat nat_from_string(const std::string& s) { return Nat(s); }

inline Nat nat_pow(const Nat& base, unsigned exponent) {
    Nat result = 1;
    for (unsigned i = 0; i < exponent; ++i) result *= base;
    return result;
}

}  // namespace slpfo

#endif
