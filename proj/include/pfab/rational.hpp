#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace pfab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long n, long long d = 1) { return Rat(Int(n), Int(d)); }

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

inline std::string to_string(const Rat& r) {
    return r.str();
}

/// Parses "p/q" or "p" with optional sign.
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

}  // namespace pfab
