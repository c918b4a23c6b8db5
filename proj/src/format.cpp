#include "kdvtbc/format.hpp"

#include "kdvtbc/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace kdvtbc {

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{})
        throw Error("format_double: conversion failed");
    return std::string(buf.data(), end);
}

double parse_double(const std::string& token) {
    if (token == "nan")
        return std::nan("");
    if (token == "inf")
        return HUGE_VAL;
    if (token == "-inf")
        return -HUGE_VAL;
    double v = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParameterError("not a number: '" + token + "'");
    return v;
}

} // namespace kdvtbc
