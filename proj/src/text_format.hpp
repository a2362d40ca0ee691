#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "aggdiff/errors.hpp"

namespace aggdiff::detail {

/// Shortest decimal text that parses back to exactly x.
inline std::string shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// Whole-string parse; throws InvalidArgument naming `what` on failure.
inline double parse_number(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace aggdiff::detail
