#pragma once

#include <string>
#include <string_view>

namespace bnf {

std::string sha256_hex(std::string_view data);

// Shortest round-trip hexadecimal form of a double ("0x1.8p+1").
std::string hexfloat(double x);

// Accepts decimal and hexadecimal floating literals.
double parse_real(std::string_view text);

}  // namespace bnf
