#include "hashing.hpp"

#include <openssl/evp.h>

#include <cerrno>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "errors.hpp"

namespace bnf {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(digits[md[i] >> 4]);
    out.push_back(digits[md[i] & 15]);
  }
  return out;
}

std::string hexfloat(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::hex);
  std::string s(buf, res.ptr);
  if (!std::isfinite(x)) return s;
  // to_chars omits the prefix; keep the literal readable by strtod.
  if (s[0] == '-') return "-0x" + s.substr(1);
  return "0x" + s;
}

double parse_real(std::string_view text) {
  std::string s(text);
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) fail(ErrorKind::Parse, "empty number");
  s = s.substr(a, b - a + 1);
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    fail(ErrorKind::Parse, "not a number: '" + s + "'");
  return v;
}

}  // namespace bnf
