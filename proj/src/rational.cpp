#include "fracmatch/rational.hpp"

#include <sstream>

namespace fracmatch {

Ratio parse_ratio(const std::string& text) {
  Ratio q;
  if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
    throw std::invalid_argument("parse_ratio: malformed rational '" + text + "'");
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw std::invalid_argument("parse_ratio: zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::vector<Ratio> parse_ratio_list(const std::string& text) {
  std::string normalized = text;
  for (char& c : normalized)
    if (c == ',') c = ' ';
  std::istringstream is(normalized);
  std::vector<Ratio> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_ratio(tok));
  return out;
}

std::string to_string(const Ratio& q) { return q.get_str(); }
std::string to_string(const Int& z) { return z.get_str(); }

}  // namespace fracmatch
