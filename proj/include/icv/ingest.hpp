#pragma once

#include "icv/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

namespace icv {

struct Sample
{
  std::vector<double> values;
  double min = 0.0;
  double max = 0.0;

  std::size_t count() const { return values.size(); }
};

//! One number per line; blank lines and lines starting with '#' are skipped.
inline Sample ingest(std::istream& in)
{
  Sample out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    if (*begin == '+')
      ++begin;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
      throw Error("line " + std::to_string(line_no) + ": cannot parse '" + line + "' as a number");
    out.values.push_back(v);
  }
  if (out.values.size() < 2)
    throw Error("need at least 2 observations");
  const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
  out.min = *lo;
  out.max = *hi;
  return out;
}

inline Sample ingest_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path + "'");
  return ingest(in);
}

} // namespace icv
