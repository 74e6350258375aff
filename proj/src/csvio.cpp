#include "rramtk/csvio.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace rramtk {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& field) {
  std::size_t begin = field.find_first_not_of(" \t");
  std::size_t end = field.find_last_not_of(" \t\r");
  if (begin == std::string::npos)
    throw std::invalid_argument("parse_double: empty field");
  double value = 0;
  const char* first = field.data() + begin;
  const char* last = field.data() + end + 1;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw std::invalid_argument("parse_double: bad number '" + field + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

double compensated_sum(const std::vector<double>& xs) {
  double sum = 0, comp = 0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace rramtk
