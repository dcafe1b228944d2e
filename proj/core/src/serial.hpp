#pragma once

// Line-oriented model records: "<key> <values...>". Doubles are written as
// C99 hex floats so a read restores the exact bit pattern.

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace roadocc::detail {

void put(std::ostream& os, std::string_view key, double value);
void put(std::ostream& os, std::string_view key, std::uint64_t value);
void put(std::ostream& os, std::string_view key, const std::vector<double>& values);
void put(std::ostream& os, std::string_view key, const std::vector<std::uint64_t>& values);

double get_double(std::istream& is, std::string_view key);
std::uint64_t get_uint(std::istream& is, std::string_view key);
std::vector<double> get_doubles(std::istream& is, std::string_view key);
std::vector<std::uint64_t> get_uints(std::istream& is, std::string_view key);

}  // namespace roadocc::detail
