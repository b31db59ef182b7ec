#include "quench/format.hpp"

#include <charconv>
#include <stdexcept>

namespace quench {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, result.ptr);
}

}  // namespace quench
