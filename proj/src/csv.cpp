#include "fedscreen/csv.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace fedscreen::csv {

std::vector<std::string> split_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            return fields;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += ',';
        out += fields[i];
    }
    return out;
}

std::string format_double(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

std::string format_fixed(double value, int places) {
    std::array<char, 64> buf;
    auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, places);
    if (ec != std::errc{}) throw std::runtime_error("format_fixed: conversion failed");
    return std::string(buf.data(), ptr);
}

std::string format_hex(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::hex);
    if (ec != std::errc{}) throw std::runtime_error("format_hex: conversion failed");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view field, const std::string& context) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error(context + ": expected a number, got '" + std::string(field) + "'");
    }
    return value;
}

long long parse_int(std::string_view field, const std::string& context) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error(context + ": expected an integer, got '" + std::string(field) + "'");
    }
    return value;
}

double parse_hex(std::string_view field, const std::string& context) {
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value, std::chars_format::hex);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error(context + ": expected a hex float, got '" + std::string(field) +
                                 "'");
    }
    return value;
}

}  // namespace fedscreen::csv
