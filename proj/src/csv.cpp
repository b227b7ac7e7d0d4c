#include <array>
#include <charconv>

#include "probreach/error.hpp"
#include "probreach/io.hpp"

namespace probreach::io {

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw IoError("format_double: conversion failed");
    return std::string(buf.data(), end);
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() +
                      (ec ? ": " + ec.message() : ""));
    }
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    row(header);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : CsvWriter(path, std::span<const std::string>(header.begin(), header.size())) {}

void CsvWriter::row(std::span<const std::string> cells) {
    if (cells.size() != columns_) throw IoError("CSV row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed for " + path_.string());
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
    row(std::span<const std::string>(cells.begin(), cells.size()));
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw IoError("closing " + path_.string() + " failed");
}

}  // namespace probreach::io
