#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "twochan/errors.hpp"
#include "twochan/phys_core.hpp"

namespace twochan {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc())
    throw io_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

inline void ensure_directory(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw io_error("cannot create directory '" + dir.string() +
                   "': " + ec.message());
}

inline void write_text(const std::filesystem::path &path,
                       const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw io_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out)
    throw io_error("write to '" + path.string() + "' failed");
}

inline std::string field_csv(const WaveField &f) {
  std::string s = "x,re_psi1,im_psi1,abs2_psi1,re_psi2,im_psi2,abs2_psi2\n";
  s.reserve(f.grid.n_points * 140);
  for (std::size_t i = 0; i < f.grid.n_points; ++i) {
    const cplx a = f.psi1[i], b = f.psi2[i];
    s += format_double(f.grid.x(i));
    for (double v : {a.real(), a.imag(), std::norm(a), b.real(), b.imag(),
                     std::norm(b)}) {
      s += ',';
      s += format_double(v);
    }
    s += '\n';
  }
  return s;
}

inline void write_field_csv(const std::filesystem::path &path,
                            const WaveField &f) {
  write_text(path, field_csv(f));
}

} // namespace twochan
