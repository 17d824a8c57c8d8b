#include "qsep/state_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace qsep {

std::string format_double(double v) {
    char buf[32];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

void write_state(std::ostream& out, const BipartiteDensity& rho) {
    const std::size_t dim = rho.matrix().dim();
    out << rho.dim_a() << ' ' << rho.dim_b() << '\n';
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if (c > 0) out << ' ';
            const cplx e = rho.matrix()(r, c);
            out << format_double(e.real()) << ',' << format_double(e.imag());
        }
        out << '\n';
    }
}

std::string write_state_string(const BipartiteDensity& rho) {
    std::ostringstream oss;
    write_state(oss, rho);
    return oss.str();
}

namespace {

double parse_double(std::string_view token, const char* what) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const std::from_chars_result res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw std::runtime_error(std::string("read_state: malformed ") + what + " '" +
                                 std::string(token) + "'");
    }
    return value;
}

cplx parse_entry(const std::string& token) {
    const std::size_t comma = token.find(',');
    if (comma == std::string::npos) {
        throw std::runtime_error("read_state: entry '" + token + "' is not of the form re,im");
    }
    const double re = parse_double(std::string_view(token).substr(0, comma), "real part");
    const double im = parse_double(std::string_view(token).substr(comma + 1), "imaginary part");
    return cplx(re, im);
}

} // namespace

BipartiteDensity read_state(std::istream& in) {
    long long da = 0, db = 0;
    if (!(in >> da >> db) || da < 1 || db < 1 || da * db > 4096) {
        throw std::runtime_error("read_state: bad dimension header");
    }
    const std::size_t dim = static_cast<std::size_t>(da * db);
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            std::string token;
            if (!(in >> token)) {
                throw std::runtime_error("read_state: truncated matrix body");
            }
            m(r, c) = parse_entry(token);
        }
    }
    std::string extra;
    if (in >> extra) {
        throw std::runtime_error("read_state: trailing data '" + extra + "'");
    }
    const ValidationReport rep =
        validate(m, static_cast<std::size_t>(da), static_cast<std::size_t>(db));
    if (!rep.ok) {
        std::ostringstream oss;
        oss << "read_state: matrix is not a valid density (hermiticity defect "
            << format_double(rep.hermiticity_defect) << ", trace defect "
            << format_double(rep.trace_defect) << ", min eigenvalue "
            << format_double(rep.min_eigenvalue) << ")";
        throw std::runtime_error(oss.str());
    }
    return BipartiteDensity(std::move(m), static_cast<std::size_t>(da),
                            static_cast<std::size_t>(db));
}

BipartiteDensity read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_state: cannot open '" + path + "'");
    }
    return read_state(in);
}

} // namespace qsep
