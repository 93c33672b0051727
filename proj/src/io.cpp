#include "ddirac/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ddirac {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& file, int line_no) {
  try {
    size_t consumed = 0;
    const double v = std::stod(s, &consumed);
    if (consumed != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file.string() + ":" + std::to_string(line_no) +
                     ": cannot parse number '" + s + "'");
  }
}

long parse_int(const std::string& s, const std::filesystem::path& file, int line_no) {
  try {
    size_t consumed = 0;
    const long v = std::stol(s, &consumed);
    if (consumed != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file.string() + ":" + std::to_string(line_no) +
                     ": cannot parse integer '" + s + "'");
  }
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open file: " + file.string());
  return in;
}

UniformGrid grid_from_abscissas(const std::vector<double>& xs,
                                const std::filesystem::path& file) {
  if (xs.size() < 3) throw ParseError(file.string() + ": need at least 3 samples");
  const double h = (xs.back() - xs.front()) / double(xs.size() - 1);
  if (h <= 0) throw ParseError(file.string() + ": abscissas must increase");
  for (size_t i = 0; i < xs.size(); ++i) {
    const double expected = xs.front() + double(i) * h;
    if (std::abs(xs[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
      throw ParseError(file.string() + ": abscissas are not uniformly spaced near x = " +
                       std::to_string(xs[i]));
  }
  return UniformGrid(xs.front(), xs.back(), static_cast<int>(xs.size()) - 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SampledPair read_potential_csv(const std::filesystem::path& file) {
  std::ifstream in = open_or_throw(file);
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  ++line_no;
  if (split_csv_line(line) != std::vector<std::string>{"x", "q_re", "q_im", "p_re", "p_im"})
    throw ParseError(file.string() + ":1: expected header x,q_re,q_im,p_re,p_im");

  std::vector<double> xs;
  std::vector<Complex> q, p;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw ParseError(file.string() + ":" + std::to_string(line_no) +
                       ": expected 5 fields, got " + std::to_string(fields.size()));
    xs.push_back(parse_double(fields[0], file, line_no));
    q.emplace_back(parse_double(fields[1], file, line_no),
                   parse_double(fields[2], file, line_no));
    p.emplace_back(parse_double(fields[3], file, line_no),
                   parse_double(fields[4], file, line_no));
  }
  const UniformGrid g = grid_from_abscissas(xs, file);
  return SampledPair{SampledFunction(g, std::move(q)), SampledFunction(g, std::move(p))};
}

void write_potential_csv(const std::filesystem::path& file, const SampledFunction& q,
                         const SampledFunction& p) {
  if (!(q.grid() == p.grid()))
    throw std::invalid_argument("write_potential_csv: grids must match");
  std::ofstream out(file, std::ios::binary);  // LF line endings everywhere
  if (!out) throw ParseError("cannot open file for writing: " + file.string());
  out << "x,q_re,q_im,p_re,p_im\n";
  for (int k = 0; k < q.grid().nodes(); ++k) {
    out << format_double(q.grid().node(k)) << ',' << format_double(q.value(k).real()) << ','
        << format_double(q.value(k).imag()) << ',' << format_double(p.value(k).real()) << ','
        << format_double(p.value(k).imag()) << '\n';
  }
}

SpectralData read_spectra_csv(const std::filesystem::path& file) {
  std::ifstream in = open_or_throw(file);
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  ++line_no;
  if (split_csv_line(line) != std::vector<std::string>{"j", "n", "lambda_re", "lambda_im"})
    throw ParseError(file.string() + ":1: expected header j,n,lambda_re,lambda_im");

  struct Row {
    int n;
    Complex lambda;
  };
  std::vector<Row> rows1, rows2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw ParseError(file.string() + ":" + std::to_string(line_no) +
                       ": expected 4 fields, got " + std::to_string(fields.size()));
    const long j = parse_int(fields[0], file, line_no);
    const long n = parse_int(fields[1], file, line_no);
    const Complex lambda(parse_double(fields[2], file, line_no),
                         parse_double(fields[3], file, line_no));
    if (j != 1 && j != 2)
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": j must be 1 or 2");
    (j == 1 ? rows1 : rows2).push_back({static_cast<int>(n), lambda});
  }

  auto to_spectrum = [&](std::vector<Row>& rows, int j) {
    if (rows.empty())
      throw ParseError(file.string() + ": no rows for j = " + std::to_string(j));
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.n < b.n; });
    const int N = rows.back().n;
    if (rows.front().n != -N || static_cast<int>(rows.size()) != 2 * N + 1 || N < 1)
      throw ParseError(file.string() + ": j = " + std::to_string(j) +
                       " indices must form a contiguous symmetric range -N..N");
    std::vector<Complex> values;
    values.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].n != -N + static_cast<int>(i))
        throw ParseError(file.string() + ": j = " + std::to_string(j) +
                         " indices must form a contiguous symmetric range -N..N");
      values.push_back(rows[i].lambda);
    }
    return Spectrum(j, N, std::move(values));
  };

  Spectrum s1 = to_spectrum(rows1, 1);
  Spectrum s2 = to_spectrum(rows2, 2);
  if (s1.order() != s2.order())
    throw ParseError(file.string() + ": both spectra must share one truncation order");
  return SpectralData(std::move(s1), std::move(s2));
}

void write_spectra_csv(const std::filesystem::path& file, const SpectralData& data) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + file.string());
  out << "j,n,lambda_re,lambda_im\n";
  for (int j = 1; j <= 2; ++j) {
    const Spectrum& s = j == 1 ? data.spectrum1 : data.spectrum2;
    for (int n = -s.order(); n <= s.order(); ++n) {
      const Complex v = s.eigenvalue(n);
      out << j << ',' << n << ',' << format_double(v.real()) << ','
          << format_double(v.imag()) << '\n';
    }
  }
}

bool is_test_potential_name(const std::string& name) {
  return name == "P0" || name == "P1" || name == "P2";
}

PotentialPair make_test_potential(const std::string& name, DelayParameter a, int cells) {
  const UniformGrid g(a.value(), pi, cells);
  if (name == "P0") {
    return PotentialPair(a, SampledFunction::zero(g), SampledFunction::zero(g));
  }
  if (name == "P1") {
    return PotentialPair(
        a, SampledFunction::tabulate(g, [](double t) { return Complex(std::sin(t), 0.0); }),
        SampledFunction::tabulate(g, [](double t) { return Complex(std::cos(2.0 * t), 0.0); }));
  }
  if (name == "P2") {
    return PotentialPair(
        a,
        SampledFunction::tabulate(g,
                                  [](double t) { return Complex(std::sin(t), 0.5 * t); }),
        SampledFunction::tabulate(g, [](double t) { return Complex(0.0, std::cos(t)); }));
  }
  throw std::invalid_argument("unknown test potential: " + name);
}

}  // namespace ddirac
