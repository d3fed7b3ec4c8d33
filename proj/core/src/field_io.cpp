#include "crkfr/field_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crkfr {

namespace {

constexpr const char* kMagic = "# crkfr-field 1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void malformed(const std::string& what) {
  throw std::runtime_error("malformed field dump: " + what);
}

std::istringstream expect_line(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) malformed("missing '" + key + "' line");
  std::istringstream ss(line);
  std::string k;
  ss >> k;
  if (k != key) malformed("expected '" + key + "', found '" + k + "'");
  return ss;
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto r = std::from_chars(tok.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) malformed("bad number '" + tok + "'");
  return v;
}

}  // namespace

void FieldDump::validate() const {
  if (dim != 1 && dim != 2) throw std::runtime_error("field dump: dimension must be 1 or 2");
  if (nx < 1 || ny < 1) throw std::runtime_error("field dump: empty mesh");
  if (dim == 1 && ny != 1) throw std::runtime_error("field dump: 1-D dump with ny != 1");
  if (degree < 0) throw std::runtime_error("field dump: negative degree");
  if (variables.empty()) throw std::runtime_error("field dump: no variables");
  const std::size_t nodes = static_cast<std::size_t>(num_elements()) * nodes_per_element();
  if (x.size() != nodes || (dim == 2 && y.size() != nodes) || (dim == 1 && !y.empty()))
    throw std::runtime_error("field dump: coordinate count does not match the mesh");
  if (values.size() != nodes * variables.size())
    throw std::runtime_error("field dump: value count does not match the mesh");
  const int n = degree + 1;
  const int npe = nodes_per_element();
  for (int e = 0; e < num_elements(); ++e) {
    const std::size_t b = static_cast<std::size_t>(e) * npe;
    for (int i = 0; i < npe; ++i) {
      const int p = i % n, q = i / n;
      if (p > 0 && !(x[b + i] > x[b + i - 1]))
        throw std::runtime_error("field dump: x coordinates not increasing in element " + std::to_string(e));
      if (dim == 2 && q > 0 && !(y[b + i] > y[b + i - n]))
        throw std::runtime_error("field dump: y coordinates not increasing in element " + std::to_string(e));
    }
  }
}

void write_field(std::ostream& out, const FieldDump& d) {
  d.validate();
  out << kMagic << '\n';
  out << "equation " << d.equation << '\n';
  out << "dim " << d.dim << '\n';
  out << "degree " << d.degree << '\n';
  out << "points " << to_string(d.points) << '\n';
  out << "mesh " << d.nx << ' ' << d.ny << ' ' << fmt(d.xmin) << ' ' << fmt(d.xmax) << ' ' << fmt(d.ymin)
      << ' ' << fmt(d.ymax) << '\n';
  out << "time " << fmt(d.time) << '\n';
  out << "variables";
  for (const auto& v : d.variables) out << ' ' << v;
  out << '\n';
  out << "nodes " << d.num_nodes() << '\n';
  out << (d.dim == 2 ? "x y" : "x");
  for (const auto& v : d.variables) out << ' ' << v;
  out << '\n';
  const std::size_t m = d.variables.size();
  for (std::size_t i = 0; i < d.num_nodes(); ++i) {
    out << fmt(d.x[i]);
    if (d.dim == 2) out << ' ' << fmt(d.y[i]);
    for (std::size_t k = 0; k < m; ++k) out << ' ' << fmt(d.values[i * m + k]);
    out << '\n';
  }
}

void write_field(const std::string& path, const FieldDump& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_field(out, d);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

FieldDump read_field(std::istream& in) {
  FieldDump d;
  std::string line;
  if (!std::getline(in, line) || line != kMagic) malformed("missing header");
  expect_line(in, "equation") >> d.equation;
  if (!(expect_line(in, "dim") >> d.dim)) malformed("dim");
  if (!(expect_line(in, "degree") >> d.degree)) malformed("degree");
  {
    std::string pts;
    expect_line(in, "points") >> pts;
    try {
      d.points = parse_point_set(pts);
    } catch (const std::exception&) {
      malformed("points '" + pts + "'");
    }
  }
  {
    auto ss = expect_line(in, "mesh");
    std::string a, b, c, e;
    if (!(ss >> d.nx >> d.ny >> a >> b >> c >> e)) malformed("mesh");
    d.xmin = parse_double(a);
    d.xmax = parse_double(b);
    d.ymin = parse_double(c);
    d.ymax = parse_double(e);
  }
  {
    std::string t;
    expect_line(in, "time") >> t;
    d.time = parse_double(t);
  }
  {
    auto ss = expect_line(in, "variables");
    std::string v;
    while (ss >> v) d.variables.push_back(v);
  }
  std::size_t nodes = 0;
  if (!(expect_line(in, "nodes") >> nodes)) malformed("nodes");
  if (!std::getline(in, line)) malformed("missing column header");
  const std::size_t m = d.variables.size();
  const std::size_t cols = m + (d.dim == 2 ? 2 : 1);
  d.x.reserve(nodes);
  d.values.reserve(nodes * m);
  for (std::size_t i = 0; i < nodes; ++i) {
    if (!std::getline(in, line)) malformed("truncated payload");
    std::istringstream ss(line);
    std::string tok;
    std::size_t c = 0;
    for (; c < cols && ss >> tok; ++c) {
      const double v = parse_double(tok);
      if (c == 0) d.x.push_back(v);
      else if (d.dim == 2 && c == 1) d.y.push_back(v);
      else d.values.push_back(v);
    }
    if (c != cols || ss >> tok) malformed("wrong column count on row " + std::to_string(i));
  }
  try {
    d.validate();
  } catch (const std::exception& ex) {
    malformed(ex.what());
  }
  return d;
}

FieldDump read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_field(in);
}

}  // namespace crkfr
