#include "flock/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flock/error.hpp"

namespace flock {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

namespace {

class Row {
 public:
  explicit Row(std::ostream& out) : out_(out) {}
  Row& operator<<(double x) { return put(format_double(x)); }
  Row& put(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }
  ~Row() { out_ << '\n'; }

 private:
  std::ostream& out_;
  bool first_ = true;
};

void indexed(Row& row, const std::string& name, std::size_t dim) {
  for (std::size_t k = 1; k <= dim; ++k) row.put(name + "_" + std::to_string(k));
}

}  // namespace

void write_diagnostics_csv(std::ostream& out, const DiagnosticSeries& series, std::size_t dim) {
  {
    Row h(out);
    h.put("t").put("m0");
    indexed(h, "m1", dim);
    h.put("m2").put("X").put("EV").put("phi").put("Phi");
  }
  for (const DiagnosticRecord& r : series) {
    Row row(out);
    row << r.t << r.m0;
    for (double m : r.m1) row << m;
    row << r.m2 << r.X << r.EV << r.phi << r.Phi;
  }
}

void write_kinetic_csv(std::ostream& out, const std::vector<KineticRecord>& series, std::size_t dim) {
  {
    Row h(out);
    h.put("t").put("M0");
    indexed(h, "M1", dim);
    h.put("M2").put("Lambda").put("zeta").put("eta").put("phi_min").put("Phi").put("entropy_rate");
  }
  for (const KineticRecord& r : series) {
    Row row(out);
    row << r.t << r.M0;
    for (double m : r.M1) row << m;
    row << r.M2 << r.Lambda << r.zeta << r.eta << r.phi_min << r.Phi << r.entropy_rate;
  }
}

void write_state_csv(std::ostream& out, const ParticleState& s) {
  {
    Row h(out);
    indexed(h, "x", s.dim);
    indexed(h, "v", s.dim);
  }
  for (std::size_t i = 0; i < s.count(); ++i) {
    Row row(out);
    for (double x : s.position(i)) row << x;
    for (double v : s.velocity(i)) row << v;
  }
}

void write_ensemble_csv(std::ostream& out, const Ensemble& e) {
  {
    Row h(out);
    indexed(h, "x", e.dim);
    indexed(h, "v", e.dim);
    h.put("w");
  }
  for (std::size_t i = 0; i < e.count(); ++i) {
    Row row(out);
    for (double x : e.position(i)) row << x;
    for (double v : e.velocity(i)) row << v;
    row << e.w[i];
  }
}

void write_hydro_csv(std::ostream& out, const HydroField& f) {
  const std::size_t d = f.grid.dim;
  {
    Row h(out);
    indexed(h, "center", d);
    h.put("rho");
    indexed(h, "u", d);
    h.put("e").put("E");
    for (std::size_t k = 1; k <= d; ++k)
      for (std::size_t l = 1; l <= d; ++l) h.put("P_" + std::to_string(k) + std::to_string(l));
    indexed(h, "q", d);
  }
  for (const HydroCell& c : f.cells) {
    Row row(out);
    for (double x : c.center) row << x;
    row << c.rho;
    for (double u : c.u) row << u;
    row << c.e << c.E;
    for (double p : c.P) row << p;
    for (double q : c.q) row << q;
  }
}

ParticleState read_state_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SpecError("state CSV is empty");
  std::size_t columns = 1;
  for (char c : line) columns += c == ',';
  if (columns % 2 != 0) throw SpecError("state CSV needs x_1..x_d, v_1..v_d columns");
  const std::size_t d = columns / 2;

  ParticleState s;
  s.dim = d;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::vector<double> values;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      const char* a = p;
      const char* b = comma;
      while (a < b && (*a == ' ' || *a == '\t')) ++a;
      while (b > a && (b[-1] == ' ' || b[-1] == '\t' || b[-1] == '\r')) --b;
      double x = 0.0;
      const auto res = std::from_chars(a, b, x);
      if (res.ec != std::errc() || res.ptr != b)
        throw SpecError("state CSV row " + std::to_string(row) + ": bad number '" + std::string(a, b) + "'");
      values.push_back(x);
      p = comma + 1;
    }
    if (values.size() != columns)
      throw SpecError("state CSV row " + std::to_string(row) + ": expected " + std::to_string(columns) + " values");
    s.x.insert(s.x.end(), values.begin(), values.begin() + static_cast<std::ptrdiff_t>(d));
    s.v.insert(s.v.end(), values.begin() + static_cast<std::ptrdiff_t>(d), values.end());
  }
  if (s.x.empty()) throw SpecError("state CSV has no rows");
  return s;
}

ParticleState read_state_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  return read_state_csv(in);
}

}  // namespace flock
