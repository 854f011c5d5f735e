#include "isostokes/io.hpp"

#include <cmath>
#include <cstdio>

#include "isostokes/errors.hpp"
#include "isostokes/golden.hpp"

namespace iso {

json to_json(cd z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMat& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json to_json(const QMat& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json to_json(const std::vector<cd>& v) {
  json out = json::array();
  for (auto z : v) out.push_back(to_json(z));
  return out;
}

std::string angle_str(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16g", x);
  return buf;
}

namespace {

Error bad(const std::string& what) { return input_error("ConfigInvalid", what); }

bool integral(double x) { return std::isfinite(x) && std::floor(x) == x && std::abs(x) < 1e15; }

}  // namespace

Num num_from_json(const json& j) {
  if (j.is_string()) return Num(parse_gauss(j.get<std::string>()));
  if (j.is_number()) {
    double x = j.get<double>();
    if (integral(x)) return Num(GaussQ(static_cast<long long>(x)));
    return Num(x);
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    double a = j[0].get<double>(), b = j[1].get<double>();
    if (integral(a) && integral(b)) return Num(GaussQ(Rational(static_cast<long long>(a)), Rational(static_cast<long long>(b))));
    return Num(cd(a, b));
  }
  throw bad("expected a number, [re, im] or an exact string, got " + j.dump());
}

cd cd_from_json(const json& j) { return num_from_json(j).c; }

std::vector<cd> cvec_from_json(const json& j) {
  if (!j.is_array()) throw bad("expected an array of complex numbers");
  std::vector<cd> v;
  for (const auto& x : j) v.push_back(cd_from_json(x));
  return v;
}

CoefMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw bad("expected a matrix as a list of rows");
  const int r = int(j.size()), c = int(j[0].size());
  CMat m(r, c);
  QMat q(r, c);
  bool exact = true;
  for (int a = 0; a < r; ++a) {
    if (!j[std::size_t(a)].is_array() || int(j[std::size_t(a)].size()) != c) throw bad("ragged matrix");
    for (int b = 0; b < c; ++b) {
      Num x = num_from_json(j[std::size_t(a)][std::size_t(b)]);
      m(a, b) = x.c;
      if (x.exact())
        q(a, b) = *x.q;
      else
        exact = false;
    }
  }
  return exact ? CoefMatrix(q) : CoefMatrix(m);
}

SystemCoefficients system_from_json(const json& j) {
  if (!j.is_object()) throw bad("system must be an object");
  if (j.contains("golden")) {
    std::string g = j["golden"].get<std::string>();
    BranchChoice b;
    if (j.contains("branch")) {
      b.flip12 = j["branch"].value("flip12", false);
      b.flip23 = j["branch"].value("flip23", false);
    }
    if (g == "ei") return ei_system();
    if (g == "a3-frozen") return a3_frozen_system(false);
    if (g == "a3-frozen-j") return a3_frozen_system(true);
    if (g == "a3-family") return a3_family_system(j.value("degree", 40), b);
    if (g == "a3-family-closed") return a3_family_closed_form(b);
    if (g == "example1") return example1_system();
    if (g == "roots") return roots_system();
    if (g == "two-parameter") return two_parameter_system();
    throw bad("unknown golden system '" + g + "'");
  }
  for (const char* key : {"n", "u0", "A"})
    if (!j.contains(key)) throw bad(std::string("system lacks '") + key + "'");
  int n = j["n"].get<int>();
  std::vector<Num> u0;
  for (const auto& x : j["u0"]) u0.push_back(num_from_json(x));
  std::vector<int> partition = j.value("partition", std::vector<int>{});
  std::vector<std::vector<Num>> tmap;
  if (j.contains("tmap"))
    for (const auto& row : j["tmap"]) {
      std::vector<Num> r;
      for (const auto& x : row) r.push_back(num_from_json(x));
      tmap.push_back(r);
    }
  std::vector<CoefficientGenerator> gens;
  for (const auto& level : j["A"]) {
    if (level.is_array() && !level.empty() && level[0].is_object()) {
      std::vector<Monomial> terms;
      for (const auto& m : level) terms.push_back({m.value("exps", std::vector<int>{}), matrix_from_json(m.at("matrix"))});
      gens.push_back(CoefficientGenerator::polynomial(std::move(terms)));
    } else {
      gens.push_back(CoefficientGenerator::constant(matrix_from_json(level)));
    }
  }
  auto s = make_system(n, u0, partition, gens, tmap);
  s.label = j.value("label", std::string("custom"));
  return s;
}

std::string config_hash(const json& j) {
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace iso
