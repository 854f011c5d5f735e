#include "isostokes/system.hpp"

#include <cmath>

namespace iso {

CoefficientGenerator CoefficientGenerator::constant(const CoefMatrix& m) {
  return polynomial({Monomial{{}, m}});
}

CoefficientGenerator CoefficientGenerator::polynomial(std::vector<Monomial> terms) {
  CoefficientGenerator g;
  if (terms.empty()) throw input_error("DimensionMismatch", "empty polynomial generator");
  g.n_ = terms.front().coef.c.rows();
  for (const auto& m : terms)
    if (!m.coef.c.square() || m.coef.c.rows() != g.n_)
      throw input_error("DimensionMismatch", "generator terms differ in shape");
  g.terms_ = std::move(terms);
  return g;
}

CoefficientGenerator CoefficientGenerator::function(int n, MatrixFunction f) {
  CoefficientGenerator g;
  g.n_ = n;
  g.fn_ = std::move(f);
  return g;
}

bool CoefficientGenerator::exact() const {
  if (fn_) return false;
  for (const auto& m : terms_)
    if (!m.coef.exact()) return false;
  return true;
}

CMat CoefficientGenerator::eval(const std::vector<cd>& t) const {
  if (fn_) return fn_(t);
  return eval_in<cd>(t, [](const CoefMatrix& c, int a, int b) { return c.c(a, b); });
}

QMat CoefficientGenerator::eval_exact(const std::vector<GaussQ>& t) const {
  if (!exact()) throw input_error("NotExact", "generator has floating coefficients");
  return eval_in<GaussQ>(t, [](const CoefMatrix& c, int a, int b) { return (*c.q)(a, b); });
}

bool SystemCoefficients::exact() const {
  for (const auto& x : u0)
    if (!x.exact()) return false;
  for (const auto& row : tmap)
    for (const auto& x : row)
      if (!x.exact()) return false;
  for (const auto& g : A)
    if (!g.exact()) return false;
  return true;
}

std::vector<cd> SystemCoefficients::u(const std::vector<cd>& t) const {
  if (static_cast<int>(t.size()) != arity()) throw input_error("DimensionMismatch", "t has wrong arity");
  std::vector<cd> out(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    cd s = u0[static_cast<std::size_t>(a)].c;
    for (int j = 0; j < arity(); ++j) s += tmap[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)].c * t[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(a)] = s;
  }
  return out;
}

std::vector<GaussQ> SystemCoefficients::u_exact(const std::vector<GaussQ>& t) const {
  if (static_cast<int>(t.size()) != arity()) throw input_error("DimensionMismatch", "t has wrong arity");
  std::vector<GaussQ> out(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto& ua = u0[static_cast<std::size_t>(a)];
    if (!ua.exact()) throw input_error("NotExact", "u0 is not exact");
    GaussQ s = *ua.q;
    for (int j = 0; j < arity(); ++j) {
      const auto& m = tmap[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)];
      if (!m.exact()) throw input_error("NotExact", "eigenvalue map is not exact");
      s += *m.q * t[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(a)] = s;
  }
  return out;
}

CMat SystemCoefficients::Lambda(const std::vector<cd>& t) const { return CMat::diag(u(t)); }

CMat SystemCoefficients::A_at(int k, const std::vector<cd>& t) const {
  if (k < 1) throw input_error("DimensionMismatch", "coefficient index starts at 1");
  if (k > levels()) return CMat(n, n);
  return A[static_cast<std::size_t>(k - 1)].eval(t);
}

QMat SystemCoefficients::A_exact(int k, const std::vector<GaussQ>& t) const {
  if (k < 1) throw input_error("DimensionMismatch", "coefficient index starts at 1");
  if (k > levels()) return QMat(n, n);
  return A[static_cast<std::size_t>(k - 1)].eval_exact(t);
}

std::vector<int> SystemCoefficients::block_of() const {
  std::vector<int> b;
  for (std::size_t i = 0; i < partition.size(); ++i)
    for (int k = 0; k < partition[i]; ++k) b.push_back(static_cast<int>(i));
  return b;
}

bool SystemCoefficients::same_block(int a, int b) const {
  auto blk = block_of();
  return blk[static_cast<std::size_t>(a)] == blk[static_cast<std::size_t>(b)];
}

std::vector<std::vector<Num>> identity_tmap(int n) {
  std::vector<std::vector<Num>> m(static_cast<std::size_t>(n), std::vector<Num>(static_cast<std::size_t>(n), Num(GaussQ(0))));
  for (int a = 0; a < n; ++a) m[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = Num(GaussQ(1));
  return m;
}

namespace {
bool num_equal(const Num& a, const Num& b) {
  if (a.exact() && b.exact()) return *a.q == *b.q;
  return std::abs(a.c - b.c) <= 1e-12 * (1.0 + std::abs(a.c) + std::abs(b.c));
}
}  // namespace

SystemCoefficients make_system(int n, std::vector<Num> u0, std::vector<int> partition,
                               std::vector<CoefficientGenerator> generators,
                               std::vector<std::vector<Num>> tmap) {
  if (n < 1) throw input_error("DimensionMismatch", "n must be positive");
  if (static_cast<int>(u0.size()) != n) throw input_error("DimensionMismatch", "u0 must have n entries");
  if (partition.empty()) {
    // infer contiguous blocks from equal neighbours
    int run = 1;
    for (int a = 1; a < n; ++a) {
      if (num_equal(u0[static_cast<std::size_t>(a)], u0[static_cast<std::size_t>(a - 1)])) {
        ++run;
      } else {
        partition.push_back(run);
        run = 1;
      }
    }
    partition.push_back(run);
  }
  int total = 0;
  for (int p : partition) {
    if (p < 1) throw input_error("PartitionInconsistent", "block sizes must be positive");
    total += p;
  }
  if (total != n) throw input_error("DimensionMismatch", "partition does not sum to n");
  if (tmap.empty()) tmap = identity_tmap(n);
  if (static_cast<int>(tmap.size()) != n) throw input_error("DimensionMismatch", "eigenvalue map needs n rows");
  for (const auto& row : tmap)
    if (row.size() != tmap.front().size()) throw input_error("DimensionMismatch", "ragged eigenvalue map");
  for (const auto& g : generators)
    if (g.size() != n) throw input_error("DimensionMismatch", "coefficient generator has wrong size");

  SystemCoefficients s;
  s.n = n;
  s.u0 = std::move(u0);
  s.partition = std::move(partition);
  s.tmap = std::move(tmap);
  s.A = std::move(generators);
  auto blk = s.block_of();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      bool eq = num_equal(s.u0[static_cast<std::size_t>(a)], s.u0[static_cast<std::size_t>(b)]);
      bool same = blk[static_cast<std::size_t>(a)] == blk[static_cast<std::size_t>(b)];
      if (eq != same)
        throw input_error("PartitionInconsistent", "u0 entries " + std::to_string(a + 1) + "," +
                                                       std::to_string(b + 1) + " contradict the declared blocks");
    }
  return s;
}

std::vector<cd> to_cd(const std::vector<GaussQ>& v) {
  std::vector<cd> out;
  for (const auto& x : v) out.push_back(x.to_cd());
  return out;
}

}  // namespace iso
