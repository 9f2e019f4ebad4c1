#include "mck/linalg.hpp"

#include <algorithm>

#include "mck/errors.hpp"

namespace mck {

std::string to_string(const Rational& x) { return x.get_str(); }

Mat identity(std::size_t n) {
  Mat m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat zeros(std::size_t rows, std::size_t cols) { return Mat(rows, Vec(cols, Rational(0))); }

Mat multiply(const Mat& a, const Mat& b) {
  if (a.empty()) return {};
  const std::size_t inner = b.size();
  const std::size_t cols = inner == 0 ? 0 : b[0].size();
  Mat out = zeros(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

Vec multiply(const Mat& a, const Vec& x) {
  Vec out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = dot(a[i], x);
  return out;
}

Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_identity(const Mat& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(Mat m) { return rref(m).size(); }

std::optional<Vec> solve_square(Mat a, Vec b) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto piv = rref(a);
  if (piv.size() != n || (n > 0 && piv.back() != n - 1)) return std::nullopt;
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

Mat inverse(const Mat& a) {
  const std::size_t n = a.size();
  Mat aug = a;
  for (std::size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n, Rational(0));
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) throw InvariantViolation("singular matrix");
  Mat out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].assign(aug[i].begin() + n, aug[i].end());
  return out;
}

namespace {

// Slack form: x_B[i] = b[i] - sum_j A[i][j] x_N[j], objective v + sum_j c[j] x_N[j].
struct Slack {
  std::vector<int> N, B;
  Mat A;
  Vec b, c;
  Rational v = 0;

  void pivot(std::size_t l, std::size_t e) {
    const Rational a = A[l][e];
    b[l] /= a;
    for (std::size_t j = 0; j < N.size(); ++j)
      if (j != e) A[l][j] /= a;
    A[l][e] = 1 / a;
    for (std::size_t i = 0; i < B.size(); ++i) {
      if (i == l || A[i][e] == 0) continue;
      const Rational f = A[i][e];
      b[i] -= f * b[l];
      for (std::size_t j = 0; j < N.size(); ++j)
        if (j != e) A[i][j] -= f * A[l][j];
      A[i][e] = -f * A[l][e];
    }
    const Rational f = c[e];
    v += f * b[l];
    for (std::size_t j = 0; j < N.size(); ++j)
      if (j != e) c[j] -= f * A[l][j];
    c[e] = -f * A[l][e];
    std::swap(N[e], B[l]);
  }

  // Returns false when unbounded.
  bool run() {
    for (;;) {
      std::size_t e = N.size();
      for (std::size_t j = 0; j < N.size(); ++j)
        if (c[j] > 0 && (e == N.size() || N[j] < N[e])) e = j;
      if (e == N.size()) return true;
      std::size_t l = B.size();
      Rational best;
      for (std::size_t i = 0; i < B.size(); ++i) {
        if (A[i][e] <= 0) continue;
        const Rational ratio = b[i] / A[i][e];
        if (l == B.size() || ratio < best || (ratio == best && B[i] < B[l])) l = i, best = ratio;
      }
      if (l == B.size()) return false;
      pivot(l, e);
    }
  }
};

}  // namespace

LpResult lp_maximize(const Mat& A, const Vec& b, const Vec& c) {
  const std::size_t m = A.size(), n = c.size();
  Slack s;
  for (std::size_t j = 0; j < n; ++j) s.N.push_back(static_cast<int>(j));
  for (std::size_t i = 0; i < m; ++i) s.B.push_back(static_cast<int>(n + i));
  s.A = A;
  s.b = b;
  LpResult res;
  std::size_t low = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (b[i] < b[low]) low = i;
  if (m > 0 && b[low] < 0) {
    // Auxiliary problem: maximize -x0 with x0 added to every constraint.
    const int aux = static_cast<int>(n + m);
    s.N.push_back(aux);
    for (auto& row : s.A) row.push_back(Rational(-1));
    s.c.assign(n + 1, Rational(0));
    s.c[n] = -1;
    s.pivot(low, n);
    s.run();
    if (s.v != 0) return res;
    auto bi = std::find(s.B.begin(), s.B.end(), aux);
    if (bi != s.B.end()) {
      const std::size_t l = bi - s.B.begin();
      std::size_t e = 0;
      while (e < s.N.size() && s.A[l][e] == 0) ++e;
      if (e == s.N.size()) {
        // Redundant row 0 = x0; drop it.
        s.B.erase(s.B.begin() + l);
        s.A.erase(s.A.begin() + l);
        s.b.erase(s.b.begin() + l);
      } else {
        s.pivot(l, e);
      }
    }
    const std::size_t col = std::find(s.N.begin(), s.N.end(), aux) - s.N.begin();
    s.N.erase(s.N.begin() + col);
    for (auto& row : s.A) row.erase(row.begin() + col);
  }
  s.c.assign(s.N.size(), Rational(0));
  s.v = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (c[k] == 0) continue;
    auto nj = std::find(s.N.begin(), s.N.end(), static_cast<int>(k));
    if (nj != s.N.end()) {
      s.c[nj - s.N.begin()] += c[k];
      continue;
    }
    const std::size_t i = std::find(s.B.begin(), s.B.end(), static_cast<int>(k)) - s.B.begin();
    s.v += c[k] * s.b[i];
    for (std::size_t j = 0; j < s.N.size(); ++j) s.c[j] -= c[k] * s.A[i][j];
  }
  if (!s.run()) {
    res.status = LpStatus::unbounded;
    return res;
  }
  res.status = LpStatus::optimal;
  res.value = s.v;
  res.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < s.B.size(); ++i)
    if (s.B[i] < static_cast<int>(n)) res.x[s.B[i]] = s.b[i];
  return res;
}

}  // namespace mck
