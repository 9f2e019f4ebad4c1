#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace mck {

using Rational = mpq_class;
using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

std::string to_string(const Rational& x);

Mat identity(std::size_t n);
Mat zeros(std::size_t rows, std::size_t cols);
Mat multiply(const Mat& a, const Mat& b);
Vec multiply(const Mat& a, const Vec& x);
Rational dot(const Vec& a, const Vec& b);
bool is_identity(const Mat& a);

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Mat& m);
std::size_t rank(Mat m);

// Unique solution of a square system, or nullopt when singular.
std::optional<Vec> solve_square(Mat a, Vec b);
// Throws InvariantViolation when singular.
Mat inverse(const Mat& a);

enum class LpStatus { optimal, infeasible, unbounded };
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  Vec x;
};
// Maximize c.x subject to A x <= b and x >= 0; exact simplex with Bland's rule.
LpResult lp_maximize(const Mat& A, const Vec& b, const Vec& c);

}  // namespace mck
