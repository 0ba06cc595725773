// Matrix exponential by scaling and squaring (Higham, "The scaling and
// squaring method for the matrix exponential revisited", 2005).

#include <Eigen/LU>

#include <array>
#include <cmath>

#include "symland/sympcore.hpp"

namespace symland {
namespace {

// Pade numerator/denominator pieces: exp(A) ~ (V - U)^{-1} (V + U).
struct PadeParts {
  Mat u;
  Mat v;
};

PadeParts pade3(const Mat& a) {
  constexpr std::array<double, 4> b = {120.0, 60.0, 12.0, 1.0};
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  return {a * (b[3] * a2 + b[1] * id), b[2] * a2 + b[0] * id};
}

PadeParts pade5(const Mat& a) {
  constexpr std::array<double, 6> b = {30240.0, 15120.0, 3360.0,
                                       420.0,   30.0,    1.0};
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  return {a * (b[5] * a4 + b[3] * a2 + b[1] * id),
          b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeParts pade7(const Mat& a) {
  constexpr std::array<double, 8> b = {17297280.0, 8648640.0, 1995840.0,
                                       277200.0,   25200.0,   1512.0,
                                       56.0,       1.0};
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  return {a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id),
          b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeParts pade9(const Mat& a) {
  constexpr std::array<double, 10> b = {
      17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
      2162160.0,     110880.0,     3960.0,       90.0,        1.0};
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat a8 = a6 * a2;
  return {a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id),
          b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id};
}

PadeParts pade13(const Mat& a) {
  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  Mat u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
          b[5] * a4 + b[3] * a2 + b[1] * id;
  u = a * u;
  Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
          b[4] * a4 + b[2] * a2 + b[0] * id;
  return {std::move(u), std::move(v)};
}

Mat solve_pade(const PadeParts& p) {
  const Mat numer = p.v + p.u;
  const Mat denom = p.v - p.u;
  return denom.partialPivLu().solve(numer);
}

}  // namespace

Mat expm(const Mat& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("expm: matrix must be square");
  }
  if (a.size() == 0) return a;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) {
    return Mat::Constant(a.rows(), a.cols(),
                         std::numeric_limits<double>::quiet_NaN());
  }

  if (norm1 <= 1.495585217958292e-2) return solve_pade(pade3(a));
  if (norm1 <= 2.539398330063230e-1) return solve_pade(pade5(a));
  if (norm1 <= 9.504178996162932e-1) return solve_pade(pade7(a));
  if (norm1 <= 2.097847961257068e0) return solve_pade(pade9(a));

  constexpr double theta13 = 5.371920351148152;
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  }
  const Mat scaled = a / std::ldexp(1.0, squarings);
  Mat result = solve_pade(pade13(scaled));
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

}  // namespace symland
