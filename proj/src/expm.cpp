#include <array>
#include <cmath>

#include "gkslkit/linalg.hpp"

namespace gkslkit::linalg {
namespace {

// Backward-error thresholds for the [m/m] diagonal Pade approximants in double
// precision (Higham 2005).
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                          2.097847961257068e0, 5.371920351148152e0};

constexpr double kB3[] = {120.0, 60.0, 12.0, 1.0};
constexpr double kB5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr double kB7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr double kB9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                          2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr double kB13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
                           129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
                           1323241920.0,        40840800.0,          960960.0,           16380.0,
                           182.0,               1.0};

// Fills U (odd part) and V (even part) so that r(A) = (V - U)^{-1} (V + U).
void pade_low(const Matrix& a, int m, Matrix& u, Matrix& v) {
  const double* b = m == 3 ? kB3 : m == 5 ? kB5 : m == 7 ? kB7 : kB9;
  const Matrix id = identity(a.rows());
  const Matrix a2 = matmul(a, a);
  Matrix odd = b[1] * id;
  Matrix even = b[0] * id;
  Matrix pw = a2;
  for (int j = 2; j <= m; j += 2) {
    odd += b[j + 1] * pw;
    even += b[j] * pw;
    if (j + 2 <= m) pw = matmul(pw, a2);
  }
  u = matmul(a, odd);
  v = even;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  const double* b = kB13;
  const Matrix id = identity(a.rows());
  const Matrix a2 = matmul(a, a);
  const Matrix a4 = matmul(a2, a2);
  const Matrix a6 = matmul(a4, a2);
  const Matrix inner_u = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Matrix inner_v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Matrix tu = matmul(a6, inner_u);
  tu += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  u = matmul(a, tu);
  v = matmul(a6, inner_v);
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix is not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const double nrm = norm1(a);
  if (!std::isfinite(nrm)) throw std::domain_error("expm: non-finite entries");
  if (nrm == 0.0) return identity(n);

  Matrix u;
  Matrix v;
  int squarings = 0;
  constexpr std::array<int, 4> kOrders = {3, 5, 7, 9};
  bool done = false;
  for (std::size_t i = 0; i < kOrders.size(); ++i) {
    if (nrm <= kTheta[i]) {
      pade_low(a, kOrders[i], u, v);
      done = true;
      break;
    }
  }
  if (!done) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / kTheta[4]))));
    const Matrix scaled = a * std::ldexp(1.0, -squarings);
    pade13(scaled, u, v);
  }

  const Eigen::MatrixXcd p = v - u;
  const Eigen::MatrixXcd q = v + u;
  Matrix r = Eigen::PartialPivLU<Eigen::MatrixXcd>(p).solve(q);
  for (int i = 0; i < squarings; ++i) r = matmul(r, r);
  return r;
}

}  // namespace gkslkit::linalg
