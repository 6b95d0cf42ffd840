#include "holocycle/jets.hpp"

#include <cstddef>
#include <stdexcept>

namespace holocycle {

namespace {

// binomial table up to n
std::vector<std::vector<double>> binomials(int n) {
  std::vector<std::vector<double>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1.0);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

// Partial Bell polynomials B[n][k] of the sequence x[1..r].
std::vector<std::vector<double>> bell_table(const std::vector<double>& x) {
  const int r = static_cast<int>(x.size());
  auto c = binomials(r);
  std::vector<std::vector<double>> b(r + 1, std::vector<double>(r + 1, 0.0));
  b[0][0] = 1.0;
  for (int n = 1; n <= r; ++n)
    for (int k = 1; k <= n; ++k) {
      double sum = 0.0;
      for (int j = 1; j <= n - k + 1; ++j)
        sum += c[n - 1][j - 1] * x[j - 1] * b[n - j][k - 1];
      b[n][k] = sum;
    }
  return b;
}

}  // namespace

std::vector<double> compose_jets(const std::vector<double>& g_at_h,
                                 const std::vector<double>& h_jets) {
  if (g_at_h.size() != h_jets.size())
    throw std::invalid_argument("compose_jets: mismatched jet orders");
  const int r = static_cast<int>(h_jets.size());
  auto b = bell_table(h_jets);
  std::vector<double> out(r, 0.0);
  for (int n = 1; n <= r; ++n) {
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += g_at_h[k - 1] * b[n][k];
    out[n - 1] = sum;
  }
  return out;
}

std::vector<double> inverse_jets(const std::vector<double>& h_at_w) {
  const int r = static_cast<int>(h_at_w.size());
  if (r == 0) return {};
  if (h_at_w[0] <= 0.0)
    throw std::invalid_argument("inverse_jets: nonpositive first derivative");
  std::vector<double> w(r, 0.0);
  w[0] = 1.0 / h_at_w[0];
  // Solve sum_k h^{(k)}(w) B_{n,k}(w') = [n == 1] progressively; the k = 1
  // term isolates w^{(n)} because B_{n,1} = w^{(n)}.
  for (int n = 2; n <= r; ++n) {
    // bell table of the known lower-order inverse jets; the order-n slot is
    // still unknown but B_{n,k} for k >= 2 never touches it
    auto b = bell_table(w);
    double sum = 0.0;
    for (int k = 2; k <= n; ++k) sum += h_at_w[k - 1] * b[n][k];
    w[n - 1] = -sum / h_at_w[0];
  }
  return w;
}

}  // namespace holocycle
