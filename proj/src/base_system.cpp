#include "holocycle/base_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "holocycle/errors.hpp"

namespace holocycle {

namespace {

double frac_unit(double t) {
  double y = t - std::floor(t);
  if (y >= 1.0) y = 0.0;
  if (y < 0.0) y += 1.0;
  return y;
}

// signed base to an integer power, exact sign handling for negative bases
double signed_pow(double base, long k) {
  if (base >= 0.0) return std::pow(base, static_cast<double>(k));
  double mag = std::pow(-base, static_cast<double>(k));
  return (k & 1L) ? -mag : mag;
}

double circle_delta(double d) { return d - std::round(d); }

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double halton(long i, int b) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= b;
    r += f * static_cast<double>(i % b);
    i /= b;
  }
  return r;
}

Rational rat_round_nearest(const Rational& r) {
  Rational h = r + Rational(1, 2);
  Int num = numerator(h), den = denominator(h);
  Int fl = num / den;
  if (num < 0 && num % den != 0) fl -= 1;
  return Rational(fl);
}

Word rotate_left(const Word& w, std::size_t k) {
  if (w.empty()) return w;
  k %= w.size();
  Word out(w.begin() + static_cast<long>(k), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<long>(k));
  return out;
}

constexpr long long kEntryCap = 1LL << 40;

Mat2i mul_guarded(const Mat2i& x, const Mat2i& y) {
  auto big = [](long long v) { return v > kEntryCap || v < -kEntryCap; };
  Mat2i r{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
  if (big(r.a) || big(r.b) || big(r.c) || big(r.d))
    throw BudgetExceeded("matrix power overflows the enumeration budget");
  return r;
}

Mat2i power_guarded(const Mat2i& A, long n) {
  Mat2i r = Mat2i::identity();
  for (long i = 0; i < n; ++i) r = mul_guarded(r, A);
  return r;
}

RatVec2 apply_mat(const Mat2i& M, const RatVec2& v) {
  RatVec2 r{Rational(M.a) * v.x + Rational(M.b) * v.y,
            Rational(M.c) * v.x + Rational(M.d) * v.y};
  return reduce_mod1(r);
}

}  // namespace

struct BaseSystem::ToralData {
  Mat2i A;
  double lam_s = 0.0, lam_u = 0.0;  // signed eigenvalues
  Vec2 es, eu;                      // unit eigenvectors
  double frame_det = 1.0;           // det [es eu]
  double C1 = 1.0;
};

struct BaseSystem::SftData {
  int nsym = 0;
  std::vector<std::vector<int>> T;
  double base = 0.5;
  std::vector<std::vector<int>> succ, pred;
  std::vector<Word> cycle_through;  // shortest s -> ... -> s walk, closing edge implied
};

const BaseSystem::ToralData& BaseSystem::t() const {
  if (!toral_) throw ConfigInvalid("operation requires a toral base");
  return *toral_;
}

const BaseSystem::SftData& BaseSystem::s() const {
  if (!sft_) throw ConfigInvalid("operation requires a subshift base");
  return *sft_;
}

bool BaseSystem::is_toral() const { return static_cast<bool>(toral_); }

int BaseSystem::alphabet_size() const { return sft_ ? sft_->nsym : 0; }

const Mat2i& BaseSystem::matrix() const { return t().A; }
Vec2 BaseSystem::stable_dir() const { return t().es; }
Vec2 BaseSystem::unstable_dir() const { return t().eu; }
double BaseSystem::stable_eigenvalue() const { return t().lam_s; }
double BaseSystem::unstable_eigenvalue() const { return t().lam_u; }
bool BaseSystem::transition_allowed(int i, int j) const {
  const auto& d = s();
  if (i < 0 || j < 0 || i >= d.nsym || j >= d.nsym) return false;
  return d.T[i][j] != 0;
}
double BaseSystem::metric_base() const { return s().base; }

BaseSystem BaseSystem::toral(const Mat2i& A) {
  long long det = A.det(), tr = A.trace();
  if (det != 1 && det != -1)
    throw ConfigInvalid("toral matrix must have determinant +1 or -1");
  if (std::llabs(A.a) > 100000 || std::llabs(A.b) > 100000 || std::llabs(A.c) > 100000 ||
      std::llabs(A.d) > 100000)
    throw ConfigInvalid("toral matrix entries out of range");
  bool hyperbolic = (det == 1 && std::llabs(tr) > 2) || (det == -1 && tr != 0);
  if (!hyperbolic) throw ConfigInvalid("toral matrix is not hyperbolic");

  auto d = std::make_shared<ToralData>();
  d->A = A;
  double disc = std::sqrt(static_cast<double>(tr * tr - 4 * det));
  double l1 = 0.5 * (static_cast<double>(tr) + disc);
  double l2 = 0.5 * (static_cast<double>(tr) - disc);
  if (std::fabs(l1) < std::fabs(l2)) std::swap(l1, l2);
  d->lam_u = l1;
  d->lam_s = l2;

  auto eigvec = [&A](double lam) {
    Vec2 v;
    if (A.b != 0) {
      v = {static_cast<double>(A.b), lam - static_cast<double>(A.a)};
    } else if (A.c != 0) {
      v = {lam - static_cast<double>(A.d), static_cast<double>(A.c)};
    } else {
      v = (std::fabs(lam - static_cast<double>(A.a)) < 0.5) ? Vec2{1.0, 0.0}
                                                            : Vec2{0.0, 1.0};
    }
    double n = std::hypot(v.x, v.y);
    v.x /= n;
    v.y /= n;
    if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) {
      v.x = -v.x;
      v.y = -v.y;
    }
    return v;
  };
  d->es = eigvec(d->lam_s);
  d->eu = eigvec(d->lam_u);
  d->frame_det = d->es.x * d->eu.y - d->eu.x * d->es.y;
  double g = std::fabs(d->es.x * d->eu.x + d->es.y * d->eu.y);
  d->C1 = std::sqrt((1.0 + g) / (1.0 - g));

  BaseSystem sys;
  sys.toral_ = d;
  sys.consts_.C1 = d->C1;
  sys.consts_.lambda = std::fabs(d->lam_s);
  sys.consts_.epsilon = 0.25;
  sys.consts_.tau = 0.25 * std::sqrt(1.0 - g);
  sys.consts_.epsilon0 = 0.25;
  sys.consts_.theta = std::sqrt(sys.consts_.lambda);
  sys.consts_.C5 = 2.0 * d->C1 / (1.0 - sys.consts_.lambda);
  return sys;
}

BaseSystem BaseSystem::sft(const std::vector<std::vector<int>>& transition,
                           double metric_base) {
  int n = static_cast<int>(transition.size());
  if (n < 2 || n > 256) throw ConfigInvalid("alphabet size must be between 2 and 256");
  if (!(metric_base > 0.0 && metric_base < 1.0))
    throw ConfigInvalid("metric base must lie in (0, 1)");
  auto d = std::make_shared<SftData>();
  d->nsym = n;
  d->T = transition;
  d->base = metric_base;
  d->succ.resize(n);
  d->pred.resize(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(transition[i].size()) != n)
      throw ConfigInvalid("transition matrix must be square");
    for (int j = 0; j < n; ++j) {
      int e = transition[i][j];
      if (e != 0 && e != 1) throw ConfigInvalid("transition entries must be 0 or 1");
      if (e) {
        d->succ[i].push_back(j);
        d->pred[j].push_back(i);
      }
    }
  }
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          q.push_back(v);
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  if (!reaches_all(d->succ) || !reaches_all(d->pred))
    throw ConfigInvalid("transition matrix must be irreducible");

  d->cycle_through.resize(n);
  for (int start = 0; start < n; ++start) {
    std::vector<int> parent(n, -2), depth(n, -1);
    std::deque<int> q{start};
    depth[start] = 0;
    parent[start] = -1;
    int closer = -1;
    // BFS order finds the node closing the shortest cycle through start
    std::vector<int> order{start};
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      int u = order[qi];
      if (d->T[u][start]) {
        closer = u;
        break;
      }
      for (int v : d->succ[u])
        if (depth[v] < 0) {
          depth[v] = depth[u] + 1;
          parent[v] = u;
          order.push_back(v);
        }
    }
    if (closer < 0) throw ConfigInvalid("irreducible matrix without a cycle");
    Word cyc;
    for (int u = closer; u != -1; u = parent[u]) cyc.push_back(u);
    std::reverse(cyc.begin(), cyc.end());
    d->cycle_through[start] = cyc;
  }

  BaseSystem sys;
  sys.sft_ = d;
  sys.consts_.C1 = 1.0;
  sys.consts_.lambda = metric_base;
  sys.consts_.epsilon = metric_base;
  sys.consts_.tau = metric_base;
  sys.consts_.epsilon0 = metric_base * metric_base;
  sys.consts_.theta = std::sqrt(metric_base);
  sys.consts_.C5 = 1.0;
  return sys;
}

BaseSystem BaseSystem::powered(int n0) const {
  if (n0 < 1) throw ConfigInvalid("power must be a positive integer");
  BaseSystem out = *this;
  out.step_ = step_ * n0;
  out.consts_.lambda = std::pow(consts_.lambda, n0);
  out.consts_.theta = std::pow(consts_.theta, n0);
  return out;
}

BaseSystem BaseSystem::base_step_system() const {
  BaseSystem out = *this;
  if (step_ == 1) return out;
  int n0 = step_;
  out.step_ = 1;
  out.consts_.lambda = std::pow(consts_.lambda, 1.0 / n0);
  out.consts_.theta = std::pow(consts_.theta, 1.0 / n0);
  return out;
}

BaseSystem BaseSystem::with_constants(const HyperbolicConstants& c) const {
  BaseSystem out = *this;
  out.consts_ = c;
  return out;
}

void BaseSystem::refresh_view(TorusPoint& p) const {
  const auto& d = t();
  p.view.x = frac_unit(to_double(p.p.x) + p.a * d.es.x + p.b * d.eu.x);
  p.view.y = frac_unit(to_double(p.p.y) + p.a * d.es.y + p.b * d.eu.y);
}

TorusPoint BaseSystem::point_from_views(double x, double y) const {
  TorusPoint out;
  out.p = reduce_mod1({rational_from_double(frac_unit(x)), rational_from_double(frac_unit(y))});
  out.a = out.b = 0.0;
  refresh_view(out);
  return out;
}

TorusPoint BaseSystem::point_from_rationals(const Rational& x, const Rational& y) const {
  TorusPoint out;
  out.p = reduce_mod1({x, y});
  out.a = out.b = 0.0;
  refresh_view(out);
  return out;
}

TorusPoint BaseSystem::leaf_point(const TorusPoint& base, double da, double db) const {
  TorusPoint out = base;
  out.a += da;
  out.b += db;
  refresh_view(out);
  return out;
}

std::pair<double, double> BaseSystem::decompose(const Vec2& v) const {
  const auto& d = t();
  double a = (v.x * d.eu.y - d.eu.x * v.y) / d.frame_det;
  double b = (d.es.x * v.y - v.x * d.es.y) / d.frame_det;
  return {a, b};
}

BasePoint BaseSystem::apply(const BasePoint& x, long n) const {
  long steps = n * step_;
  if (std::holds_alternative<TorusPoint>(x)) {
    const auto& d = t();
    TorusPoint q = std::get<TorusPoint>(x);
    const Mat2i M = steps >= 0 ? d.A : d.A.inverse_unimodular();
    long count = steps >= 0 ? steps : -steps;
    for (long i = 0; i < count; ++i) q.p = apply_mat(M, q.p);
    if (q.a != 0.0) q.a *= signed_pow(d.lam_s, steps);
    if (q.b != 0.0) q.b *= signed_pow(d.lam_u, steps);
    if (!std::isfinite(q.a) || !std::isfinite(q.b))
      throw BudgetExceeded("leaf offset overflow along the orbit");
    refresh_view(q);
    return q;
  }
  return std::get<SymbolPoint>(x).shifted(steps);
}

double BaseSystem::dist(const BasePoint& x, const BasePoint& y) const {
  if (std::holds_alternative<TorusPoint>(x)) {
    const auto& d = t();
    const auto& a = std::get<TorusPoint>(x);
    const auto& b = std::get<TorusPoint>(y);
    if (rat_eq(a.p, b.p)) {
      double da = a.a - b.a, db = a.b - b.b;
      if (std::fabs(da) + std::fabs(db) < 0.25)
        return std::hypot(da * d.es.x + db * d.eu.x, da * d.es.y + db * d.eu.y);
    }
    return std::hypot(circle_delta(a.view.x - b.view.x), circle_delta(a.view.y - b.view.y));
  }
  long m = std::get<SymbolPoint>(x).first_disagreement(std::get<SymbolPoint>(y));
  if (m < 0) return 0.0;
  return std::pow(s().base, static_cast<double>(m));
}

bool BaseSystem::same_point(const BasePoint& x, const BasePoint& y, double tol) const {
  if (std::holds_alternative<TorusPoint>(x)) {
    const auto& a = std::get<TorusPoint>(x);
    const auto& b = std::get<TorusPoint>(y);
    return std::fabs(circle_delta(a.view.x - b.view.x)) <= tol &&
           std::fabs(circle_delta(a.view.y - b.view.y)) <= tol;
  }
  return std::get<SymbolPoint>(x) == std::get<SymbolPoint>(y);
}

Vec2 BaseSystem::chart(const BasePoint& x) const {
  if (std::holds_alternative<TorusPoint>(x)) return std::get<TorusPoint>(x).view;
  const auto& d = s();
  const auto& p = std::get<SymbolPoint>(x);
  double denom = d.nsym > 1 ? static_cast<double>(d.nsym - 1) : 1.0;
  double beta = 0.5, u = 0.0, v = 0.0, w = 1.0 - beta;
  for (int i = 0; i < 64; ++i) {
    u += w * static_cast<double>(p.symbol(i)) / denom;
    v += w * static_cast<double>(p.symbol(-1 - i)) / denom;
    w *= beta;
  }
  return {u, v};
}

std::string BaseSystem::point_key(const BasePoint& x) const {
  if (std::holds_alternative<TorusPoint>(x)) {
    const auto& p = std::get<TorusPoint>(x);
    char buf[80];
    std::snprintf(buf, sizeof(buf), ";%a;%a", p.a, p.b);
    return "T:" + p.p.x.str() + "," + p.p.y.str() + buf;
  }
  return "S:" + std::get<SymbolPoint>(x).to_string();
}

BasePoint BaseSystem::sample_point(long index) const {
  if (index < 0) throw ConfigInvalid("sample index must be nonnegative");
  if (toral_) return point_from_views(halton(index + 1, 2), halton(index + 1, 3));
  const auto& d = s();
  std::uint64_t state = static_cast<std::uint64_t>(index) * 2654435761ULL + 0x1234ABCDULL;
  int start = static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(d.nsym));
  const int depth = 12;
  Word future{start};
  for (int i = 1; i < depth; ++i) {
    const auto& sc = d.succ[future.back()];
    future.push_back(sc[splitmix64(state) % sc.size()]);
  }
  Word past_rev;
  {
    int cur = start;
    for (int i = 0; i < depth; ++i) {
      const auto& pr = d.pred[cur];
      cur = pr[splitmix64(state) % pr.size()];
      past_rev.push_back(cur);
    }
  }
  Word ftail = d.cycle_through[d.succ[future.back()][0]];
  const Word& c = d.cycle_through[d.pred[past_rev.back()][0]];
  Word ptail(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) ptail[j] = c[(c.size() - j) % c.size()];
  return validated(SymbolPoint(past_rev, ptail, future, ftail));
}

SymbolPoint BaseSystem::validated(const SymbolPoint& p) const {
  const auto& d = s();
  if (p.past_tail().empty() || p.future_tail().empty())
    throw InadmissibleSplice("symbol point must have periodic tails");
  long lo = -static_cast<long>(p.past_core().size() + 2 * p.past_tail().size()) - 1;
  long hi = static_cast<long>(p.future_core().size() + 2 * p.future_tail().size()) + 1;
  for (long i = lo; i < hi; ++i) {
    int a = p.symbol(i), b = p.symbol(i + 1);
    if (a < 0 || a >= d.nsym || b < 0 || b >= d.nsym)
      throw InadmissibleSplice("symbol out of alphabet range");
    if (!d.T[a][b])
      throw InadmissibleSplice("inadmissible transition at index " + std::to_string(i));
  }
  return p;
}

BasePoint BaseSystem::bracket(const BasePoint& x, const BasePoint& y) const {
  double dxy = dist(x, y);
  if (dxy > consts_.tau * (1.0 + 1e-12))
    throw BracketOutOfRange("points are " + std::to_string(dxy) +
                            " apart, bracket radius is " + std::to_string(consts_.tau));
  if (toral_) {
    const auto& a = std::get<TorusPoint>(x);
    const auto& b = std::get<TorusPoint>(y);
    const auto& d = t();
    if (rat_eq(a.p, b.p)) {
      double da = a.a - b.a, db = a.b - b.b;
      double sep = std::hypot(da * d.es.x + db * d.eu.x, da * d.es.y + db * d.eu.y);
      if (sep <= consts_.tau * (1.0 + 1e-12)) {
        TorusPoint z = a;
        z.a = b.a;  // z = y + (x.b - y.b) e_u = x - (x.a - y.a) e_s
        refresh_view(z);
        return z;
      }
    }
    Vec2 v{circle_delta(a.view.x - b.view.x), circle_delta(a.view.y - b.view.y)};
    auto [ca, cb] = decompose(v);
    TorusPoint z = a;
    z.a -= ca;
    refresh_view(z);
    if (dist(z, x) > consts_.epsilon * (1.0 + 1e-9) ||
        dist(z, y) > consts_.epsilon * (1.0 + 1e-9))
      throw BracketOutOfRange("bracket left the local leaves");
    return z;
  }
  const auto& a = std::get<SymbolPoint>(x);
  const auto& b = std::get<SymbolPoint>(y);
  if (a.first_disagreement(b) < 0) return x;
  if (!transition_allowed(b.symbol(-1), a.symbol(0)))
    throw InadmissibleSplice("junction between past and future is not allowed");
  return SymbolPoint(b.past_core(), b.past_tail(), a.future_core(), a.future_tail());
}

namespace {

// exact-length reachability tables over a 0/1 adjacency, rows = from-symbol
struct ReachTable {
  std::vector<std::vector<char>> levels;  // levels[k][sym]
  const std::vector<std::vector<int>>* adj = nullptr;
  void init(int n, int src, const std::vector<std::vector<int>>& a) {
    adj = &a;
    levels.assign(1, std::vector<char>(n, 0));
    levels[0][src] = 1;
  }
  const std::vector<char>& level(std::size_t k) {
    while (levels.size() <= k) {
      const auto& prev = levels.back();
      std::vector<char> next(prev.size(), 0);
      for (std::size_t u = 0; u < prev.size(); ++u)
        if (prev[u])
          for (int v : (*adj)[u]) next[v] = 1;
      levels.push_back(std::move(next));
    }
    return levels[k];
  }
};

}  // namespace

std::vector<PathLeg> BaseSystem::su_path(const BasePoint& x, const BasePoint& z,
                                         bool stable_first) const {
  if (same_point(x, z, 1e-15)) return {};
  std::vector<PathLeg> legs;
  if (toral_) {
    const auto& a = std::get<TorusPoint>(x);
    const auto& c = std::get<TorusPoint>(z);
    const auto& d = t();
    double ca = 0.0, cb = 0.0;
    bool shared = false;
    if (rat_eq(a.p, c.p)) {
      double da = c.a - a.a, db = c.b - a.b;
      if (std::hypot(da * d.es.x + db * d.eu.x, da * d.es.y + db * d.eu.y) <= 0.75) {
        ca = da;
        cb = db;
        shared = true;
      }
    }
    if (!shared) {
      Vec2 v{circle_delta(c.view.x - a.view.x), circle_delta(c.view.y - a.view.y)};
      std::tie(ca, cb) = decompose(v);
    }
    TorusPoint z2 = a;
    z2.a += ca;
    z2.b += cb;
    refresh_view(z2);
    if (ca == 0.0) return {{x, z2, LeafTag::unstable}};
    if (cb == 0.0) return {{x, z2, LeafTag::stable}};
    TorusPoint w1 = a;
    if (stable_first) {
      w1.a += ca;
      refresh_view(w1);
      legs.push_back({x, w1, LeafTag::stable});
      legs.push_back({w1, z2, LeafTag::unstable});
    } else {
      w1.b += cb;
      refresh_view(w1);
      legs.push_back({x, w1, LeafTag::unstable});
      legs.push_back({w1, z2, LeafTag::stable});
    }
    return legs;
  }

  const auto& d = s();
  const auto& a = std::get<SymbolPoint>(x);
  const auto& c = std::get<SymbolPoint>(z);
  // Leaf membership reads eventual tail agreement, not exact word equality.
  // A doubly asymptotic target (finite deviation, both tails matching the
  // anchor) must still honor the requested route order, otherwise the two
  // orders collapse to the same leg and two-route comparisons at homoclinic
  // points become vacuous.
  auto agree = [](const SymbolPoint& u, const SymbolPoint& v, bool future) {
    const Word& ut = future ? u.future_tail() : u.past_tail();
    const Word& vt = future ? v.future_tail() : v.past_tail();
    const long L = static_cast<long>(
        std::max(future ? u.future_core().size() : u.past_core().size(),
                 future ? v.future_core().size() : v.past_core().size()));
    const long P = std::lcm(static_cast<long>(ut.size()), static_cast<long>(vt.size()));
    for (long j = L; j < L + P; ++j) {
      const long i = future ? j : -1 - j;
      if (u.symbol(i) != v.symbol(i)) return false;
    }
    return true;
  };
  const bool fwd_asym = agree(a, c, true);
  const bool bwd_asym = agree(a, c, false);
  if (stable_first && fwd_asym) return {{x, z, LeafTag::stable}};
  if (!stable_first && bwd_asym) return {{x, z, LeafTag::unstable}};
  if (fwd_asym || bwd_asym) {
    // One-sided asymptotic target with the opposite order requested: loop
    // through the periodic closure of the matching tail so the path still
    // starts on the requested leaf.
    SymbolPoint y;
    if (bwd_asym) {
      const Word& ft = c.future_tail();
      const long p = static_cast<long>(ft.size());
      const long zf = static_cast<long>(c.future_core().size());
      Word w(static_cast<std::size_t>(p));
      for (long i = 0; i < p; ++i)
        w[static_cast<std::size_t>(i)] = ft[static_cast<std::size_t>(((i - zf) % p + p) % p)];
      y = validated(SymbolPoint::periodic(w));
    } else {
      const Word& pt = c.past_tail();
      const long q = static_cast<long>(pt.size());
      const long zp = static_cast<long>(c.past_core().size());
      Word w(static_cast<std::size_t>(q));
      for (long i = 0; i < q; ++i)
        w[static_cast<std::size_t>(i)] = pt[static_cast<std::size_t>(((-1 - i - zp) % q + q) % q)];
      y = validated(SymbolPoint::periodic(w));
    }
    if (!(y == c)) {
      auto loop = su_path(x, y, stable_first);
      loop.push_back({y, z, bwd_asym ? LeafTag::stable : LeafTag::unstable});
      return loop;
    }
  }
  const std::size_t cap = static_cast<std::size_t>(d.nsym) * d.nsym + d.nsym + 2;
  SymbolPoint w1;
  if (stable_first) {
    // w1 copies x from index 0 on and z below index -J-1, connector between
    ReachTable back;
    back.init(d.nsym, a.symbol(0), d.pred);
    long J = -1;
    for (std::size_t j = 0; j <= cap; ++j) {
      if (back.level(j + 1)[c.symbol(-1 - static_cast<long>(j))]) {
        J = static_cast<long>(j);
        break;
      }
    }
    if (J < 0) throw NoPath("no admissible connector into the target past");
    Word path(static_cast<std::size_t>(J) + 1);
    path[0] = c.symbol(-1 - J);
    for (long k = 1; k <= J; ++k) {
      const auto& lvl = back.level(static_cast<std::size_t>(J + 1 - k));
      int pick = -1;
      for (int cand : d.succ[path[static_cast<std::size_t>(k - 1)]])
        if (lvl[cand]) {
          pick = cand;
          break;
        }
      path[static_cast<std::size_t>(k)] = pick;
    }
    std::size_t zc = c.past_core().size(), pt = c.past_tail().size();
    std::size_t D = std::max(zc, static_cast<std::size_t>(J));
    Word core(D);
    for (std::size_t j = 0; j < D; ++j) {
      if (j < static_cast<std::size_t>(J))
        core[j] = path[static_cast<std::size_t>(J) - j];  // index -1-j
      else
        core[j] = j < zc ? c.past_core()[j] : c.past_tail()[(j - zc) % pt];
    }
    Word tail = rotate_left(c.past_tail(), (D + pt - (zc % pt)) % pt);
    w1 = SymbolPoint(core, tail, a.future_core(), a.future_tail());
  } else {
    // w1 copies x below index 0 and z from index J on, connector between
    ReachTable fwd;
    fwd.init(d.nsym, a.symbol(-1), d.succ);
    long J = -1;
    for (std::size_t j = 0; j <= cap; ++j) {
      if (fwd.level(j + 1)[c.symbol(static_cast<long>(j))]) {
        J = static_cast<long>(j);
        break;
      }
    }
    if (J < 0) throw NoPath("no admissible connector into the target future");
    Word path(static_cast<std::size_t>(J) + 1);
    path[static_cast<std::size_t>(J)] = c.symbol(J);
    for (long k = J - 1; k >= 0; --k) {
      const auto& lvl = fwd.level(static_cast<std::size_t>(k + 1));
      int pick = -1;
      for (int u = 0; u < d.nsym; ++u)
        if (lvl[u] && d.T[u][path[static_cast<std::size_t>(k + 1)]]) {
          pick = u;
          break;
        }
      path[static_cast<std::size_t>(k)] = pick;
    }
    std::size_t zf = c.future_core().size(), ft = c.future_tail().size();
    std::size_t D = std::max(zf, static_cast<std::size_t>(J));
    Word core(D);
    for (std::size_t j = 0; j < D; ++j) {
      if (j < static_cast<std::size_t>(J))
        core[j] = path[j];
      else
        core[j] = j < zf ? c.future_core()[j] : c.future_tail()[(j - zf) % ft];
    }
    Word tail = rotate_left(c.future_tail(), (D + ft - (zf % ft)) % ft);
    w1 = SymbolPoint(a.past_core(), a.past_tail(), core, tail);
  }
  validated(w1);
  LeafTag first = stable_first ? LeafTag::stable : LeafTag::unstable;
  LeafTag second = stable_first ? LeafTag::unstable : LeafTag::stable;
  if (w1 == a) return {{x, z, second}};
  if (w1 == c) return {{x, z, first}};
  legs.push_back({x, w1, first});
  legs.push_back({w1, z, second});
  return legs;
}

std::vector<BasePoint> BaseSystem::periodic_points(int n, long long budget) const {
  if (n < 1) throw ConfigInvalid("period must be positive");
  long L = static_cast<long>(n) * step_;
  std::vector<BasePoint> out;
  if (toral_) {
    const auto& d = t();
    Mat2i P = power_guarded(d.A, L);
    Mat2i M{P.a - 1, P.b, P.c, P.d - 1};
    long long det = M.det();
    long long N = det >= 0 ? det : -det;
    if (N == 0) throw ConfigInvalid("degenerate period equation");
    if (N > budget)
      throw BudgetExceeded("fixed point count " + std::to_string(N) +
                           " exceeds budget " + std::to_string(budget));
    long long k1lo = std::min({0LL, M.a, M.b, M.a + M.b});
    long long k1hi = std::max({0LL, M.a, M.b, M.a + M.b});
    long long k2lo = std::min({0LL, M.c, M.d, M.c + M.d});
    long long k2hi = std::max({0LL, M.c, M.d, M.c + M.d});
    if ((k1hi - k1lo + 1) * (k2hi - k2lo + 1) > 20000000LL)
      throw BudgetExceeded("period lattice scan too large");
    std::vector<std::pair<Rational, Rational>> pts;
    for (long long k1 = k1lo; k1 <= k1hi; ++k1)
      for (long long k2 = k2lo; k2 <= k2hi; ++k2) {
        // cpp_rational rejects negative denominators in the two-arg form;
        // division normalizes the sign instead.
        Rational px = Rational(M.d * k1 - M.b * k2) / det;
        Rational py = Rational(-M.c * k1 + M.a * k2) / det;
        if (px >= 0 && px < 1 && py >= 0 && py < 1) pts.emplace_back(px, py);
      }
    std::sort(pts.begin(), pts.end());
    for (auto& [px, py] : pts) out.push_back(point_from_rationals(px, py));
    return out;
  }
  const auto& d = s();
  // closed walk count = trace of the L-th power of the transition matrix
  {
    std::vector<std::vector<long long>> Pm(d.nsym, std::vector<long long>(d.nsym, 0));
    for (int i = 0; i < d.nsym; ++i)
      for (int j = 0; j < d.nsym; ++j) Pm[i][j] = d.T[i][j];
    std::vector<std::vector<long long>> Acc(d.nsym, std::vector<long long>(d.nsym, 0));
    for (int i = 0; i < d.nsym; ++i) Acc[i][i] = 1;
    for (long l = 0; l < L; ++l) {
      std::vector<std::vector<long long>> Nx(d.nsym, std::vector<long long>(d.nsym, 0));
      for (int i = 0; i < d.nsym; ++i)
        for (int k = 0; k < d.nsym; ++k)
          if (Acc[i][k])
            for (int j = 0; j < d.nsym; ++j) {
              Nx[i][j] += Acc[i][k] * Pm[k][j];
              if (Nx[i][j] > (1LL << 50))
                throw BudgetExceeded("periodic point count overflows budget");
            }
      Acc = std::move(Nx);
    }
    long long trace = 0;
    for (int i = 0; i < d.nsym; ++i) trace += Acc[i][i];
    if (trace > budget)
      throw BudgetExceeded("fixed point count " + std::to_string(trace) +
                           " exceeds budget " + std::to_string(budget));
  }
  Word w(static_cast<std::size_t>(L), 0);
  // depth-first enumeration of admissible closed words in lexicographic order
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == w.size()) {
      if (d.T[w.back()][w.front()]) out.push_back(SymbolPoint::periodic(w));
      return;
    }
    for (int sym = 0; sym < d.nsym; ++sym) {
      if (pos > 0 && !d.T[w[pos - 1]][sym]) continue;
      w[pos] = sym;
      rec(pos + 1);
    }
  };
  rec(0);
  return out;
}

ClosingReport BaseSystem::closing(const BasePoint& z, int n) const {
  if (n < 1) throw ConfigInvalid("closing period must be positive");
  long L = static_cast<long>(n) * step_;
  ClosingReport rep;
  if (toral_) {
    const auto& d = t();
    const auto& zin = std::get<TorusPoint>(z);
    TorusPoint zr = zin.is_rational() ? zin : point_from_views(zin.view.x, zin.view.y);
    BasePoint zb = zr;
    BasePoint fz = apply(zb, n);
    rep.input_gap = dist(fz, zb);
    if (rep.input_gap >= consts_.epsilon0)
      throw NotCloseEnough("orbit gap " + std::to_string(rep.input_gap) +
                           " is not below " + std::to_string(consts_.epsilon0));
    const auto& fzp = std::get<TorusPoint>(fz);
    auto minimal = [](const Rational& r) {
      Rational f = frac_rational(r);
      return f - rat_round_nearest(f);
    };
    Rational vx = minimal(zr.p.x - fzp.p.x);
    Rational vy = minimal(zr.p.y - fzp.p.y);
    Mat2i P = power_guarded(d.A, L);
    Mat2i M{P.a - 1, P.b, P.c, P.d - 1};
    Rational det(M.det());
    Rational dx = (Rational(M.d) * vx - Rational(M.b) * vy) / det;
    Rational dy = (Rational(-M.c) * vx + Rational(M.a) * vy) / det;
    TorusPoint p = point_from_rationals(zr.p.x + dx, zr.p.y + dy);
    BasePoint pb = p;
    if (!rat_eq(std::get<TorusPoint>(apply(pb, n)).p, p.p))
      throw std::logic_error("periodic orbit solve failed");
    rep.p = pb;
    BasePoint zc = zb, pc = pb;
    for (int j = 0; j <= n; ++j) {
      rep.orbit_dist.push_back(dist(zc, pc));
      rep.allowed.push_back(consts_.C5 *
                            std::pow(consts_.theta, static_cast<double>(std::min(j, n - j))) *
                            rep.input_gap);
      if (j < n) {
        zc = apply(zc, 1);
        pc = apply(pc, 1);
      }
    }
  } else {
    const auto& zp = std::get<SymbolPoint>(z);
    BasePoint fz = apply(z, n);
    rep.input_gap = dist(fz, z);
    if (rep.input_gap >= consts_.epsilon0)
      throw NotCloseEnough("orbit gap " + std::to_string(rep.input_gap) +
                           " is not below " + std::to_string(consts_.epsilon0));
    Word w(static_cast<std::size_t>(L));
    for (long i = 0; i < L; ++i) w[static_cast<std::size_t>(i)] = zp.symbol(i);
    if (!transition_allowed(w.back(), w.front()))
      throw InadmissibleSplice("closing word cannot be repeated");
    SymbolPoint p = SymbolPoint::periodic(w);
    rep.p = p;
    BasePoint zc = z, pc = rep.p;
    for (int j = 0; j <= n; ++j) {
      rep.orbit_dist.push_back(dist(zc, pc));
      rep.allowed.push_back(consts_.C5 *
                            std::pow(consts_.theta, static_cast<double>(std::min(j, n - j))) *
                            rep.input_gap);
      if (j < n) {
        zc = apply(zc, 1);
        pc = apply(pc, 1);
      }
    }
  }
  rep.max_ratio = 0.0;
  for (std::size_t j = 0; j < rep.orbit_dist.size(); ++j) {
    double od = rep.orbit_dist[j], al = rep.allowed[j];
    if (al > 0.0) {
      rep.max_ratio = std::max(rep.max_ratio, od / al);
      if (od > al * (1.0 + 1e-9) + 1e-15)
        throw ShadowingBoundViolated("orbit distance " + std::to_string(od) +
                                     " exceeds bound " + std::to_string(al) +
                                     " at step " + std::to_string(j));
    } else if (od > 1e-15) {
      throw ShadowingBoundViolated("nonzero orbit distance with zero gap");
    }
  }
  return rep;
}

std::vector<std::pair<BasePoint, BasePoint>> BaseSystem::homoclinic_points(
    const BasePoint& x0, int count) const {
  std::vector<std::pair<BasePoint, BasePoint>> out;
  if (count <= 0) return out;
  if (toral_) {
    const auto& a = std::get<TorusPoint>(x0);
    if (!a.is_rational() ||
        !rat_eq(std::get<TorusPoint>(apply(x0, 1)).p, a.p))
      throw ConfigInvalid("homoclinic anchor must be a rational fixed point");
    for (long long R = 1; static_cast<int>(out.size()) < count && R <= 64; ++R) {
      for (long long k1 = -R; k1 <= R && static_cast<int>(out.size()) < count; ++k1)
        for (long long k2 = -R; k2 <= R && static_cast<int>(out.size()) < count; ++k2) {
          if (std::max(std::llabs(k1), std::llabs(k2)) != R) continue;
          auto [cs, cu] = decompose({static_cast<double>(k1), static_cast<double>(k2)});
          TorusPoint srep = leaf_point(a, cs, 0.0);
          TorusPoint urep = leaf_point(a, 0.0, -cu);
          out.emplace_back(srep, urep);
        }
    }
    return out;
  }
  const auto& d = s();
  const auto& a = std::get<SymbolPoint>(x0);
  if (!a.past_core().empty() || !a.future_core().empty() || !(a.shifted(step_) == a))
    throw ConfigInvalid("homoclinic anchor must be a periodic point of the system step");
  const Word& ft = a.future_tail();
  std::size_t p = ft.size();
  for (std::size_t len = 1; static_cast<int>(out.size()) < count && len <= 40; ++len) {
    Word c(len, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (static_cast<int>(out.size()) >= count) return;
      if (pos == len) {
        if (!d.T[c.back()][a.symbol(static_cast<long>(len))]) return;
        if (c.back() == a.symbol(static_cast<long>(len) - 1)) return;
        SymbolPoint w(a.past_core(), a.past_tail(), c, rotate_left(ft, len % p));
        out.emplace_back(w, w);
        return;
      }
      int prev = pos == 0 ? a.symbol(-1) : c[pos - 1];
      for (int sym = 0; sym < d.nsym; ++sym) {
        if (!d.T[prev][sym]) continue;
        if (pos == 0 && sym == a.symbol(0)) continue;
        c[pos] = sym;
        rec(pos + 1);
      }
    };
    rec(0);
  }
  return out;
}

}  // namespace holocycle
