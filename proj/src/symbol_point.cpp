#include "holocycle/symbol_point.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace holocycle {

namespace {

// absorb core symbols matching the incoming tail, rotating the tail with them
void absorb(Word& core, Word& tail) {
  if (tail.empty()) return;
  while (!core.empty() && core.back() == tail.back()) {
    core.pop_back();
    std::rotate(tail.rbegin(), tail.rbegin() + 1, tail.rend());  // last -> front
  }
}

}  // namespace

Word primitive_root(const Word& w) {
  const int n = static_cast<int>(w.size());
  for (int p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (int i = p; i < n && ok; ++i) ok = (w[i] == w[i - p]);
    if (ok) return Word(w.begin(), w.begin() + p);
  }
  return w;
}

SymbolPoint::SymbolPoint(Word past_core, Word past_tail, Word future_core, Word future_tail)
    : past_core_(std::move(past_core)),
      past_tail_(std::move(past_tail)),
      future_core_(std::move(future_core)),
      future_tail_(std::move(future_tail)) {
  if (past_tail_.empty() || future_tail_.empty())
    throw std::invalid_argument("SymbolPoint: tails must be nonempty");
  canonicalize();
}

void SymbolPoint::canonicalize() {
  past_tail_ = primitive_root(past_tail_);
  future_tail_ = primitive_root(future_tail_);
  absorb(past_core_, past_tail_);
  absorb(future_core_, future_tail_);
}

SymbolPoint SymbolPoint::periodic(const Word& w) {
  if (w.empty()) throw std::invalid_argument("SymbolPoint::periodic: empty word");
  Word past_rev(w.rbegin(), w.rend());  // index -1 holds w.back()
  return SymbolPoint({}, past_rev, {}, w);
}

SymbolPoint SymbolPoint::spliced(const Word& past_tail_ltr, const Word& past_core_ltr,
                                 const Word& future_core, const Word& future_tail) {
  Word pc(past_core_ltr.rbegin(), past_core_ltr.rend());
  Word pt(past_tail_ltr.rbegin(), past_tail_ltr.rend());
  return SymbolPoint(std::move(pc), std::move(pt), future_core, future_tail);
}

int SymbolPoint::symbol(long i) const {
  if (i >= 0) {
    const long c = static_cast<long>(future_core_.size());
    if (i < c) return future_core_[i];
    return future_tail_[(i - c) % static_cast<long>(future_tail_.size())];
  }
  long j = -i - 1;
  const long c = static_cast<long>(past_core_.size());
  if (j < c) return past_core_[j];
  return past_tail_[(j - c) % static_cast<long>(past_tail_.size())];
}

SymbolPoint SymbolPoint::shifted(long n) const {
  SymbolPoint p = *this;
  for (; n > 0; --n) {
    // drop symbol 0 from the future, prepend it to the past
    const int s0 = p.symbol(0);
    if (!p.future_core_.empty()) {
      p.future_core_.erase(p.future_core_.begin());
    } else {
      std::rotate(p.future_tail_.begin(), p.future_tail_.begin() + 1, p.future_tail_.end());
    }
    p.past_core_.insert(p.past_core_.begin(), s0);
    p.canonicalize();
  }
  for (; n < 0; ++n) {
    const int sm = p.symbol(-1);
    if (!p.past_core_.empty()) {
      p.past_core_.erase(p.past_core_.begin());
    } else {
      std::rotate(p.past_tail_.begin(), p.past_tail_.begin() + 1, p.past_tail_.end());
    }
    p.future_core_.insert(p.future_core_.begin(), sm);
    p.canonicalize();
  }
  return p;
}

bool SymbolPoint::operator==(const SymbolPoint& o) const {
  return past_core_ == o.past_core_ && past_tail_ == o.past_tail_ &&
         future_core_ == o.future_core_ && future_tail_ == o.future_tail_;
}

long SymbolPoint::first_disagreement(const SymbolPoint& o) const {
  const long cores = static_cast<long>(std::max({past_core_.size(), o.past_core_.size(),
                                                 future_core_.size(), o.future_core_.size()}));
  const long lcm_f = std::lcm<long>(future_tail_.size(), o.future_tail_.size());
  const long lcm_p = std::lcm<long>(past_tail_.size(), o.past_tail_.size());
  const long bound = cores + std::max(lcm_f, lcm_p) + 1;
  for (long i = 0; i <= bound; ++i) {
    if (symbol(i) != o.symbol(i)) return i;
    if (i > 0 && symbol(-i) != o.symbol(-i)) return i;
  }
  return -1;
}

int SymbolPoint::max_symbol() const {
  int m = 0;
  for (const Word* w : {&past_core_, &past_tail_, &future_core_, &future_tail_})
    for (int s : *w) m = std::max(m, s);
  return m;
}

std::string SymbolPoint::to_string() const {
  std::string s = "(";
  for (auto it = past_tail_.rbegin(); it != past_tail_.rend(); ++it) s += std::to_string(*it);
  s += ")";
  for (auto it = past_core_.rbegin(); it != past_core_.rend(); ++it) s += std::to_string(*it);
  s += ".";
  for (int v : future_core_) s += std::to_string(v);
  s += "(";
  for (int v : future_tail_) s += std::to_string(v);
  s += ")";
  return s;
}

}  // namespace holocycle
