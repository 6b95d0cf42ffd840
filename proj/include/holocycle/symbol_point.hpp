#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace holocycle {

using Word = std::vector<int>;

/// Eventually periodic bi-infinite symbol sequence.
///
/// future = future_core then future_tail repeated, indices 0,1,2,...
/// past   = past_core then past_tail repeated, reading outward from the
/// origin (past_core[0] sits at index -1).  Canonical form: tails are
/// primitive and no tail period is left absorbed in a core, so equality is
/// plain member comparison.
class SymbolPoint {
 public:
  SymbolPoint() = default;
  SymbolPoint(Word past_core, Word past_tail, Word future_core, Word future_tail);

  /// Periodic point (w repeated both ways, w[0] at the origin).
  static SymbolPoint periodic(const Word& w);
  /// Convenience: past/future words given left to right around the origin,
  /// i.e. spliced(p, f) has p's last symbol at index -1 and f[0] at index 0,
  /// with tails filled in from the given tail words (also left to right).
  static SymbolPoint spliced(const Word& past_tail_ltr, const Word& past_core_ltr,
                             const Word& future_core, const Word& future_tail);

  int symbol(long i) const;
  SymbolPoint shifted(long n) const;

  bool operator==(const SymbolPoint& o) const;
  /// Smallest |i| with symbols differing; -1 if the points are equal.
  long first_disagreement(const SymbolPoint& o) const;

  const Word& past_core() const { return past_core_; }
  const Word& past_tail() const { return past_tail_; }
  const Word& future_core() const { return future_core_; }
  const Word& future_tail() const { return future_tail_; }

  int max_symbol() const;
  std::string to_string() const;  // "(tail)core.core(tail)" around the origin

 private:
  void canonicalize();
  Word past_core_, past_tail_;    // outward from index -1
  Word future_core_, future_tail_;
};

Word primitive_root(const Word& w);

}  // namespace holocycle
