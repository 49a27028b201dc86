#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noisyq/rng.hpp"

namespace noisyq {

/// numerator / 2^exponent, kept exact.
struct DyadicRational {
  std::uint64_t numerator = 0;
  int exponent = 0;

  double value() const noexcept;
  friend bool operator==(const DyadicRational& a, const DyadicRational& b) noexcept;
};

/// Explicit Boolean function on at most 20 labelled variables.
///
/// Input x (an integer in [0, 2^arity)) sets the variable at position j to
/// bit j of x; f(x) lives at bit (x mod 64) of word x / 64. Labels name the
/// original coordinates so restrictions keep track of which variables remain.
class TruthTable {
 public:
  static constexpr int kMaxArity = 20;

  /// Labels default to 0..arity-1. Bits beyond 2^arity in the last word are
  /// cleared.
  TruthTable(int arity, std::vector<std::uint64_t> words, std::vector<int> labels = {});

  template <class F>
  static TruthTable from_function(int arity, F&& f) {
    std::vector<std::uint64_t> words(word_count(arity), 0);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << arity); ++x) {
      if (f(x)) words[x >> 6] |= 1ULL << (x & 63);
    }
    return TruthTable(arity, std::move(words));
  }

  static TruthTable parity(int arity);
  static TruthTable dictator(int arity, int position);
  static TruthTable disjunction(int arity);
  static TruthTable constant(int arity, bool value);
  /// Every entry i.i.d. Ber(1/2).
  static TruthTable random(int arity, Rng& rng);

  static std::size_t word_count(int arity);

  int arity() const noexcept { return arity_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool operator()(std::uint64_t x) const { return (words_[x >> 6] >> (x & 63)) & 1ULL; }

  /// Position of a coordinate label; throws InvalidArgument if absent.
  int position_of(int label) const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  int arity_;
  std::vector<std::uint64_t> words_;
  std::vector<int> labels_;
};

enum class Assignment : std::uint8_t { zero, one, free };

/// Fixes every position whose assignment is zero/one; the result ranges
/// over the free positions in their original order.
TruthTable restrict(const TruthTable& f, std::span<const Assignment> assignment);

/// P_{x uniform}(f(x) != f(x xor e_i)) as flip-pairs over 2^(arity-1).
DyadicRational influence(const TruthTable& f, int label);
/// Sum of influences, over the common denominator 2^(arity-1).
DyadicRational total_influence(const TruthTable& f);

/// P_{x ~ Ber(q)^arity}(f(x) != f(x xor e_i)).
double q_biased_influence(const TruthTable& f, int label, double q);
double q_biased_total_influence(const TruthTable& f, double q);

/// |q I_q(f|x_i=1) + (1-q) I_q(f|x_i=0) - (I_q(f) - Inf_{q,i}(f))|.
double restriction_identity_residual(const TruthTable& f, int label, double q);

/// "n=<arity>" header then hex digits; digit j holds f(4j + b) at bit b.
std::string to_hex(const TruthTable& f);
/// Inverse of to_hex. Without a header, the arity is inferred from the digit
/// count (a single digit means arity 2).
TruthTable parse_hex(std::string_view text);

}  // namespace noisyq
