#include "noisyq/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>

#include "noisyq/kernels.hpp"
#include "noisyq/noise.hpp"
#include "noisyq/stats.hpp"

namespace noisyq {
namespace {

std::uint64_t valid_mask(int arity) {
  return arity >= 6 ? ~0ULL : ((1ULL << (1U << arity)) - 1);
}

DyadicRational normalized(DyadicRational r) {
  if (r.numerator == 0) return {0, 0};
  while (r.exponent > 0 && (r.numerator & 1ULL) == 0) {
    r.numerator >>= 1;
    --r.exponent;
  }
  return r;
}

std::vector<std::uint64_t> flip_counts(const TruthTable& f, int position) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(f.arity()) + 1, 0);
  kernels::flip_histogram(f.words(), f.arity(), position, counts);
  return counts;
}

std::uint64_t flipping_inputs(const TruthTable& f, int position) {
  const auto counts = flip_counts(f, position);
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double weighted_flips(const TruthTable& f, int position, double q) {
  const auto counts = flip_counts(f, position);
  CompensatedSum sum;
  const int n = f.arity();
  for (int w = 0; w <= n; ++w) {
    const auto c = counts[static_cast<std::size_t>(w)];
    if (c == 0) continue;
    sum.add(static_cast<double>(c) * std::pow(q, w) * std::pow(1.0 - q, n - w));
  }
  return sum.value();
}

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("bias q must lie in [0, 1]");
}

}  // namespace

double DyadicRational::value() const noexcept { return std::ldexp(static_cast<double>(numerator), -exponent); }

bool operator==(const DyadicRational& a, const DyadicRational& b) noexcept {
  const DyadicRational x = normalized(a);
  const DyadicRational y = normalized(b);
  return x.numerator == y.numerator && x.exponent == y.exponent;
}

std::size_t TruthTable::word_count(int arity) {
  if (arity < 0 || arity > kMaxArity) {
    throw InvalidArgument("truth table arity must lie in [0, " + std::to_string(kMaxArity) + "], got " +
                          std::to_string(arity));
  }
  return arity >= 6 ? (std::size_t{1} << (arity - 6)) : 1;
}

TruthTable::TruthTable(int arity, std::vector<std::uint64_t> words, std::vector<int> labels)
    : arity_(arity), words_(std::move(words)), labels_(std::move(labels)) {
  if (words_.size() != word_count(arity)) throw InvalidArgument("truth table word count does not match arity");
  words_.back() &= valid_mask(arity);
  if (labels_.empty() && arity > 0) {
    labels_.resize(static_cast<std::size_t>(arity));
    std::iota(labels_.begin(), labels_.end(), 0);
  }
  if (labels_.size() != static_cast<std::size_t>(arity)) throw InvalidArgument("one label per variable required");
  auto sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("truth table labels must be distinct");
  }
}

TruthTable TruthTable::parity(int arity) {
  return from_function(arity, [](std::uint64_t x) { return std::popcount(x) % 2 == 1; });
}

TruthTable TruthTable::dictator(int arity, int position) {
  if (position < 0 || position >= arity) throw InvalidArgument("dictator position out of range");
  return from_function(arity, [position](std::uint64_t x) { return ((x >> position) & 1ULL) != 0; });
}

TruthTable TruthTable::disjunction(int arity) {
  return from_function(arity, [](std::uint64_t x) { return x != 0; });
}

TruthTable TruthTable::constant(int arity, bool value) {
  return TruthTable(arity, std::vector<std::uint64_t>(word_count(arity), value ? ~0ULL : 0ULL));
}

TruthTable TruthTable::random(int arity, Rng& rng) {
  std::vector<std::uint64_t> words(word_count(arity));
  for (auto& w : words) w = rng();
  return TruthTable(arity, std::move(words));
}

int TruthTable::position_of(int label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InvalidArgument("coordinate " + std::to_string(label) + " is not a variable of f");
  return static_cast<int>(it - labels_.begin());
}

TruthTable restrict(const TruthTable& f, std::span<const Assignment> assignment) {
  if (assignment.size() != static_cast<std::size_t>(f.arity())) {
    throw InvalidArgument("restriction must assign every position (use free for *)");
  }
  std::uint64_t fixed_bits = 0;
  std::vector<int> free_positions;
  std::vector<int> free_labels;
  for (int j = 0; j < f.arity(); ++j) {
    switch (assignment[static_cast<std::size_t>(j)]) {
      case Assignment::one:
        fixed_bits |= 1ULL << j;
        break;
      case Assignment::zero:
        break;
      case Assignment::free:
        free_positions.push_back(j);
        free_labels.push_back(f.labels()[static_cast<std::size_t>(j)]);
        break;
    }
  }
  const int m = static_cast<int>(free_positions.size());
  std::vector<std::uint64_t> words(TruthTable::word_count(m), 0);
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << m); ++y) {
    std::uint64_t x = fixed_bits;
    for (int b = 0; b < m; ++b) {
      if ((y >> b) & 1ULL) x |= 1ULL << free_positions[static_cast<std::size_t>(b)];
    }
    if (f(x)) words[y >> 6] |= 1ULL << (y & 63);
  }
  return TruthTable(m, std::move(words), std::move(free_labels));
}

DyadicRational influence(const TruthTable& f, int label) {
  const int position = f.position_of(label);
  // each flipping pair is counted from both ends
  return DyadicRational{flipping_inputs(f, position) / 2, f.arity() - 1};
}

DyadicRational total_influence(const TruthTable& f) {
  if (f.arity() == 0) return {};
  std::uint64_t pairs = 0;
  for (int j = 0; j < f.arity(); ++j) pairs += flipping_inputs(f, j) / 2;
  return DyadicRational{pairs, f.arity() - 1};
}

double q_biased_influence(const TruthTable& f, int label, double q) {
  check_q(q);
  return weighted_flips(f, f.position_of(label), q);
}

double q_biased_total_influence(const TruthTable& f, double q) {
  check_q(q);
  CompensatedSum sum;
  for (int j = 0; j < f.arity(); ++j) sum.add(weighted_flips(f, j, q));
  return sum.value();
}

double restriction_identity_residual(const TruthTable& f, int label, double q) {
  check_q(q);
  const int position = f.position_of(label);
  std::vector<Assignment> assignment(static_cast<std::size_t>(f.arity()), Assignment::free);
  assignment[static_cast<std::size_t>(position)] = Assignment::one;
  const double on_one = q_biased_total_influence(restrict(f, assignment), q);
  assignment[static_cast<std::size_t>(position)] = Assignment::zero;
  const double on_zero = q_biased_total_influence(restrict(f, assignment), q);
  const double lhs = q * on_one + (1.0 - q) * on_zero;
  const double rhs = q_biased_total_influence(f, q) - q_biased_influence(f, label, q);
  return std::abs(lhs - rhs);
}

std::string to_hex(const TruthTable& f) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "n=" + std::to_string(f.arity()) + "\n";
  const std::uint64_t inputs = std::uint64_t{1} << f.arity();
  const std::uint64_t digits = std::max<std::uint64_t>(1, inputs / 4);
  for (std::uint64_t d = 0; d < digits; ++d) {
    unsigned value = 0;
    for (unsigned b = 0; b < 4; ++b) {
      const std::uint64_t x = 4 * d + b;
      if (x < inputs && f(x)) value |= 1U << b;
    }
    out.push_back(kDigits[value]);
    if ((d + 1) % 64 == 0 || d + 1 == digits) out.push_back('\n');
  }
  return out;
}

TruthTable parse_hex(std::string_view text) {
  int arity = -1;
  std::string digits;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == 'n' && i + 1 < text.size() && text[i + 1] == '=') {
      std::size_t j = i + 2;
      std::string number;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) number.push_back(text[j++]);
      if (number.empty() || number.size() > 3) throw InvalidArgument("malformed arity header");
      arity = std::stoi(number);
      i = j;
    } else if (c == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
      i += 2;
    } else if (std::isxdigit(static_cast<unsigned char>(c))) {
      digits.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      ++i;
    } else {
      throw InvalidArgument(std::string("unexpected character in hex truth table: '") + c + "'");
    }
  }
  if (digits.empty()) throw InvalidArgument("hex truth table has no digits");
  if (arity < 0) {
    if (!std::has_single_bit(digits.size())) throw InvalidArgument("hex digit count must be a power of two");
    arity = digits.size() == 1 ? 2 : std::countr_zero(digits.size()) + 2;
  }
  TruthTable::word_count(arity);  // validates the arity
  const std::uint64_t inputs = std::uint64_t{1} << arity;
  const std::uint64_t expected_digits = std::max<std::uint64_t>(1, inputs / 4);
  if (digits.size() != expected_digits) {
    throw InvalidArgument("expected " + std::to_string(expected_digits) + " hex digits for arity " +
                          std::to_string(arity) + ", got " + std::to_string(digits.size()));
  }
  std::vector<std::uint64_t> words(TruthTable::word_count(arity), 0);
  for (std::size_t d = 0; d < digits.size(); ++d) {
    const char c = digits[d];
    const unsigned value = static_cast<unsigned>(c <= '9' ? c - '0' : c - 'a' + 10);
    for (unsigned b = 0; b < 4; ++b) {
      const std::uint64_t x = 4 * d + b;
      if (x >= inputs) {
        if ((value >> b) & 1U) throw InvalidArgument("hex truth table sets bits past 2^arity");
        continue;
      }
      if ((value >> b) & 1U) words[x >> 6] |= 1ULL << (x & 63);
    }
  }
  return TruthTable(arity, std::move(words));
}

}  // namespace noisyq
