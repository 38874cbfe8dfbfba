#include "ssig/metrics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <vector>

namespace ssig {

double EditWeights::max_weight() const {
  return std::max({deletion, insertion, substitution});
}

void EditWeights::validate() const {
  if (!(deletion >= 0.0) || !(insertion >= 0.0) || !(substitution >= 0.0)) {
    throw_invalid("edit weights must be nonnegative");
  }
}

double jaccard_distance(SymbolSpan x, SymbolSpan y) {
  std::array<std::uint64_t, 4> mx{}, my{};
  for (unsigned char s : x) mx[s >> 6] |= std::uint64_t{1} << (s & 63);
  for (unsigned char s : y) my[s >> 6] |= std::uint64_t{1} << (s & 63);
  int inter = 0;
  int uni = 0;
  for (int i = 0; i < 4; ++i) {
    inter += std::popcount(mx[i] & my[i]);
    uni += std::popcount(mx[i] | my[i]);
  }
  if (uni == 0) return 0.0;
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

double histogram_distance(SymbolSpan x, SymbolSpan y) {
  if (x.empty() && y.empty()) return 0.0;
  thread_local std::uint32_t count_x[256];
  thread_local std::uint32_t count_y[256];
  thread_local std::vector<unsigned char> touched;
  touched.clear();
  for (unsigned char s : x) {
    if (count_x[s] == 0 && count_y[s] == 0) touched.push_back(s);
    ++count_x[s];
  }
  for (unsigned char s : y) {
    if (count_x[s] == 0 && count_y[s] == 0) touched.push_back(s);
    ++count_y[s];
  }
  // summing in symbol order keeps the result exactly symmetric in x and y
  std::sort(touched.begin(), touched.end());
  double similarity_sum = 0.0;
  for (unsigned char s : touched) {
    const double lo = static_cast<double>(std::min(count_x[s], count_y[s]));
    const double hi = static_cast<double>(std::max(count_x[s], count_y[s]));
    similarity_sum += lo / hi;  // a class absent from one side contributes 0
    count_x[s] = 0;
    count_y[s] = 0;
  }
  return 1.0 - similarity_sum / static_cast<double>(touched.size());
}

namespace {

// Two-row DP over the paper's recurrence: free diagonal move on a symbol
// match, otherwise min of delete / insert / substitute.
double edit_distance_general(SymbolSpan x, SymbolSpan y, const EditWeights& w) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  thread_local std::vector<double> prev_v, cur_v;
  prev_v.resize(n + 1);
  cur_v.resize(n + 1);
  double* prev = prev_v.data();
  double* cur = cur_v.data();
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) prev[j] = prev[j - 1] + w.insertion;
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = prev[0] + w.deletion;
    const unsigned char yi = y[i - 1];
    for (std::size_t j = 1; j <= n; ++j) {
      if (x[j - 1] == yi) {
        cur[j] = prev[j - 1];
      } else {
        cur[j] = std::min({prev[j] + w.deletion, cur[j - 1] + w.insertion,
                           prev[j - 1] + w.substitution});
      }
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

int edit_distance_unit(SymbolSpan x, SymbolSpan y) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);
  thread_local std::vector<int> prev_v, cur_v;
  prev_v.resize(n + 1);
  cur_v.resize(n + 1);
  int* prev = prev_v.data();
  int* cur = cur_v.data();
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<int>(i);
    const unsigned char yi = y[i - 1];
    for (std::size_t j = 1; j <= n; ++j) {
      if (x[j - 1] == yi) {
        cur[j] = prev[j - 1];
      } else {
        cur[j] = 1 + std::min({prev[j], cur[j - 1], prev[j - 1]});
      }
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace

double normalize_edit_distance(double distance, std::size_t len_x,
                               std::size_t len_y, const EditWeights& w) {
  const std::size_t longest = std::max(len_x, len_y);
  if (longest == 0) return 0.0;
  return distance / (static_cast<double>(longest) * w.max_weight());
}

double edit_distance(SymbolSpan x, SymbolSpan y, const EditWeights& w) {
  w.validate();
  if (w.unit()) return static_cast<double>(edit_distance_unit(x, y));
  return edit_distance_general(x, y, w);
}

double edit_distance_normalized(SymbolSpan x, SymbolSpan y,
                                const EditWeights& w) {
  return normalize_edit_distance(edit_distance(x, y, w), x.size(), y.size(), w);
}

UnitEditScanner::UnitEditScanner(SymbolSpan query) : length_(query.size()) {
  if (length_ <= 64) {
    for (std::size_t j = 0; j < length_; ++j) {
      mask_[query[j]] |= std::uint64_t{1} << j;
    }
  } else {
    fallback_.assign(query.begin(), query.end());
  }
}

int UnitEditScanner::distance(SymbolSpan record) const {
  if (length_ == 0) return static_cast<int>(record.size());
  if (length_ > 64) {
    return edit_distance_unit(SymbolSpan{fallback_}, record);
  }
  // Bit-parallel recurrence over vertical delta vectors; `score` tracks the
  // last DP row's final cell, i.e. the global distance.
  std::uint64_t pv = ~std::uint64_t{0};
  std::uint64_t mv = 0;
  int score = static_cast<int>(length_);
  const std::uint64_t high = std::uint64_t{1} << (length_ - 1);
  for (unsigned char c : record) {
    const std::uint64_t eq = mask_[c];
    const std::uint64_t xv = eq | mv;
    const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
    std::uint64_t ph = mv | ~(xh | pv);
    std::uint64_t mh = pv & xh;
    if (ph & high) {
      ++score;
    } else if (mh & high) {
      --score;
    }
    ph = (ph << 1) | 1;
    mh <<= 1;
    pv = mh | ~(xv | ph);
    mv = ph & xv;
  }
  return score;
}

double jaccard_distance(std::string_view x, std::string_view y) {
  return jaccard_distance(as_symbols(x), as_symbols(y));
}

double histogram_distance(std::string_view x, std::string_view y) {
  return histogram_distance(as_symbols(x), as_symbols(y));
}

double edit_distance(std::string_view x, std::string_view y,
                     const EditWeights& w) {
  return edit_distance(as_symbols(x), as_symbols(y), w);
}

double edit_distance_normalized(std::string_view x, std::string_view y,
                                const EditWeights& w) {
  return edit_distance_normalized(as_symbols(x), as_symbols(y), w);
}

namespace {

void require_bins_below(const Signature& s, std::uint32_t q) {
  for (std::uint8_t bin : s.angle_bins) {
    if (bin >= q) {
      throw_invalid("angle bin " + std::to_string(bin) +
                    " incompatible with quantization level count " +
                    std::to_string(q));
    }
  }
}

}  // namespace

double part_distance(MetricKind kind, const Signature& a, const Signature& b,
                     SignaturePart part, const EditWeights& w,
                     std::uint32_t quantization_levels) {
  SymbolSpan xs, ys;
  if (part == SignaturePart::type) {
    xs = type_part(a);
    ys = type_part(b);
  } else {
    require_bins_below(a, quantization_levels);
    require_bins_below(b, quantization_levels);
    xs = angle_part(a);
    ys = angle_part(b);
  }
  switch (kind) {
    case MetricKind::jaccard:
      return jaccard_distance(xs, ys);
    case MetricKind::histogram:
      return histogram_distance(xs, ys);
    case MetricKind::edit:
      return edit_distance_normalized(xs, ys, w);
  }
  throw_invalid("unknown metric kind");
}

const char* metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::jaccard:
      return "jaccard";
    case MetricKind::histogram:
      return "histogram";
    case MetricKind::edit:
      return "edit";
  }
  return "unknown";
}

}  // namespace ssig
