#include "ssig/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <unordered_set>

namespace ssig {

Alphabet::Alphabet(std::vector<ObjectClass> classes)
    : classes_(std::move(classes)) {
  if (classes_.empty()) throw_invalid("alphabet must not be empty");
  std::fill(std::begin(by_symbol_), std::end(by_symbol_), std::int16_t{-1});
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto idx = static_cast<unsigned char>(classes_[i].symbol);
    if (by_symbol_[idx] >= 0) {
      throw_invalid(std::string("duplicate alphabet symbol '") +
                    classes_[i].symbol + "'");
    }
    by_symbol_[idx] = static_cast<std::int16_t>(i);
  }
}

const ObjectClass* Alphabet::find(char symbol) const {
  const auto idx = by_symbol_[static_cast<unsigned char>(symbol)];
  return idx < 0 ? nullptr : &classes_[static_cast<std::size_t>(idx)];
}

const ObjectClass* Alphabet::find_by_name_ci(std::string_view name) const {
  auto eq_ci = [](std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
             return std::tolower(static_cast<unsigned char>(x)) ==
                    std::tolower(static_cast<unsigned char>(y));
           });
  };
  for (const auto& c : classes_) {
    if (eq_ci(c.name, name)) return &c;
  }
  return nullptr;
}

namespace {

const std::array<std::uint64_t, 11> kDefaultCounts = {
    1752696, 6713, 2299639, 36333, 102240, 14397,
    8006,    4421, 2537,    135748, 32320};

Alphabet make_default_alphabet() {
  return Alphabet({{'B', "Alignment tree", 1},
                   {'C', "Water fountain", 2},
                   {'D', "Street light", 3},
                   {'E', "Indicator", 4},
                   {'G', "Traffic light", 5},
                   {'H', "Bike station", 6},
                   {'I', "Automatic WC", 7},
                   {'J', "Autolib (car) station", 8},
                   {'K', "Taxi station", 9},
                   {'L', "Public chair", 10},
                   {'M', "Bus stop", 11}});
}

}  // namespace

const Alphabet& alphabet_default() {
  static const Alphabet alphabet = make_default_alphabet();
  return alphabet;
}

std::span<const std::uint64_t> default_class_counts() {
  return kDefaultCounts;
}

std::string signature_to_string(const Signature& sig) {
  std::string out = sig.types;
  out += '|';
  for (std::size_t i = 0; i < sig.angle_bins.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(static_cast<unsigned>(sig.angle_bins[i]));
  }
  return out;
}

Signature signature_from_string(std::string_view text) {
  const std::size_t bar = text.find('|');
  if (bar == std::string_view::npos) {
    throw ParseError(text.size(), "signature text is missing the '|' separator");
  }
  if (text.find('|', bar + 1) != std::string_view::npos) {
    throw ParseError(text.find('|', bar + 1), "signature text has more than one '|'");
  }
  Signature sig;
  for (std::size_t i = 0; i < bar; ++i) {
    const char c = text[i];
    if (c == ';' || std::isspace(static_cast<unsigned char>(c)) ||
        !std::isprint(static_cast<unsigned char>(c))) {
      throw ParseError(i, std::string("invalid class symbol '") + c + "'");
    }
    sig.types += c;
  }
  std::size_t pos = bar + 1;
  while (pos < text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    if (end == pos) throw ParseError(pos, "empty angle bin");
    unsigned value = 0;
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
      throw ParseError(pos, "angle bin is not a nonnegative integer");
    }
    if (value > 255) throw ParseError(pos, "angle bin out of range (max 255)");
    sig.angle_bins.push_back(static_cast<std::uint8_t>(value));
    pos = end + 1;
    if (pos == text.size() && text.back() == ';') {
      throw ParseError(text.size() - 1, "trailing ';' in angle part");
    }
  }
  if (sig.types.size() != sig.angle_bins.size()) {
    throw ParseError(bar, "type part and angle part have different lengths");
  }
  return sig;
}

void BuildParams::validate() const {
  if (!(visibility_range_m > 0.0)) {
    throw_invalid("visibility range must be positive");
  }
  if (!(grid_step_m > 0.0)) throw_invalid("grid step must be positive");
  if (quantization_levels < 2 || quantization_levels > 256) {
    throw_invalid("quantization levels must be in [2, 256]");
  }
}

SignatureDatabase::SignatureDatabase(std::vector<DatabaseRecord> records,
                                     BuildParams params,
                                     GeoPoint projection_origin,
                                     Alphabet alphabet)
    : records_(std::move(records)),
      params_(params),
      projection_origin_(projection_origin),
      alphabet_(std::move(alphabet)) {
  params_.validate();
  std::unordered_set<std::uint64_t> ids;
  ids.reserve(records_.size());
  for (const auto& r : records_) {
    if (!ids.insert(r.cell_id).second) {
      throw_invalid("duplicate cell_id " + std::to_string(r.cell_id));
    }
  }
}

std::size_t SignatureDatabase::index_of(std::uint64_t cell_id) const {
  // Built databases carry sequential ids, so try the direct slot first.
  if (cell_id < records_.size() && records_[cell_id].cell_id == cell_id) {
    return static_cast<std::size_t>(cell_id);
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].cell_id == cell_id) return i;
  }
  throw Error(ErrorCode::not_found,
              "cell_id " + std::to_string(cell_id) + " not in database");
}

}  // namespace ssig
