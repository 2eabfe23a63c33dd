#include "spectra/entropy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "spectra/enumerate.hpp"
#include "spectra/errors.hpp"
#include "spectra/tower.hpp"

namespace spectra {
namespace {

std::size_t parse_size(std::string_view s, std::string_view whole) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw InvalidArgument("bad n range '" + std::string(whole) + "', expected a:b");
  return v;
}

void require_range(const PrefixCounter& counts, NRange range, Resolution res, std::size_t min_points) {
  if (range.last < range.first || range.size() < min_points)
    throw InvalidArgument("n range " + std::to_string(range.first) + ":" + std::to_string(range.last) +
                          " needs at least " + std::to_string(min_points) + " points");
  if (res.depth_j < 0) throw InvalidArgument("resolution depth must be non-negative");
  if (!std::isfinite(counts.log_count(0))) throw EmptyDomain("cannot estimate the entropy of an empty set");
  if (res.cylinder_depth(range.last) > counts.max_depth())
    throw InvalidArgument("n range reaches depth " + std::to_string(res.cylinder_depth(range.last)) +
                          " but the words only have " + std::to_string(counts.max_depth()) + " symbols");
}

std::vector<double> method_curve(const PrefixCounter& counts, NRange range, Resolution res, EntropyMethod m,
                                 std::vector<double>& xs) {
  std::vector<double> ys;
  ys.reserve(range.size());
  xs.reserve(range.size());
  for (std::size_t n = range.first; n <= range.last; ++n) {
    const double y = log_method_count(counts, n, res, m);
    if (!std::isfinite(y)) throw EmptyDomain("cannot estimate the entropy of an empty set");
    xs.push_back(static_cast<double>(n));
    ys.push_back(y);
  }
  return ys;
}

}  // namespace

NRange parse_n_range(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("bad n range '" + std::string(text) + "', expected a:b");
  NRange r{parse_size(text.substr(0, colon), text), parse_size(text.substr(colon + 1), text)};
  if (r.last < r.first) throw InvalidArgument("n range '" + std::string(text) + "' is decreasing");
  return r;
}

// --- word sets --------------------------------------------------------------

WordSetCounter::WordSetCounter(std::vector<Word> words) : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  if (words_.empty()) {
    count_ = {0};
    return;
  }
  std::size_t shortest = words_.front().size();
  for (const auto& w : words_) shortest = std::min(shortest, w.size());
  max_depth_ = shortest;
  // A word may be a proper prefix of another; those are one class up to its length.
  std::vector<std::size_t> breaks(shortest + 2, 0);
  for (std::size_t i = 0; i + 1 < words_.size(); ++i) {
    const auto& a = words_[i];
    const auto& b = words_[i + 1];
    std::size_t l = 0;
    const std::size_t lim = std::min(a.size(), b.size());
    while (l < lim && a[l] == b[l]) ++l;
    if (l < shortest) ++breaks[l + 1];
  }
  count_.assign(shortest + 1, 1);
  std::size_t running = 1;
  for (std::size_t d = 1; d <= shortest; ++d) {
    running += breaks[d];
    count_[d] = running;
  }
}

std::size_t WordSetCounter::count(std::uint64_t depth) const {
  if (depth > max_depth_) throw InvalidArgument("depth exceeds the shortest word");
  return count_[static_cast<std::size_t>(depth)];
}

double WordSetCounter::log_count(std::uint64_t depth) const {
  const std::size_t c = count(depth);
  return c == 0 ? -std::numeric_limits<double>::infinity() : std::log(static_cast<double>(c));
}

// --- shifts -----------------------------------------------------------------

ShiftCounter::ShiftCounter(SymbolicSystem system) : system_(std::move(system)) {}

BigInt ShiftCounter::count(std::uint64_t depth) const {
  if (depth == 0) return 1;
  return count_admissible(system_, static_cast<std::size_t>(depth));
}

double ShiftCounter::log_count(std::uint64_t depth) const {
  if (system_.is_full_shift()) return static_cast<double>(depth) * std::log(static_cast<double>(system_.alphabet_size()));
  return log_big(count(depth));
}

// --- towers -----------------------------------------------------------------

TowerCounter::TowerCounter(const FamilyTower& tower) : tower_(&tower) {
  const std::size_t K = tower.depth();
  length_ = tower.word_length(K);
  log_card_E_.push_back(0.0);
  for (std::size_t k = 1; k <= K; ++k) {
    log_card_E_.push_back(log_big(tower.card_E(k)));
    const auto& dag = tower.skeleton(k).words;
    log_card_S_.push_back(log_big(dag.count()));
    std::vector<double> d(dag.length() + 1);
    for (std::size_t r = 0; r <= dag.length(); ++r) d[r] = log_big(dag.distinct_prefixes(r));
    log_distinct_.push_back(std::move(d));
  }
}

double TowerCounter::log_count(std::uint64_t depth) const {
  if (depth > length_) throw InvalidArgument("depth exceeds the tower word length");
  if (depth == 0) return 0.0;
  const Segment& seg = tower_->segment_at(depth - 1);
  const std::size_t k = seg.level;
  const double before = log_card_E_[k - 1];
  switch (seg.kind) {
    case Segment::Kind::kBlock: {
      const std::uint64_t r = depth - seg.start;
      return before + static_cast<double>(seg.index) * log_card_S_[k - 1] + log_distinct_[k - 1][r];
    }
    case Segment::Kind::kGap:
      return before + static_cast<double>(seg.index + 1) * log_card_S_[k - 1];
    case Segment::Kind::kBridge:
      return log_card_E_[k];
  }
  return before;
}

// --- estimators ---------------------------------------------------------------

const char* to_string(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::kSeparated: return "separated";
    case EntropyMethod::kSpanning: return "spanning";
    case EntropyMethod::kCoverCost: return "cover_cost";
  }
  return "?";
}

std::optional<EntropyMethod> parse_entropy_method(std::string_view text) {
  if (text == "separated") return EntropyMethod::kSeparated;
  if (text == "spanning") return EntropyMethod::kSpanning;
  if (text == "cover_cost") return EntropyMethod::kCoverCost;
  return std::nullopt;
}

double log_method_count(const PrefixCounter& counts, std::size_t n, Resolution res, EntropyMethod method) {
  std::uint64_t depth = res.cylinder_depth(n);
  if (method == EntropyMethod::kSpanning && depth > 0) --depth;
  return counts.log_count(depth);
}

double log_cover_cost(const PrefixCounter& counts, std::size_t n, Resolution res, double h) {
  return counts.log_count(res.cylinder_depth(n)) - static_cast<double>(n) * h;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("a line fit needs at least two points");
  const double nx = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= nx;
  my /= nx;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("a line fit needs two distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / nx);
  return f;
}

EntropyEstimate estimate_entropy(const PrefixCounter& counts, NRange range, Resolution res, EntropyMethod method) {
  require_range(counts, range, res, 2);
  std::vector<double> xs;
  const auto ys = method_curve(counts, range, res, method, xs);
  const LineFit fit = fit_line(xs, ys);
  EntropyEstimate e;
  e.range = range;
  e.res = res;
  e.method = method;
  e.residual = fit.residual;
  if (method == EntropyMethod::kCoverCost) {
    double h = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < xs.size(); ++i) h = std::max(h, (ys[i] - ys[0]) / (xs[i] - xs[0]));
    e.rate = h;
  } else {
    e.rate = fit.slope;
  }
  return e;
}

EntropyEstimate estimate_entropy(const std::vector<Word>& words, NRange range, Resolution res,
                                 EntropyMethod method) {
  return estimate_entropy(WordSetCounter(words), range, res, method);
}

CapacitiveEntropies capacitive_entropies(const PrefixCounter& counts, NRange range, Resolution res,
                                         std::size_t window) {
  require_range(counts, range, res, 2);
  if (window == 0) window = std::max<std::size_t>(2, range.size() / 4);
  if (window < 2 || window > range.size())
    throw InvalidArgument("window of " + std::to_string(window) + " points does not fit the n range");
  std::vector<double> xs;
  const auto ys = method_curve(counts, range, res, EntropyMethod::kSeparated, xs);
  CapacitiveEntropies c;
  c.window = window;
  c.lower = std::numeric_limits<double>::infinity();
  c.upper = -std::numeric_limits<double>::infinity();
  // Window starts are spread evenly, at most kMaxWindows + 1 of them.
  constexpr std::size_t kMaxWindows = 512;
  const std::size_t span = xs.size() - window;
  const std::size_t stride = std::max<std::size_t>(1, span / kMaxWindows);
  for (std::size_t i = 0; i <= span; i = (i < span && i + stride > span) ? span : i + stride) {
    const std::vector<double> wx(xs.begin() + static_cast<std::ptrdiff_t>(i),
                                 xs.begin() + static_cast<std::ptrdiff_t>(i + window));
    const std::vector<double> wy(ys.begin() + static_cast<std::ptrdiff_t>(i),
                                 ys.begin() + static_cast<std::ptrdiff_t>(i + window));
    const double s = fit_line(wx, wy).slope;
    c.lower = std::min(c.lower, s);
    c.upper = std::max(c.upper, s);
    if (i == span) break;
  }
  return c;
}

CapacitiveEntropies capacitive_entropies(const std::vector<Word>& words, NRange range, Resolution res,
                                         std::size_t window) {
  return capacitive_entropies(WordSetCounter(words), range, res, window);
}

std::vector<Word> read_words(std::string_view text) {
  std::vector<Word> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') {
      try {
        out.push_back(Word::parse(line));
      } catch (const InvalidArgument& e) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

}  // namespace spectra
