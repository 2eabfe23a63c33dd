#include "spectra/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectra/errors.hpp"
#include "spectra/parallel.hpp"
#include "spectra/tower.hpp"

namespace spectra {
namespace {

// Relative slack added to every log-mass before comparison.
constexpr double kOutward = 1e-12;

double round_up(double log_mass) { return log_mass + kOutward * (1.0 + std::abs(log_mass)); }

Word join_word(const SymbolicSystem& sys, Symbol a, Symbol b, std::size_t length) {
  if (length == sys.bridge_length()) return sys.bridge(a, b);
  return sys.connect(a, b, length);
}

bool prefix_less(const Word& w, std::span<const Symbol> p) {
  const std::size_t n = std::min(w.size(), p.size());
  for (std::size_t i = 0; i < n; ++i)
    if (w[i] != p[i]) return w[i] < p[i];
  return w.size() < p.size();
}

bool prefix_greater(std::span<const Symbol> p, const Word& w) {
  const std::size_t n = std::min(w.size(), p.size());
  for (std::size_t i = 0; i < n; ++i)
    if (w[i] != p[i]) return p[i] < w[i];
  return false;
}

template <class LogMax>
AuditReport run_audit(LogMax&& log_max, double theta, NRange range, Resolution res, double h_target) {
  AuditReport r;
  r.h_target = h_target;
  r.theta = theta;
  r.range = range;
  r.res = res;
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
  if (range.first == 0 || range.last < range.first) throw InvalidArgument("n range must be non-empty and start at 1 or later");
  if (theta >= h_target) {
    r.pass = true;
    r.vacuous = true;
    r.n0 = range.first;
    r.detail = "theta >= h_target: the bound exp(-n(h - theta)) >= 1 holds trivially";
    return r;
  }
  const double rate = h_target - theta;
  constexpr std::size_t kChunks = 64;
  const std::size_t total = range.size();
  const std::size_t chunk = (total + kChunks - 1) / kChunks;
  const std::size_t chunks = (total + chunk - 1) / chunk;
  auto margins = parallel_map(chunks, [&](std::size_t c) {
    std::vector<double> out;
    const std::size_t lo = range.first + c * chunk;
    const std::size_t hi = std::min(range.last, lo + chunk - 1);
    out.reserve(hi - lo + 1);
    for (std::size_t n = lo; n <= hi; ++n)
      out.push_back(-log_max(res.cylinder_depth(n)) / static_cast<double>(n) - rate);
    return out;
  });
  r.worst_margin = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> last_fail;
  std::size_t n = range.first;
  for (const auto& part : margins)
    for (double m : part) {
      if (m < r.worst_margin) {
        r.worst_margin = m;
        r.worst_n = n;
      }
      if (m < 0.0) {
        ++r.failures;
        last_fail = n;
      }
      ++n;
    }
  if (!last_fail) r.n0 = range.first;
  else if (*last_fail < range.last) r.n0 = *last_fail + 1;
  if (r.n0) {
    r.tail_margin = std::numeric_limits<double>::infinity();
    n = range.first;
    for (const auto& part : margins)
      for (double m : part) {
        if (n >= *r.n0) r.tail_margin = std::min(r.tail_margin, m);
        ++n;
      }
  }
  const std::size_t tail = r.n0 ? range.last - *r.n0 + 1 : 0;
  r.pass = r.n0.has_value() && 2 * tail >= total;
  std::ostringstream d;
  d.precision(6);
  if (r.pass)
    d << "mass <= exp(-n(" << rate << ")) for every n in [" << *r.n0 << ", " << range.last << "]";
  else if (r.n0)
    d << "passing tail [" << *r.n0 << ", " << range.last << "] covers less than half of the range";
  else
    d << "mass bound fails at n = " << range.last << " (margin " << r.worst_margin << " at n = " << r.worst_n << ")";
  r.detail = d.str();
  return r;
}

EdpCertificate certify(AuditReport audit, const PrefixCounter& counts) {
  EdpCertificate c;
  c.audit = std::move(audit);
  c.certified = c.audit.pass;
  NRange est = c.audit.range;
  if (c.audit.pass && c.audit.n0 && c.audit.range.last > *c.audit.n0) est.first = *c.audit.n0;
  c.direct = estimate_entropy(counts, est, c.audit.res, EntropyMethod::kSeparated);
  std::ostringstream s;
  s.precision(10);
  if (c.certified) {
    c.lower_bound = c.audit.h_target - c.audit.theta;
    c.consistent = *c.lower_bound <= c.direct.rate + 2.0 * c.direct.residual;
    s << "h_top(support, 2^-" << c.audit.res.depth_j << ") >= " << *c.lower_bound;
  } else {
    c.consistent = true;
    s << "no certificate: " << c.audit.detail;
  }
  c.statement = s.str();
  return c;
}

}  // namespace

// --- explicit measures --------------------------------------------------------

CylinderMeasure::CylinderMeasure(std::vector<Word> support, std::size_t level)
    : support_(std::move(support)), level_(level) {
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
  length_ = support_.empty() ? 0 : support_.front().size();
  for (const auto& w : support_) length_ = std::min(length_, w.size());
}

CylinderMeasure CylinderMeasure::from_tower(const FamilyTower& tower, std::size_t k) {
  if (!tower.is_explicit()) throw InvalidArgument("level measures need an explicitly enumerated tower");
  if (k == 0 || k > tower.depth()) throw InvalidArgument("level out of range");
  const auto len = static_cast<std::size_t>(tower.word_length(k));
  std::vector<Word> words;
  words.reserve(tower.member_count());
  for (std::size_t i = 0; i < tower.member_count(); ++i) words.push_back(tower.member(i).prefix(len));
  return CylinderMeasure(std::move(words), k);
}

BigRational CylinderMeasure::mass(std::span<const Symbol> prefix) const {
  if (support_.empty()) throw EmptyDomain("measure has empty support");
  const auto lo = std::lower_bound(support_.begin(), support_.end(), prefix, prefix_less);
  const auto hi = std::upper_bound(lo, support_.end(), prefix, prefix_greater);
  return BigRational(static_cast<long long>(hi - lo), static_cast<long long>(support_.size()));
}

std::size_t CylinderMeasure::max_cylinder_count(std::size_t depth) const {
  if (depth > length_) throw InvalidArgument("cylinder depth exceeds the stored word length");
  std::size_t best = 0, run = 0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const bool same = i > 0 && std::equal(support_[i].symbols().begin(),
                                          support_[i].symbols().begin() + static_cast<std::ptrdiff_t>(depth),
                                          support_[i - 1].symbols().begin());
    run = same ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

BigRational ball_mass(const CylinderMeasure& m, const Word& w, std::size_t n, Resolution res) {
  if (m.empty()) throw EmptyDomain("measure has empty support");
  const std::size_t depth = res.cylinder_depth(n);
  if (depth > m.length())
    throw InvalidArgument("ball depth " + std::to_string(depth) + " exceeds the stored word length " +
                          std::to_string(m.length()));
  if (depth > w.size()) throw InvalidArgument("centre word is shorter than the ball depth");
  return m.mass(w.symbols().first(depth));
}

// --- tower measure ------------------------------------------------------------

TowerMeasure::TowerMeasure(const FamilyTower& tower) : tower_(&tower) {
  const std::size_t K = tower.depth();
  length_ = tower.word_length(K);
  log_card_E_.push_back(0.0);
  for (std::size_t k = 1; k <= K; ++k) {
    log_card_E_.push_back(log_big(tower.card_E(k)));
    const auto& dag = tower.skeleton(k).words;
    log_card_S_.push_back(log_big(dag.count()));
    std::vector<double> v(dag.length() + 1);
    for (std::size_t r = 0; r <= dag.length(); ++r) v[r] = log_big(dag.max_completions(r));
    log_max_completions_.push_back(std::move(v));
  }
}

double TowerMeasure::log_max_mass(std::uint64_t depth) const {
  if (depth > length_) throw InvalidArgument("depth exceeds the tower word length");
  if (depth == 0) return 0.0;
  const Segment& seg = tower_->segment_at(depth - 1);
  const std::size_t k = seg.level;
  const double before = -log_card_E_[k - 1];
  double v = before;
  switch (seg.kind) {
    case Segment::Kind::kBlock:
      v = before - static_cast<double>(seg.index + 1) * log_card_S_[k - 1] +
          log_max_completions_[k - 1][depth - seg.start];
      break;
    case Segment::Kind::kGap:
      v = before - static_cast<double>(seg.index + 1) * log_card_S_[k - 1];
      break;
    case Segment::Kind::kBridge:
      v = -log_card_E_[k];
      break;
  }
  return std::min(0.0, round_up(v));
}

BigRational TowerMeasure::mass(const Word& w, std::uint64_t depth) const {
  if (depth > length_) throw InvalidArgument("depth exceeds the tower word length");
  if (depth > w.size()) throw InvalidArgument("word is shorter than the cylinder depth");
  const auto& sys = tower_->system();
  const auto& layout = tower_->layout();
  BigInt num = 1, den = 1;
  for (std::size_t s = 0; s < layout.size(); ++s) {
    const Segment& seg = layout[s];
    if (seg.start >= depth) break;
    const auto take = static_cast<std::size_t>(std::min<std::uint64_t>(seg.length, depth - seg.start));
    const auto start = static_cast<std::size_t>(seg.start);
    const auto piece = w.symbols().subspan(start, take);
    if (seg.kind == Segment::Kind::kBlock) {
      const auto& dag = tower_->skeleton(seg.level).words;
      const BigInt c = dag.completions_of_prefix(piece);
      if (c == 0) return 0;
      num *= c;
      den *= dag.count();
      continue;
    }
    const Symbol a = w[start - 1];
    const bool trailing = seg.kind == Segment::Kind::kGap && seg.index + 1 == tower_->schedule().level(seg.level).N;
    if (trailing) {
      const Word cont = sys.continuation(a, static_cast<std::size_t>(seg.length));
      if (!std::equal(piece.begin(), piece.end(), cont.symbols().begin())) return 0;
      continue;
    }
    const std::uint64_t next = seg.start + seg.length;
    if (next < depth) {
      const Word j = join_word(sys, a, w[static_cast<std::size_t>(next)], static_cast<std::size_t>(seg.length));
      if (!std::equal(piece.begin(), piece.end(), j.symbols().begin())) return 0;
      continue;
    }
    // The joined block has not started: only its first symbols are constrained.
    const std::size_t next_level = seg.kind == Segment::Kind::kBridge ? seg.level + 1 : seg.level;
    const auto& dag = tower_->skeleton(next_level).words;
    BigInt allowed = 0;
    for (int b = 0; b < sys.alphabet_size(); ++b) {
      const auto sb = static_cast<Symbol>(b);
      const Word j = join_word(sys, a, sb, static_cast<std::size_t>(seg.length));
      if (!sys.allowed(j.empty() ? a : j.back(), sb)) continue;
      if (std::equal(piece.begin(), piece.end(), j.symbols().begin()))
        allowed += dag.completions_of_prefix(std::span<const Symbol>(&sb, 1));
    }
    if (allowed == 0) return 0;
    num *= allowed;
    den *= dag.count();
    break;
  }
  return BigRational(num, den);
}

// --- audits -----------------------------------------------------------------

AuditReport local_entropy_audit(const TowerMeasure& m, double theta, NRange range, Resolution res,
                                double h_target) {
  if (res.cylinder_depth(range.last) > m.length())
    throw InvalidArgument("n range reaches past the tower word length");
  return run_audit([&](std::uint64_t depth) { return m.log_max_mass(depth); }, theta, range, res, h_target);
}

AuditReport local_entropy_audit(const CylinderMeasure& m, double theta, NRange range, Resolution res,
                                double h_target) {
  if (m.empty()) throw EmptyDomain("measure has empty support");
  if (res.cylinder_depth(range.last) > m.length())
    throw InvalidArgument("n range reaches past the stored word length");
  const double log_size = std::log(static_cast<double>(m.size()));
  return run_audit(
      [&](std::uint64_t depth) {
        const auto c = m.max_cylinder_count(static_cast<std::size_t>(depth));
        return std::min(0.0, round_up(std::log(static_cast<double>(c)) - log_size));
      },
      theta, range, res, h_target);
}

AuditReport local_entropy_audit(const FamilyTower& tower, double theta, std::optional<NRange> range, Resolution res,
                                std::optional<double> h_target) {
  const TowerMeasure m(tower);
  const std::uint64_t len = m.length();
  const auto j = static_cast<std::uint64_t>(std::max(0, res.depth_j));
  if (!range) {
    if (len <= j) throw InvalidArgument("tower words are too short for the resolution");
    range = NRange{1, static_cast<std::size_t>(len - j)};
  }
  return local_entropy_audit(m, theta, *range, res, h_target.value_or(tower.schedule().h_frak));
}

EdpCertificate edp_certificate(const CylinderMeasure& m, double theta, NRange range, Resolution res,
                               double h_target) {
  if (m.empty()) throw EmptyDomain("empty support: no measure to distribute");
  if (range.size() < 2) throw InvalidArgument("the certificate needs at least two values of n");
  auto audit = local_entropy_audit(m, theta, range, res, h_target);
  return certify(std::move(audit), WordSetCounter(m.support()));
}

EdpCertificate edp_certificate(const FamilyTower& tower, double theta, std::optional<NRange> range, Resolution res,
                               std::optional<double> h_target) {
  if (tower.card_E(tower.depth()) == 0) throw EmptyDomain("empty support: no measure to distribute");
  auto audit = local_entropy_audit(tower, theta, range, res, h_target);
  if (audit.range.size() < 2) throw InvalidArgument("the certificate needs at least two values of n");
  return certify(std::move(audit), TowerCounter(tower));
}

}  // namespace spectra
