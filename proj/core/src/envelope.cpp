#include "spectra/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spectra/errors.hpp"

namespace spectra {
namespace {

// Running truncated sums S_1..S_L; entry i is S_{i+1}.
std::vector<double> running_sums(const Word& w, const CenterCocycle& c, std::size_t L) {
  std::vector<double> out(L, 0.0);
  const std::size_t d = static_cast<std::size_t>(c.depth());
  const std::size_t k = static_cast<std::size_t>(c.alphabet_size());
  std::size_t mod = 1;
  for (std::size_t i = 0; i < d; ++i) mod *= k;
  std::size_t code = 0;
  double s = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    code = (code * k + w[i]) % mod;
    if (i + 1 >= d) {
      const double v = c.value_by_code(code);
      if (std::isnan(v)) throw InadmissibleWord(i + 1 - d, "window ending at " + std::to_string(i) + " is inadmissible");
      s += v;
    }
    out[i] = s;
  }
  return out;
}

struct Scan {
  std::vector<EnvelopeLevel> levels;
  double worst_ratio = 0.0;
  std::size_t worst_sample = 0;
  std::uint64_t worst_n = 0;
};

void scan_word(const FamilyTower& tower, const CenterCocycle& c, const Word& w, std::size_t index, Scan& scan) {
  const Schedule& s = tower.schedule();
  const std::size_t K = s.depth();
  const std::uint64_t L = std::min<std::uint64_t>(w.size(), s.t(K));
  if (K < 2 || L <= s.t(2)) return;
  const auto sums = running_sums(w, c, static_cast<std::size_t>(L));
  for (std::size_t k0 = 1; k0 < K; ++k0) {
    EnvelopeLevel& lev = scan.levels[k0 - 1];
    const std::uint64_t start = s.t(k0 + 1);
    for (std::uint64_t n = start + 1; n <= L; ++n) {
      const double ratio = std::abs(sums[static_cast<std::size_t>(n - 1)]) / static_cast<double>(n) / lev.bound;
      ++lev.positions;
      if (ratio > lev.max_ratio) {
        lev.max_ratio = ratio;
        lev.worst_sample = index;
        lev.worst_n = n;
      }
      if (ratio > scan.worst_ratio) {
        scan.worst_ratio = ratio;
        scan.worst_sample = index;
        scan.worst_n = n;
      }
    }
  }
}

Scan start_scan(const FamilyTower& tower) {
  Scan scan;
  const Schedule& s = tower.schedule();
  for (std::size_t k0 = 1; k0 < s.depth(); ++k0) {
    EnvelopeLevel lev;
    lev.k0 = k0;
    lev.bound = std::abs(s.level(k0).chi) + 6.0 * s.level(k0).eps;
    scan.levels.push_back(lev);
  }
  return scan;
}

Segment find_culprit(const FamilyTower& tower, const CenterCocycle& c, const Word& w, std::uint64_t n) {
  const auto sums = running_sums(w, c, static_cast<std::size_t>(n));
  auto S = [&](std::uint64_t len) { return len == 0 ? 0.0 : sums[static_cast<std::size_t>(len - 1)]; };
  Segment best;
  double worst = -1.0;
  for (const Segment& seg : tower.layout()) {
    if (seg.start >= n) break;
    const std::uint64_t end = std::min(seg.start + seg.length, n);
    const double target = tower.schedule().level(seg.level).chi * static_cast<double>(end - seg.start);
    const double dev = std::abs(S(end) - S(seg.start) - target);
    if (dev > worst) {
      worst = dev;
      best = seg;
    }
  }
  return best;
}

EnvelopeReport finish(const FamilyTower& tower, const CenterCocycle& c, Scan& scan, std::size_t samples,
                      const std::function<Word(std::size_t)>& word_of) {
  EnvelopeReport r;
  r.samples = samples;
  r.levels = scan.levels;
  r.max_ratio = scan.worst_ratio;
  r.pass = scan.worst_ratio <= 1.0;
  std::ostringstream os;
  os << "max ratio " << r.max_ratio << " over " << samples << " samples";
  if (!r.pass) {
    r.culprit = find_culprit(tower, c, word_of(scan.worst_sample), scan.worst_n);
    os << "; worst at sample " << scan.worst_sample << ", n=" << scan.worst_n << ", driven by the level-"
       << r.culprit->level << " " << to_string(r.culprit->kind) << " at [" << r.culprit->start << ", "
       << r.culprit->start + r.culprit->length << ")";
  }
  r.detail = os.str();
  return r;
}

}  // namespace

EnvelopeReport exponent_envelope_check(const FamilyTower& tower, const CenterCocycle& c,
                                       const std::vector<Word>& sample) {
  Scan scan = start_scan(tower);
  for (std::size_t i = 0; i < sample.size(); ++i) scan_word(tower, c, sample[i], i, scan);
  return finish(tower, c, scan, sample.size(), [&](std::size_t i) { return sample[i]; });
}

EnvelopeReport exponent_envelope_check(const FamilyTower& tower, const CenterCocycle& c, std::size_t count) {
  Scan scan = start_scan(tower);
  const std::size_t n = std::min(count, tower.member_count());
  for (std::size_t i = 0; i < n; ++i) scan_word(tower, c, tower.member(i), i, scan);
  return finish(tower, c, scan, n, [&](std::size_t i) { return tower.member(i); });
}

CenterCocycle reversed_cocycle(const CenterCocycle& c) {
  SymbolicSystem rev = c.system().reversed();
  const std::size_t d = static_cast<std::size_t>(c.depth());
  const std::size_t k = static_cast<std::size_t>(c.alphabet_size());
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= k;
  std::vector<double> values;
  std::vector<Symbol> digits(d);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t x = code;
    for (std::size_t i = d; i-- > 0;) {
      digits[i] = static_cast<Symbol>(x % k);
      x /= k;
    }
    std::vector<Symbol> forward(digits.rbegin(), digits.rend());
    std::size_t fcode = 0;
    for (Symbol s : forward) fcode = fcode * k + s;
    if (c.defined(fcode)) values.push_back(c.value_by_code(fcode));
  }
  return CenterCocycle(std::move(rev), c.depth(), std::move(values));
}

Schedule backward_schedule(const CenterCocycle& c, const std::vector<double>& eps, const SpectrumCurve& spectrum,
                           ScheduleOptions options) {
  options.sign = Restriction::kPositive;
  return build_schedule(reversed_cocycle(c), eps, spectrum, options);
}

BackwardExtension extend_backward(const CenterCocycle& c, const Word& forward_word, const Schedule& sched_back,
                                  const TowerOptions& options, std::size_t member) {
  if (sched_back.sign != Restriction::kPositive)
    throw InvalidArgument("the backward schedule must target positive exponents");
  const CenterCocycle rev = reversed_cocycle(c);
  FamilyTower tower(rev, sched_back, schedule_skeletons(rev, sched_back), options);
  const Word v = tower.member(member);

  BackwardExtension out;
  out.report = exponent_envelope_check(tower, rev, std::vector<Word>{v});
  if (forward_word.size() == 0) {
    out.backward = v;
  } else {
    // Left to right: reversed(v), bridge, forward word.
    const std::size_t gap = c.system().bridge_length();
    const Word link = gap == 0 ? Word{} : c.system().bridge(v.front(), forward_word.front());
    if (gap == 0 && !c.system().allowed(v.front(), forward_word.front()))
      throw InvalidArgument("forward word cannot follow the backward part");
    out.backward = link.reversed();
    out.backward.append(v);
  }
  c.system().require_admissible(out.backward.reversed());
  out.two_sided = out.backward.reversed();
  out.origin = out.two_sided.size();
  out.two_sided.append(forward_word);
  c.system().require_admissible(out.two_sided);
  return out;
}

}  // namespace spectra
