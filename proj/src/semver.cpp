#include "depgraph/semver.hpp"

#include <algorithm>
#include <cctype>

namespace depgraph {

namespace {

constexpr std::size_t kMaxComponentDigits = 19;  // fits uint64

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c >= '0' && c <= '9';
  });
}

bool is_identifier_char(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c == '-';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::optional<std::uint64_t> parse_component(std::string_view s) {
  if (!is_digits(s) || s.size() > kMaxComponentDigits) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    std::uint64_t next = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (next < v) return std::nullopt;  // overflow
    v = next;
  }
  return v;
}

// Numeric identifiers compare numerically (leading zeros tolerated), and
// always below alphanumeric ones; alphanumerics compare in ASCII order.
int compare_prerelease_ids(const std::string& a, const std::string& b) {
  const bool an = is_digits(a);
  const bool bn = is_digits(b);
  if (an && bn) {
    std::string_view av(a), bv(b);
    while (av.size() > 1 && av.front() == '0') av.remove_prefix(1);
    while (bv.size() > 1 && bv.front() == '0') bv.remove_prefix(1);
    if (av.size() != bv.size()) return av.size() < bv.size() ? -1 : 1;
    return av.compare(bv) < 0 ? -1 : (av == bv ? 0 : 1);
  }
  if (an) return -1;
  if (bn) return 1;
  return a < b ? -1 : (a == b ? 0 : 1);
}

// Splits a dot-separated identifier list; every piece must be a non-empty
// run of [0-9A-Za-z-].
std::optional<std::vector<std::string>> parse_identifiers(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = s.find('.', start);
    std::string_view part = s.substr(start, dot == std::string_view::npos
                                                ? std::string_view::npos
                                                : dot - start);
    if (part.empty() ||
        !std::all_of(part.begin(), part.end(), is_identifier_char))
      return std::nullopt;
    out.emplace_back(part);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

}  // namespace

std::optional<Version> Version::parse(std::string_view text) {
  std::string_view s = trim(text);
  while (!s.empty() && (s.front() == 'v' || s.front() == '=')) s.remove_prefix(1);
  if (s.empty()) return std::nullopt;

  // Split off build metadata, then prerelease.
  std::string_view build_part;
  if (std::size_t plus = s.find('+'); plus != std::string_view::npos) {
    build_part = s.substr(plus + 1);
    s = s.substr(0, plus);
    if (build_part.empty() || !parse_identifiers(build_part)) return std::nullopt;
  }
  std::string_view pre_part;
  if (std::size_t dash = s.find('-'); dash != std::string_view::npos) {
    pre_part = s.substr(dash + 1);
    s = s.substr(0, dash);
    if (pre_part.empty()) return std::nullopt;
  }

  // Dotted core; missing minor/patch are filled with 0.
  std::uint64_t nums[3] = {0, 0, 0};
  std::size_t count = 0;
  std::size_t start = 0;
  while (count < 3) {
    std::size_t dot = s.find('.', start);
    std::string_view part = s.substr(start, dot == std::string_view::npos
                                                ? std::string_view::npos
                                                : dot - start);
    auto v = parse_component(part);
    if (!v) return std::nullopt;
    nums[count++] = *v;
    if (dot == std::string_view::npos) {
      start = s.size();
      break;
    }
    start = dot + 1;
  }
  if (start != s.size()) return std::nullopt;  // more than three components

  Version ver;
  ver.major = nums[0];
  ver.minor = nums[1];
  ver.patch = nums[2];
  if (!pre_part.empty()) {
    auto ids = parse_identifiers(pre_part);
    if (!ids) return std::nullopt;
    ver.prerelease = std::move(*ids);
  }
  ver.build = std::string(build_part);
  return ver;
}

int Version::compare(const Version& o) const {
  if (major != o.major) return major < o.major ? -1 : 1;
  if (minor != o.minor) return minor < o.minor ? -1 : 1;
  if (patch != o.patch) return patch < o.patch ? -1 : 1;
  // A prerelease sorts before the same core without one.
  if (prerelease.empty() && o.prerelease.empty()) return 0;
  if (prerelease.empty()) return 1;
  if (o.prerelease.empty()) return -1;
  std::size_t n = std::min(prerelease.size(), o.prerelease.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_prerelease_ids(prerelease[i], o.prerelease[i]);
    if (c != 0) return c;
  }
  if (prerelease.size() == o.prerelease.size()) return 0;
  return prerelease.size() < o.prerelease.size() ? -1 : 1;
}

std::string Version::str() const {
  std::string out = std::to_string(major);
  out += '.';
  out += std::to_string(minor);
  out += '.';
  out += std::to_string(patch);
  if (!prerelease.empty()) {
    out += '-';
    for (std::size_t i = 0; i < prerelease.size(); ++i) {
      if (i) out += '.';
      out += prerelease[i];
    }
  }
  return out;
}

int version_compare(const Version& a, const Version& b) { return a.compare(b); }

// ---------------------------------------------------------------------------
// Range parsing. The grammar mirrors npm's: each "||" alternative is either a
// hyphen range "A - B" or a space-separated list of simple comparators, each
// of which may carry ^ ~ > >= < <= = sugar over a partial version with x/*
// wildcards. Everything desugars to plain comparators at parse time.
// ---------------------------------------------------------------------------

namespace {

using Op = RangeConstraint::Op;
using Comparator = RangeConstraint::Comparator;
using AndSet = RangeConstraint::AndSet;

// A version pattern with possibly-missing components; a wildcard component
// and a missing one are equivalent, and wildcards cascade downward.
struct Partial {
  bool has_major = false;
  bool has_minor = false;
  bool has_patch = false;
  std::uint64_t major = 0;
  std::uint64_t minor = 0;
  std::uint64_t patch = 0;
  std::vector<std::string> prerelease;

  bool full() const { return has_major && has_minor && has_patch; }
  Version version() const {
    Version v;
    v.major = major;
    v.minor = minor;
    v.patch = patch;
    v.prerelease = prerelease;
    return v;
  }
};

bool is_wildcard(std::string_view s) {
  return s == "x" || s == "X" || s == "*";
}

// npm quirk: a numeric component after a wildcard ("x.1.2", ">=1.x.2")
// invalidates bare and comparator forms, while ~ ^ and hyphen-range sides
// tolerate it (the wildcard cascade swallows the rest).
std::optional<Partial> parse_partial(std::string_view s,
                                     bool reject_digits_after_wildcard = false) {
  while (!s.empty() && (s.front() == 'v' || s.front() == '=')) s.remove_prefix(1);
  if (s.empty()) return std::nullopt;

  std::string_view pre_part;
  if (std::size_t plus = s.find('+'); plus != std::string_view::npos) {
    std::string_view build = s.substr(plus + 1);
    if (build.empty() || !parse_identifiers(build)) return std::nullopt;
    s = s.substr(0, plus);  // build metadata never affects matching
  }
  // The '-' starting a prerelease must come after the dotted core; partials
  // like "1.2.3-alpha" carry it, "1.2-3" means prerelease "3" on core 1.2.0.
  if (std::size_t dash = s.find('-'); dash != std::string_view::npos) {
    pre_part = s.substr(dash + 1);
    s = s.substr(0, dash);
    if (pre_part.empty()) return std::nullopt;
  }

  Partial p;
  bool* flags[3] = {&p.has_major, &p.has_minor, &p.has_patch};
  std::uint64_t* nums[3] = {&p.major, &p.minor, &p.patch};
  std::size_t count = 0;
  std::size_t start = 0;
  bool saw_wildcard = false;
  while (count < 3) {
    std::size_t dot = s.find('.', start);
    std::string_view part = s.substr(start, dot == std::string_view::npos
                                                ? std::string_view::npos
                                                : dot - start);
    if (is_wildcard(part)) {
      saw_wildcard = true;
    } else if (auto v = parse_component(part); v && !saw_wildcard) {
      *flags[count] = true;
      *nums[count] = *v;
    } else if (v) {
      if (reject_digits_after_wildcard) return std::nullopt;
    } else {
      return std::nullopt;
    }
    ++count;
    if (dot == std::string_view::npos) {
      start = s.size();
      break;
    }
    start = dot + 1;
  }
  if (start != s.size()) return std::nullopt;

  if (!pre_part.empty()) {
    // A prerelease needs all three components written; on a wildcard patch
    // ("1.2.x-alpha") it is tolerated and ignored.
    if (count < 3) return std::nullopt;
    auto ids = parse_identifiers(pre_part);
    if (!ids) return std::nullopt;
    if (p.full()) p.prerelease = std::move(*ids);
  }
  return p;
}

Version make_version(std::uint64_t major, std::uint64_t minor,
                     std::uint64_t patch, bool zero_prerelease = false) {
  Version v;
  v.major = major;
  v.minor = minor;
  v.patch = patch;
  if (zero_prerelease) v.prerelease = {"0"};
  return v;
}

Comparator cmp(Op op, Version v) {
  Comparator c;
  c.op = op;
  c.ver = std::move(v);
  return c;
}

// The empty-range sentinel "<0.0.0-0": no version satisfies it.
Comparator null_set() { return cmp(Op::Lt, make_version(0, 0, 0, true)); }

// Result of desugaring one simple token: comparators to conjoin, or the
// universal match (no constraint at all).
struct Desugared {
  bool any = false;
  std::vector<Comparator> comps;
};

Desugared desugar_any() { return {true, {}}; }

Desugared desugar_bare(const Partial& p) {
  if (!p.has_major) return desugar_any();
  if (!p.has_minor)
    return {false,
            {cmp(Op::Ge, make_version(p.major, 0, 0)),
             cmp(Op::Lt, make_version(p.major + 1, 0, 0, true))}};
  if (!p.has_patch)
    return {false,
            {cmp(Op::Ge, make_version(p.major, p.minor, 0)),
             cmp(Op::Lt, make_version(p.major, p.minor + 1, 0, true))}};
  return {false, {cmp(Op::Eq, p.version())}};
}

Desugared desugar_tilde(const Partial& p) {
  if (!p.has_major) return desugar_any();
  if (!p.has_minor)
    return {false,
            {cmp(Op::Ge, make_version(p.major, 0, 0)),
             cmp(Op::Lt, make_version(p.major + 1, 0, 0, true))}};
  // ~1.2 and ~1.2.3 both cap below the next minor.
  Version lo = p.has_patch ? p.version() : make_version(p.major, p.minor, 0);
  return {false,
          {cmp(Op::Ge, std::move(lo)),
           cmp(Op::Lt, make_version(p.major, p.minor + 1, 0, true))}};
}

Desugared desugar_caret(const Partial& p) {
  if (!p.has_major) return desugar_any();
  if (!p.has_minor)
    return {false,
            {cmp(Op::Ge, make_version(p.major, 0, 0)),
             cmp(Op::Lt, make_version(p.major + 1, 0, 0, true))}};
  if (!p.has_patch) {
    Version hi = p.major == 0 ? make_version(0, p.minor + 1, 0, true)
                              : make_version(p.major + 1, 0, 0, true);
    return {false,
            {cmp(Op::Ge, make_version(p.major, p.minor, 0)),
             cmp(Op::Lt, std::move(hi))}};
  }
  Version hi;
  if (p.major > 0)
    hi = make_version(p.major + 1, 0, 0, true);
  else if (p.minor > 0)
    hi = make_version(0, p.minor + 1, 0, true);
  else
    hi = make_version(0, 0, p.patch + 1, true);
  return {false, {cmp(Op::Ge, p.version()), cmp(Op::Lt, std::move(hi))}};
}

Desugared desugar_op(std::string_view op, const Partial& p) {
  if (!p.has_major) {
    // ">*" and "<*" are unsatisfiable; ">=*" and "<=*" match anything.
    if (op == ">" || op == "<") return {false, {null_set()}};
    return desugar_any();
  }
  if (p.full()) {
    Op o = op == ">" ? Op::Gt : op == ">=" ? Op::Ge : op == "<" ? Op::Lt : Op::Le;
    return {false, {cmp(o, p.version())}};
  }
  // Partial operand: shift the bound to the implied edge of the gap.
  const bool xm = !p.has_minor;
  if (op == ">")
    return {false,
            {cmp(Op::Ge, xm ? make_version(p.major + 1, 0, 0)
                            : make_version(p.major, p.minor + 1, 0))}};
  if (op == ">=")
    return {false,
            {cmp(Op::Ge, make_version(p.major, xm ? 0 : p.minor, 0))}};
  if (op == "<=")
    return {false,
            {cmp(Op::Lt, xm ? make_version(p.major + 1, 0, 0, true)
                            : make_version(p.major, p.minor + 1, 0, true))}};
  return {false,
          {cmp(Op::Lt, make_version(p.major, xm ? 0 : p.minor, 0, true))}};
}

std::optional<AndSet> desugar_hyphen(const Partial& lo, const Partial& hi) {
  AndSet out;
  if (lo.has_major) {
    Version v = make_version(lo.major, lo.has_minor ? lo.minor : 0,
                             lo.full() ? lo.patch : 0);
    if (lo.full()) v.prerelease = lo.prerelease;
    out.push_back(cmp(Op::Ge, std::move(v)));
  }
  if (hi.has_major) {
    if (hi.full()) {
      Version v = hi.version();
      out.push_back(cmp(Op::Le, std::move(v)));
    } else if (hi.has_minor) {
      out.push_back(cmp(Op::Lt, make_version(hi.major, hi.minor + 1, 0, true)));
    } else {
      out.push_back(cmp(Op::Lt, make_version(hi.major + 1, 0, 0, true)));
    }
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_bare_op(const std::string& t) {
  return t == ">" || t == ">=" || t == "<" || t == "<=" || t == "=" ||
         t == "~" || t == "^" || t == "~>";
}

std::string comparator_str(const Comparator& c) {
  std::string out;
  switch (c.op) {
    case Op::Eq: break;
    case Op::Gt: out = ">"; break;
    case Op::Ge: out = ">="; break;
    case Op::Lt: out = "<"; break;
    case Op::Le: out = "<="; break;
  }
  return out + c.ver.str();
}

std::optional<AndSet> parse_alternative(std::string_view alt) {
  std::vector<std::string> tokens = split_ws(alt);
  if (tokens.empty()) return AndSet{};  // empty alternative matches anything

  // "> 1.2.3" tokenizes as two pieces; glue a lone operator to its operand.
  std::vector<std::string> merged;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_bare_op(tokens[i]) && i + 1 < tokens.size())
      merged.push_back(tokens[i] + tokens[i + 1]), ++i;
    else
      merged.push_back(tokens[i]);
  }

  // Hyphen range: exactly "<partial> - <partial>".
  if (merged.size() == 3 && merged[1] == "-") {
    auto lo = parse_partial(merged[0]);
    auto hi = parse_partial(merged[2]);
    if (!lo || !hi) return std::nullopt;
    return desugar_hyphen(*lo, *hi);
  }

  AndSet set;
  for (const std::string& tok : merged) {
    std::string_view t = tok;
    std::string_view op;
    for (std::string_view candidate :
         {">=", "<=", "~>", ">", "<", "=", "~", "^"}) {
      if (t.substr(0, candidate.size()) == candidate) {
        op = candidate;
        t.remove_prefix(candidate.size());
        break;
      }
    }
    const bool tolerant = op == "~" || op == "~>" || op == "^";
    auto partial = parse_partial(t, /*reject_digits_after_wildcard=*/!tolerant);
    if (!partial) return std::nullopt;

    Desugared d;
    if (op.empty() || op == "=")
      d = desugar_bare(*partial);
    else if (op == "~" || op == "~>")
      d = desugar_tilde(*partial);
    else if (op == "^")
      d = desugar_caret(*partial);
    else
      d = desugar_op(op, *partial);

    for (Comparator& c : d.comps) {
      bool dup = std::any_of(set.begin(), set.end(), [&](const Comparator& e) {
        return e == c;
      });
      if (!dup) set.push_back(std::move(c));
    }
  }
  return set;
}

}  // namespace

void RangeConstraint::finalize(std::string raw) {
  raw_ = std::move(raw);
  canonical_.clear();
  for (std::size_t i = 0; i < alternatives_.size(); ++i) {
    if (i) canonical_ += " || ";
    const AndSet& set = alternatives_[i];
    if (set.empty()) {
      canonical_ += "*";
      continue;
    }
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (j) canonical_ += ' ';
      canonical_ += comparator_str(set[j]);
    }
  }
}

std::optional<RangeConstraint> RangeConstraint::parse(std::string_view expression) {
  RangeConstraint r;
  std::string_view rest = expression;
  while (true) {
    std::size_t bar = rest.find("||");
    std::string_view alt =
        bar == std::string_view::npos ? rest : rest.substr(0, bar);
    auto set = parse_alternative(trim(alt));
    if (!set) return std::nullopt;
    r.alternatives_.push_back(std::move(*set));
    if (bar == std::string_view::npos) break;
    rest = rest.substr(bar + 2);
  }
  // npm: one universal alternative makes the whole range "*", which also
  // drops the other alternatives' prerelease anchors.
  for (const AndSet& set : r.alternatives_) {
    if (set.empty()) {
      r.alternatives_ = {AndSet{}};
      break;
    }
  }
  r.finalize(std::string(expression));
  return r;
}

RangeConstraint RangeConstraint::any(std::string raw) {
  RangeConstraint r;
  r.alternatives_.push_back(AndSet{});
  r.finalize(std::move(raw));
  return r;
}

RangeConstraint RangeConstraint::exactly(const Version& v) {
  RangeConstraint r;
  r.alternatives_.push_back(AndSet{cmp(Op::Eq, v)});
  r.finalize(v.str());
  return r;
}

bool RangeConstraint::satisfies(const Version& v) const {
  for (const AndSet& set : alternatives_) {
    bool pass = true;
    for (const Comparator& c : set) {
      int rel = v.compare(c.ver);
      switch (c.op) {
        case Op::Eq: pass = rel == 0; break;
        case Op::Gt: pass = rel > 0; break;
        case Op::Ge: pass = rel >= 0; break;
        case Op::Lt: pass = rel < 0; break;
        case Op::Le: pass = rel <= 0; break;
      }
      if (!pass) break;
    }
    if (!pass) continue;
    if (!v.prerelease.empty()) {
      bool allowed = std::any_of(set.begin(), set.end(), [&](const Comparator& c) {
        return !c.ver.prerelease.empty() && c.ver.same_core(v);
      });
      if (!allowed) continue;
    }
    return true;
  }
  return false;
}

bool range_satisfies(const RangeConstraint& r, const Version& v) {
  return r.satisfies(v);
}

}  // namespace depgraph
