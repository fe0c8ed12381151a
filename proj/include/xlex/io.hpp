#pragma once

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "xlex/assoc.hpp"
#include "xlex/corpus.hpp"
#include "xlex/error.hpp"
#include "xlex/matcher.hpp"
#include "xlex/permutation.hpp"
#include "xlex/simulation.hpp"

namespace xlex {

// ---------------------------------------------------------------------------
// Files and small parsing helpers
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

/// 17 significant digits, enough to parse back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string_view> lines(std::string_view text) {
  auto out = split(text, '\n');
  for (auto& l : out)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DomainError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

inline double parse_double(std::string_view s, std::string_view what) {
  const std::string tmp(trim(s));
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || errno == ERANGE)
    throw DomainError("invalid " + std::string(what) + " '" + tmp + "'");
  return v;
}

inline std::string line_error(std::size_t line_no, const std::string& msg) {
  return "line " + std::to_string(line_no) + ": " + msg;
}

}  // namespace detail

/// One word per line; blank lines are skipped.
inline std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> words;
  for (auto line : detail::lines(text)) {
    line = detail::trim(line);
    if (!line.empty()) words.emplace_back(line);
  }
  return words;
}

// ---------------------------------------------------------------------------
// CoocStats TSV
//
//   #unigram
//   word<TAB>count            (N lines)
//   #pairs
//   <TAB>w1<TAB>...<TAB>wN    (header)
//   wi<TAB>c_i1<TAB>...       (N lines)
//   #window<TAB>W
//   #total_tokens<TAB>T
// ---------------------------------------------------------------------------

inline std::string format_cooc_tsv(const CoocStats& stats) {
  std::string out = "#unigram\n";
  const std::size_t n = stats.size();
  for (std::size_t i = 0; i < n; ++i) out += stats.vocab[i] + "\t" + std::to_string(stats.unigram_counts[i]) + "\n";
  out += "#pairs\n";
  for (std::size_t i = 0; i < n; ++i) out += "\t" + stats.vocab[i];
  out += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out += stats.vocab[i];
    for (std::size_t j = 0; j < n; ++j) out += "\t" + std::to_string(stats.pair_counts(i, j));
    out += "\n";
  }
  out += "#window\t" + std::to_string(stats.window) + "\n";
  out += "#total_tokens\t" + std::to_string(stats.total_tokens) + "\n";
  return out;
}

inline CoocStats parse_cooc_tsv(std::string_view text) {
  const auto ls = detail::lines(text);
  std::size_t k = 0;
  if (ls.empty() || ls[0] != "#unigram") throw DomainError("cooc file must start with '#unigram'");
  ++k;
  std::vector<std::string> words;
  std::vector<std::uint64_t> unigrams;
  for (; k < ls.size() && ls[k] != "#pairs"; ++k) {
    const auto f = detail::split(ls[k], '\t');
    if (f.size() != 2) throw DomainError(detail::line_error(k + 1, "expected word<TAB>count"));
    words.emplace_back(f[0]);
    unigrams.push_back(detail::parse_u64(f[1], "unigram count"));
  }
  if (k == ls.size()) throw DomainError("cooc file has no '#pairs' section");
  ++k;
  Vocabulary vocab(words);
  const std::size_t n = vocab.size();
  if (k >= ls.size()) throw DomainError("cooc file is missing the pair header");
  {
    const auto header = detail::split(ls[k], '\t');
    if (header.size() != n + 1 || !header[0].empty())
      throw DomainError(detail::line_error(k + 1, "pair header must list the N vocabulary words"));
    for (std::size_t j = 0; j < n; ++j)
      if (header[j + 1] != vocab[j]) throw DomainError(detail::line_error(k + 1, "pair header order differs from #unigram order"));
    ++k;
  }
  SquareMatrix<std::uint64_t> pairs(n);
  for (std::size_t i = 0; i < n; ++i, ++k) {
    if (k >= ls.size()) throw DomainError("cooc file has fewer than N pair rows");
    const auto f = detail::split(ls[k], '\t');
    if (f.size() != n + 1 || f[0] != vocab[i])
      throw DomainError(detail::line_error(k + 1, "malformed pair row for '" + vocab[i] + "'"));
    for (std::size_t j = 0; j < n; ++j) pairs(i, j) = detail::parse_u64(f[j + 1], "pair count");
  }
  CoocStats stats{std::move(vocab), std::move(pairs), std::move(unigrams), kDefaultWindow, 0};
  std::uint64_t sum = 0;
  for (auto u : stats.unigram_counts) sum += u;
  stats.total_tokens = sum;
  for (; k < ls.size(); ++k) {
    const auto f = detail::split(ls[k], '\t');
    if (f.size() == 2 && f[0] == "#window")
      stats.window = detail::parse_u64(f[1], "window");
    else if (f.size() == 2 && f[0] == "#total_tokens")
      stats.total_tokens = detail::parse_u64(f[1], "total token count");
    else if (!detail::trim(ls[k]).empty())
      throw DomainError(detail::line_error(k + 1, "unexpected trailing content"));
  }
  if (!stats.pair_counts.is_symmetric()) throw DomainError("pair counts are not symmetric");
  if (!stats.pair_counts.has_zero_diagonal()) throw DomainError("pair counts have a nonzero diagonal");
  for (std::size_t i = 0; i < n; ++i)
    if (stats.unigram_counts[i] == 0) throw DomainError("word '" + stats.vocab[i] + "' has zero frequency");
  return stats;
}

// ---------------------------------------------------------------------------
// AssocMatrix TSV: optional '#measure' line, header row, labeled rows.
// ---------------------------------------------------------------------------

inline std::string format_assoc_tsv(const AssocMatrix& m) {
  std::string out;
  if (m.measure || m.normalized) {
    out += "#measure\t";
    out += m.measure ? std::string(to_string(*m.measure)) : std::string("unknown");
    out += m.normalized ? "\tnormalized\n" : "\traw-scale\n";
  }
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) out += "\t" + m.vocab[i];
  out += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out += m.vocab[i];
    for (std::size_t j = 0; j < n; ++j) out += "\t" + format_double(m.values(i, j));
    out += "\n";
  }
  return out;
}

inline AssocMatrix parse_assoc_tsv(std::string_view text) {
  const auto ls = detail::lines(text);
  std::size_t k = 0;
  AssocMatrix m;
  bool has_meta = false;
  if (!ls.empty() && ls[0].starts_with("#measure")) {
    const auto f = detail::split(ls[0], '\t');
    if (f.size() != 3) throw DomainError(detail::line_error(1, "expected #measure<TAB>name<TAB>normalized|raw-scale"));
    if (f[1] != "unknown") m.measure = parse_measure(f[1]);
    m.normalized = f[2] == "normalized";
    has_meta = true;
    ++k;
  }
  if (k >= ls.size()) throw DomainError("association matrix file is empty");
  const auto header = detail::split(ls[k], '\t');
  if (header.empty() || !header[0].empty())
    throw DomainError(detail::line_error(k + 1, "header row must start with an empty cell"));
  std::vector<std::string> words(header.begin() + 1, header.end());
  m.vocab = Vocabulary(words);
  const std::size_t n = m.vocab.size();
  m.values = SquareMatrix<double>(n);
  ++k;
  for (std::size_t i = 0; i < n; ++i, ++k) {
    if (k >= ls.size()) throw DomainError("association matrix has fewer than N rows");
    const auto f = detail::split(ls[k], '\t');
    if (f.size() != n + 1 || f[0] != m.vocab[i])
      throw DomainError(detail::line_error(k + 1, "malformed row for '" + m.vocab[i] + "'"));
    for (std::size_t j = 0; j < n; ++j) m.values(i, j) = detail::parse_double(f[j + 1], "matrix entry");
  }
  for (; k < ls.size(); ++k)
    if (!detail::trim(ls[k]).empty()) throw DomainError(detail::line_error(k + 1, "unexpected trailing content"));
  if (!has_meta) m.normalized = is_normalized(m);
  check_assoc_matrix(m);
  return m;
}

// ---------------------------------------------------------------------------
// Permutation: one line of space-separated 0-based indices.
// ---------------------------------------------------------------------------

inline std::string format_permutation(const Permutation& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p[i]);
  }
  return out + "\n";
}

inline Permutation parse_permutation(std::string_view text) {
  std::vector<std::size_t> map;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) map.push_back(static_cast<std::size_t>(detail::parse_u64(tok, "permutation index")));
  return Permutation(std::move(map));
}

// ---------------------------------------------------------------------------
// Simulation curve CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCurveHeader = "c,mean_s,min_s,max_s,n_samples";

inline std::string format_curve_csv(const SimulationCurve& curve) {
  std::string out(kCurveHeader);
  out += "\n";
  for (const auto& p : curve.points)
    out += std::to_string(p.c) + "," + format_double(p.mean_s) + "," + format_double(p.min_s) + "," +
           format_double(p.max_s) + "," + std::to_string(p.n_samples) + "\n";
  return out;
}

inline std::vector<CurvePoint> parse_curve_csv(std::string_view text) {
  const auto ls = detail::lines(text);
  if (ls.empty() || ls[0] != kCurveHeader) throw DomainError("curve CSV must start with '" + std::string(kCurveHeader) + "'");
  std::vector<CurvePoint> points;
  for (std::size_t k = 1; k < ls.size(); ++k) {
    const auto f = detail::split(ls[k], ',');
    if (f.size() != 5) throw DomainError(detail::line_error(k + 1, "expected 5 comma-separated fields"));
    points.push_back({static_cast<std::size_t>(detail::parse_u64(f[0], "c")), detail::parse_double(f[1], "mean_s"),
                      detail::parse_double(f[2], "min_s"), detail::parse_double(f[3], "max_s"),
                      static_cast<std::size_t>(detail::parse_u64(f[4], "n_samples"))});
  }
  return points;
}

// ---------------------------------------------------------------------------
// Anchors: source_word<TAB>target_word per line, '#' comments.
// ---------------------------------------------------------------------------

inline AnchorSet parse_anchors(std::string_view text, const Vocabulary& source, const Vocabulary& target) {
  AnchorSet anchors;
  const auto ls = detail::lines(text);
  for (std::size_t k = 0; k < ls.size(); ++k) {
    const auto line = detail::trim(ls[k]);
    if (line.empty() || line.front() == '#') continue;
    const auto f = detail::split(line, '\t');
    if (f.size() != 2 || detail::trim(f[0]).empty() || detail::trim(f[1]).empty())
      throw DomainError(detail::line_error(k + 1, "anchor must be source_word<TAB>target_word"));
    const auto s = source.index_of(detail::trim(f[0]));
    const auto t = target.index_of(detail::trim(f[1]));
    if (!s) throw DomainError(detail::line_error(k + 1, "unknown source word '" + std::string(f[0]) + "'"));
    if (!t) throw DomainError(detail::line_error(k + 1, "unknown target word '" + std::string(f[1]) + "'"));
    anchors.pairs.emplace_back(*s, *t);
  }
  try {
    anchors.validate(source.size());
  } catch (const DomainError& e) {
    throw DomainError(std::string("anchors: ") + e.what());
  }
  return anchors;
}

// ---------------------------------------------------------------------------
// Match TSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view kMatchHeader = "source_word\ttarget_word\treliability\tanchored";

struct MatchRow {
  std::string source_word;
  std::string target_word;
  double reliability = 0.0;
  bool anchored = false;

  friend bool operator==(const MatchRow&, const MatchRow&) = default;
};

struct MatchTable {
  std::vector<MatchRow> rows;
  double s = 0.0;
  std::size_t restarts = 0;
  std::size_t converged = 0;

  friend bool operator==(const MatchTable&, const MatchTable&) = default;
};

inline MatchTable to_match_table(const MatchResult& r, const Vocabulary& source, const Vocabulary& target) {
  MatchTable t{{}, r.best.s_value, r.searches, r.converged};
  for (std::size_t i = 0; i < source.size(); ++i)
    t.rows.push_back({source[i], target[r.best.permutation[i]], r.reliability[i], r.anchored[i]});
  return t;
}

inline std::string format_match_tsv(const MatchTable& t) {
  std::string out(kMatchHeader);
  out += "\n";
  for (const auto& row : t.rows)
    out += row.source_word + "\t" + row.target_word + "\t" + format_double(row.reliability) + "\t" +
           (row.anchored ? "1" : "0") + "\n";
  out += "# s = " + format_double(t.s) + ", restarts = " + std::to_string(t.restarts) +
         ", converged = " + std::to_string(t.converged) + "\n";
  return out;
}

inline MatchTable parse_match_tsv(std::string_view text) {
  const auto ls = detail::lines(text);
  if (ls.empty() || ls[0] != kMatchHeader) throw DomainError("match file must start with its column header");
  MatchTable t;
  bool summary = false;
  for (std::size_t k = 1; k < ls.size(); ++k) {
    if (ls[k].starts_with("# s = ")) {
      const auto f = detail::split(ls[k].substr(2), ',');
      if (f.size() != 3) throw DomainError(detail::line_error(k + 1, "malformed summary line"));
      const auto value = [&](std::string_view field, std::string_view key) {
        field = detail::trim(field);
        if (!field.starts_with(key)) throw DomainError(detail::line_error(k + 1, "expected '" + std::string(key) + "'"));
        return field.substr(key.size());
      };
      t.s = detail::parse_double(value(f[0], "s = "), "s");
      t.restarts = static_cast<std::size_t>(detail::parse_u64(value(f[1], "restarts = "), "restarts"));
      t.converged = static_cast<std::size_t>(detail::parse_u64(value(f[2], "converged = "), "converged"));
      summary = true;
      continue;
    }
    const auto f = detail::split(ls[k], '\t');
    if (f.size() != 4 || (f[3] != "0" && f[3] != "1"))
      throw DomainError(detail::line_error(k + 1, "expected 4 tab-separated columns"));
    t.rows.push_back({std::string(f[0]), std::string(f[1]), detail::parse_double(f[2], "reliability"), f[3] == "1"});
  }
  if (!summary) throw DomainError("match file has no '# s = ...' summary line");
  return t;
}

}  // namespace xlex
