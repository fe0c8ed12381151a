#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "xlex/error.hpp"
#include "xlex/matrix.hpp"

namespace xlex {

inline constexpr std::size_t kDefaultWindow = 11;

// ---------------------------------------------------------------------------
// Tokenization
// ---------------------------------------------------------------------------

/// Running text as lowercased word forms plus document boundaries.
///
/// A boundary b is the index of the first token of a new document, so the
/// previous document ends at b. Co-occurrence never spans a boundary.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::vector<std::size_t> boundaries;

  std::size_t size() const noexcept { return tokens.size(); }

  void mark_boundary() {
    if (tokens.empty()) return;
    if (!boundaries.empty() && boundaries.back() == tokens.size()) return;
    boundaries.push_back(tokens.size());
  }

  bool valid() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

struct TokenizerConfig {
  // A line consisting solely of this marker ends the current document.
  // Blank lines are never boundaries.
  std::optional<std::string> doc_separator;
};

namespace detail {

struct DecodedChar {
  char32_t cp;
  std::size_t offset;
};

// Decodes UTF-8, rejecting overlong forms, surrogates and out-of-range values.
inline std::vector<DecodedChar> decode_utf8(std::string_view text) {
  std::vector<DecodedChar> out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  while (i < text.size()) {
    const unsigned char b0 = byte(i);
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if (b0 < 0x80) {
      out.push_back({b0, i});
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07, min = 0x10000;
    } else {
      throw InputError("invalid UTF-8 lead byte", i);
    }
    if (i + len > text.size()) throw InputError("truncated UTF-8 sequence", i);
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char b = byte(i + k);
      if ((b & 0xC0) != 0x80) throw InputError("invalid UTF-8 continuation byte", i + k);
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min) throw InputError("overlong UTF-8 encoding", i);
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      throw InputError("invalid Unicode scalar value", i);
    out.push_back({cp, i});
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline bool is_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline bool is_punct(char32_t cp) {
  if (cp < 0x80)
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
             (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0x3008 && cp <= 0x3011) ||
             (cp >= 0xFF01 && cp <= 0xFF0F);
  }
}

// Lowercasing for ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic.
inline char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  return cp;
}

inline std::string finish_token(std::span<const char32_t> raw) {
  std::size_t b = 0, e = raw.size();
  while (b < e && is_punct(raw[b])) ++b;
  while (e > b && is_punct(raw[e - 1])) --e;
  std::string out;
  for (std::size_t k = b; k < e; ++k) append_utf8(out, to_lower(raw[k]));
  return out;
}

}  // namespace detail

inline bool TokenSequence::valid() const {
  for (const auto& t : tokens) {
    if (t.empty()) return false;
    if (std::any_of(t.begin(), t.end(), [](char ch) {
          return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' || ch == '\f';
        }))
      return false;
  }
  for (std::size_t k = 0; k < boundaries.size(); ++k) {
    if (boundaries[k] > tokens.size()) return false;
    if (k > 0 && boundaries[k] <= boundaries[k - 1]) return false;
  }
  return true;
}

/// Normalizes a single word form the way the tokenizer does (punctuation
/// strip + lowercase). Returns an empty string if nothing survives.
inline std::string normalize_word(std::string_view word) {
  auto chars = detail::decode_utf8(word);
  std::vector<char32_t> raw;
  for (const auto& c : chars) {
    if (detail::is_space(c.cp)) break;
    raw.push_back(c.cp);
  }
  return detail::finish_token(raw);
}

/// Appends the tokens of one text to `seq`. Separator lines add boundaries;
/// the caller marks the boundary at the end of the text if it is a document.
inline void append_text(TokenSequence& seq, std::string_view text, const TokenizerConfig& config = {}) {
  const auto chars = detail::decode_utf8(text);
  std::vector<char32_t> raw;
  std::size_t line_start = 0;

  const auto flush = [&] {
    if (raw.empty()) return;
    std::string tok = detail::finish_token(raw);
    raw.clear();
    if (!tok.empty()) seq.tokens.push_back(std::move(tok));
  };

  const auto is_separator_line = [&](std::size_t begin, std::size_t end) {
    if (!config.doc_separator) return false;
    std::string_view line = text.substr(begin, end - begin);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    return line == *config.doc_separator;
  };

  std::size_t k = 0;
  while (k <= chars.size()) {
    // Find the end of the current line.
    std::size_t line_end_char = k;
    while (line_end_char < chars.size() && chars[line_end_char].cp != U'\n') ++line_end_char;
    const std::size_t line_end_byte =
        line_end_char < chars.size() ? chars[line_end_char].offset : text.size();
    if (is_separator_line(line_start, line_end_byte)) {
      seq.mark_boundary();
    } else {
      for (std::size_t m = k; m < line_end_char; ++m) {
        if (detail::is_space(chars[m].cp))
          flush();
        else
          raw.push_back(chars[m].cp);
      }
      flush();
    }
    if (line_end_char >= chars.size()) break;
    k = line_end_char + 1;
    line_start = line_end_byte + 1;
  }
}

/// Tokenizes one text stream.
inline TokenSequence tokenize(std::string_view text, const TokenizerConfig& config = {}) {
  TokenSequence seq;
  append_text(seq, text, config);
  return seq;
}

/// Tokenizes several documents (e.g. files); each one ends with a boundary.
inline TokenSequence tokenize_documents(std::span<const std::string> documents,
                                        const TokenizerConfig& config = {}) {
  TokenSequence seq;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    append_text(seq, documents[d], config);
    if (d + 1 < documents.size()) seq.mark_boundary();
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

/// Ordered list of N >= 2 distinct word forms. Index is matrix row/column.
class Vocabulary {
 public:
  Vocabulary() = default;

  explicit Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
    if (words_.size() < 2)
      throw DomainError("vocabulary needs at least 2 words, got " + std::to_string(words_.size()));
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i].empty()) throw DomainError("empty word in vocabulary at position " + std::to_string(i));
      if (!index_.emplace(words_[i], i).second)
        throw DomainError("duplicate word in vocabulary: " + words_[i]);
    }
  }

  std::size_t size() const noexcept { return words_.size(); }
  const std::string& operator[](std::size_t i) const { return words_[i]; }
  const std::vector<std::string>& words() const noexcept { return words_; }

  std::optional<std::size_t> index_of(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Explicit list; order is preserved.
inline Vocabulary build_vocabulary(std::vector<std::string> words) { return Vocabulary(std::move(words)); }

/// The k most frequent forms, by descending count, ties lexicographic.
inline Vocabulary build_vocabulary(const TokenSequence& tokens, std::size_t k) {
  std::map<std::string_view, std::uint64_t> counts;
  for (const auto& t : tokens.tokens) ++counts[t];
  if (k > counts.size())
    throw DomainError("requested top-" + std::to_string(k) + " vocabulary but corpus has only " +
                      std::to_string(counts.size()) + " distinct forms");
  std::vector<std::pair<std::string_view, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> words;
  words.reserve(k);
  for (std::size_t i = 0; i < k; ++i) words.emplace_back(ranked[i].first);
  return Vocabulary(std::move(words));
}

// ---------------------------------------------------------------------------
// Co-occurrence counting
// ---------------------------------------------------------------------------

/// Pairwise co-occurrence counts f(i & j) and unigram frequencies f(i).
struct CoocStats {
  Vocabulary vocab;
  SquareMatrix<std::uint64_t> pair_counts;
  std::vector<std::uint64_t> unigram_counts;
  std::size_t window = kDefaultWindow;
  std::uint64_t total_tokens = 0;

  std::size_t size() const noexcept { return vocab.size(); }

  friend bool operator==(const CoocStats&, const CoocStats&) = default;
};

namespace detail {

// Counts every pair (p, q), p < q, whose right end q lies in [begin, end).
inline void count_range(std::span<const std::ptrdiff_t> ids, std::span<const std::size_t> doc_start,
                        std::size_t window, std::size_t begin, std::size_t end,
                        SquareMatrix<std::uint64_t>& pairs) {
  for (std::size_t q = begin; q < end; ++q) {
    const auto jq = ids[q];
    if (jq < 0) continue;
    const std::size_t lo = std::max(doc_start[q], q >= window + 1 ? q - (window + 1) : std::size_t{0});
    for (std::size_t p = lo; p < q; ++p) {
      const auto ip = ids[p];
      if (ip < 0 || ip == jq) continue;
      ++pairs(static_cast<std::size_t>(ip), static_cast<std::size_t>(jq));
    }
  }
}

}  // namespace detail

/// Counts co-occurrences of vocabulary words at positional distance at most
/// window + 1 within a document. Each position pair counts once; same-word
/// pairs are not counted. `threads` > 1 splits positions into blocks whose
/// integer counts are summed, so the result does not depend on it.
inline CoocStats count_cooccurrences(const TokenSequence& tokens, const Vocabulary& vocab,
                                     std::size_t window = kDefaultWindow, unsigned threads = 1) {
  const std::size_t n = vocab.size();
  const std::size_t len = tokens.size();

  std::vector<std::ptrdiff_t> ids(len, -1);
  std::vector<std::size_t> doc_start(len, 0);
  CoocStats stats{vocab, SquareMatrix<std::uint64_t>(n), std::vector<std::uint64_t>(n, 0), window, len};

  std::size_t b = 0, start = 0;
  for (std::size_t p = 0; p < len; ++p) {
    while (b < tokens.boundaries.size() && tokens.boundaries[b] <= p) start = tokens.boundaries[b++];
    doc_start[p] = start;
    if (auto idx = vocab.index_of(tokens.tokens[p])) {
      ids[p] = static_cast<std::ptrdiff_t>(*idx);
      ++stats.unigram_counts[*idx];
    }
  }

  std::vector<std::string> missing;
  for (std::size_t i = 0; i < n; ++i)
    if (stats.unigram_counts[i] == 0) missing.push_back(vocab[i]);
  if (!missing.empty()) {
    std::string msg = "vocabulary words missing from corpus:";
    for (const auto& w : missing) msg += " " + w;
    throw DomainError(msg);
  }

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, len / 4096))));
  if (threads == 1) {
    detail::count_range(ids, doc_start, window, 0, len, stats.pair_counts);
  } else {
    std::vector<SquareMatrix<std::uint64_t>> partial(threads, SquareMatrix<std::uint64_t>(n));
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = len * t / threads, hi = len * (t + 1) / threads;
      workers.emplace_back([&, t, lo, hi] { detail::count_range(ids, doc_start, window, lo, hi, partial[t]); });
    }
    for (auto& w : workers) w.join();
    for (const auto& m : partial) stats.pair_counts += m;
  }

  // Symmetrize: each unordered position pair was recorded once in (ip, jq).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto total = stats.pair_counts(i, j) + stats.pair_counts(j, i);
      stats.pair_counts(i, j) = stats.pair_counts(j, i) = total;
    }
  return stats;
}

}  // namespace xlex
