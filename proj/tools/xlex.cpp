// Command-line front end: cooc -> assoc -> simulate / match, plus synth.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "xlex/xlex.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitIo = 1;
constexpr int kExitDomain = 2;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
  } else {
    xlex::write_file(out_path, content);
  }
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct CoocOptions {
  std::vector<std::string> texts;
  std::string vocab;
  std::size_t top_k = 0;
  std::size_t window = xlex::kDefaultWindow;
  std::string doc_sep;
  unsigned threads = default_threads();
  std::string out;
};

void run_cooc(const CoocOptions& o) {
  xlex::TokenizerConfig tok;
  if (!o.doc_sep.empty()) tok.doc_separator = o.doc_sep;
  std::vector<std::string> docs;
  for (const auto& path : o.texts) docs.push_back(xlex::read_file(path));
  const auto tokens = xlex::tokenize_documents(docs, tok);

  std::optional<xlex::Vocabulary> vocab;
  if (!o.vocab.empty()) {
    std::vector<std::string> words;
    for (const auto& w : xlex::parse_word_list(xlex::read_file(o.vocab))) {
      auto norm = xlex::normalize_word(w);
      if (norm.empty()) throw xlex::DomainError("vocabulary entry '" + w + "' is empty after normalization");
      words.push_back(std::move(norm));
    }
    vocab = xlex::build_vocabulary(std::move(words));
  } else if (o.top_k > 0) {
    vocab = xlex::build_vocabulary(tokens, o.top_k);
  } else {
    throw CLI::ValidationError("cooc", "one of --vocab or --top-k is required");
  }
  emit(o.out, xlex::format_cooc_tsv(xlex::count_cooccurrences(tokens, *vocab, o.window, o.threads)));
}

struct AssocOptions {
  std::string stats;
  std::string measure = "sq-ratio";
  std::string out;
};

void run_assoc(const AssocOptions& o) {
  const auto stats = xlex::parse_cooc_tsv(xlex::read_file(o.stats));
  const auto m = xlex::normalize(xlex::apply_measure(stats, xlex::parse_measure(o.measure)));
  emit(o.out, xlex::format_assoc_tsv(m));
}

struct SimulateOptions {
  std::string e, g;
  std::string c_grid = "default";
  std::size_t samples = xlex::kDefaultSamplesPerC;
  std::uint64_t seed = xlex::kDefaultSeed;
  unsigned threads = default_threads();
  std::string out;
};

void run_simulate(const SimulateOptions& o) {
  const auto e = xlex::parse_assoc_tsv(xlex::read_file(o.e));
  const auto g = xlex::parse_assoc_tsv(xlex::read_file(o.g));
  xlex::SimulationConfig cfg;
  cfg.c_values = xlex::parse_c_grid(o.c_grid, e.size());
  cfg.samples_per_c = o.samples;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  emit(o.out, xlex::format_curve_csv(xlex::run_simulation(e, g, cfg)));
}

struct MatchOptions {
  std::string e, g;
  std::string anchors;
  std::size_t restarts = 50;
  std::uint64_t seed = xlex::kDefaultSeed;
  unsigned threads = default_threads();
  std::string out;
};

void run_match(const MatchOptions& o) {
  const auto e = xlex::parse_assoc_tsv(xlex::read_file(o.e));
  const auto g = xlex::parse_assoc_tsv(xlex::read_file(o.g));
  xlex::AnchorSet anchors;
  if (!o.anchors.empty()) anchors = xlex::parse_anchors(xlex::read_file(o.anchors), e.vocab, g.vocab);
  xlex::MatchConfig cfg;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  const auto result = xlex::match(e, g, anchors, cfg);
  emit(o.out, xlex::format_match_tsv(xlex::to_match_table(result, e.vocab, g.vocab)));
}

struct SynthOptions {
  xlex::SyntheticPairConfig config;
  std::string out;
};

void run_synth(const SynthOptions& o) {
  const auto pair = xlex::generate_synthetic_pair(o.config);
  const auto join = [](const std::vector<std::string>& words) {
    std::string s;
    for (const auto& w : words) s += w + "\n";
    return s;
  };
  const auto text = [](const xlex::TokenSequence& seq) {
    std::string s;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      s += seq.tokens[i];
      s += (i + 1) % 20 == 0 ? '\n' : ' ';
    }
    if (!s.empty()) s.back() = '\n';
    return s;
  };
  // b.aligned.vocab lists B's words so that line n translates line n of a.vocab.
  std::vector<std::string> aligned;
  for (std::size_t i = 0; i < pair.vocab_a.size(); ++i) aligned.push_back(pair.vocab_b[pair.truth[i]]);

  xlex::write_file(o.out + ".a.txt", text(pair.a));
  xlex::write_file(o.out + ".b.txt", text(pair.b));
  xlex::write_file(o.out + ".a.vocab", join(pair.vocab_a.words()));
  xlex::write_file(o.out + ".b.vocab", join(pair.vocab_b.words()));
  xlex::write_file(o.out + ".b.aligned.vocab", join(aligned));
  xlex::write_file(o.out + ".truth", xlex::format_permutation(pair.truth));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word correspondences from co-occurrence patterns of non-parallel corpora"};
  app.require_subcommand(1);

  CoocOptions cooc;
  auto* cooc_cmd = app.add_subcommand("cooc", "Count windowed co-occurrences and write a stats TSV");
  cooc_cmd->add_option("texts", cooc.texts, "Input text files (each file is a document)")->required();
  auto* vocab_opt = cooc_cmd->add_option("--vocab", cooc.vocab, "Vocabulary file, one word per line");
  cooc_cmd->add_option("--top-k", cooc.top_k, "Use the k most frequent forms as vocabulary")->excludes(vocab_opt);
  cooc_cmd->add_option("--window", cooc.window, "Maximum number of intervening words")->capture_default_str();
  cooc_cmd->add_option("--doc-sep", cooc.doc_sep, "Marker line that separates documents");
  cooc_cmd->add_option("--threads", cooc.threads, "Worker threads (does not affect output)");
  cooc_cmd->add_option("--out", cooc.out, "Output path (default stdout)");

  AssocOptions assoc;
  auto* assoc_cmd = app.add_subcommand("assoc", "Apply an association measure and normalize");
  assoc_cmd->add_option("stats", assoc.stats, "Stats TSV written by 'cooc'")->required();
  assoc_cmd->add_option("--measure", assoc.measure, "Association measure")
      ->check(CLI::IsMember({"sq-ratio", "raw", "mi-nolog"}))
      ->capture_default_str();
  assoc_cmd->add_option("--out", assoc.out, "Output path (default stdout)");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Similarity vs. number of displaced words");
  sim_cmd->add_option("source", sim.e, "Source association matrix")->required();
  sim_cmd->add_option("target", sim.g, "Target association matrix, aligned with the source")->required();
  sim_cmd->add_option("--c-grid", sim.c_grid, "Displacements, e.g. 0,2,5:100:5")->capture_default_str();
  sim_cmd->add_option("--samples", sim.samples, "Samples per displacement")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (does not affect output)");
  sim_cmd->add_option("--out", sim.out, "Output CSV (default stdout)");

  MatchOptions mt;
  auto* match_cmd = app.add_subcommand("match", "Search for the word correspondence minimizing s");
  match_cmd->add_option("source", mt.e, "Source association matrix")->required();
  match_cmd->add_option("target", mt.g, "Target association matrix")->required();
  match_cmd->add_option("--anchors", mt.anchors, "Known translations: source<TAB>target per line");
  match_cmd->add_option("--restarts", mt.restarts, "Random restarts")->capture_default_str();
  match_cmd->add_option("--seed", mt.seed, "Random seed")->capture_default_str();
  match_cmd->add_option("--threads", mt.threads, "Worker threads (does not affect output)");
  match_cmd->add_option("--out", mt.out, "Output TSV (default stdout)");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic comparable corpus pair");
  synth_cmd->add_option("--vocab-size", synth.config.vocab_size, "Words per language")->capture_default_str();
  synth_cmd->add_option("--length", synth.config.stream_length, "Tokens per stream")->capture_default_str();
  synth_cmd->add_option("--noise", synth.config.noise_rate, "Per-token replacement probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.config.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output prefix for .a.txt/.b.txt/.a.vocab/.b.vocab/.truth")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitIo;
  }

  try {
    if (*cooc_cmd) run_cooc(cooc);
    if (*assoc_cmd) run_assoc(assoc);
    if (*sim_cmd) run_simulate(sim);
    if (*match_cmd) run_match(mt);
    if (*synth_cmd) run_synth(synth);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const xlex::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const xlex::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}
