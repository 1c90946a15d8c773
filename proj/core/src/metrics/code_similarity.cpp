#include "psd2code/metrics/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "psd2code/text.hpp"

namespace psd2code::metrics {

namespace {

// Identifiers keep interior '-' so CSS property names stay single tokens.
std::vector<std::string> tokenize(const std::string& code) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const auto is_ident_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
  };
  const auto is_ident = [&](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
  };
  while (i < code.size()) {
    const char c = code[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < code.size() &&
             (is_ident(code[j]) ||
              (code[j] == '-' && j + 1 < code.size() && is_ident(code[j + 1]))))
        ++j;
      out.push_back(code.substr(i, j - i));
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < code.size() && (std::isdigit(static_cast<unsigned char>(code[j])) || code[j] == '.'))
        ++j;
      out.push_back(code.substr(i, j - i));
      i = j;
      continue;
    }
    out.push_back(std::string(1, c));
    ++i;
  }
  return out;
}

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (int(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

double token_weight(const std::vector<std::string>& gram, const MetricConfig& cfg) {
  double w = 0.0;
  for (const auto& t : gram) {
    const bool kw = std::find(cfg.keyword_list.begin(), cfg.keyword_list.end(), t) !=
                    cfg.keyword_list.end();
    w += kw ? cfg.keyword_weight : 1.0;
  }
  return w;
}

double bleu4(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
             const MetricConfig& cfg, bool weighted) {
  if (cand.empty() || ref.empty()) return (cand.empty() && ref.empty()) ? 1.0 : 0.0;
  const int max_n = std::min<int>(4, int(std::min(cand.size(), ref.size())));
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto cand_counts = ngrams(cand, n);
    const auto ref_counts = ngrams(ref, n);
    double matched = 0.0;
    double total = 0.0;
    for (const auto& [gram, count] : cand_counts) {
      const double w = weighted ? token_weight(gram, cfg) : 1.0;
      total += double(count) * w;
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += double(std::min(count, it->second)) * w;
    }
    if (total <= 0.0 || matched <= 0.0) return 0.0;
    log_sum += std::log(matched / total);
  }
  double score = std::exp(log_sum / max_n);
  if (cand.size() < ref.size())
    score *= std::exp(1.0 - double(ref.size()) / double(cand.size()));  // brevity penalty
  return score;
}

// --- Shallow AST subtree bags -------------------------------------------------

void jsx_signatures(const codecheck::JsxNode& node, std::map<std::string, int>& bag) {
  const auto sig = [&](const codecheck::JsxNode& n, int height, const auto& self) -> std::string {
    std::string s = n.tag;
    if (!n.text.empty()) s += "#t";
    if (height > 1) {
      s += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += ",";
        s += self(n.children[i], height - 1, self);
      }
      s += ")";
    }
    return s;
  };
  for (int h = 1; h <= 3; ++h) ++bag[sig(node, h, sig)];
  for (const auto& c : node.children) jsx_signatures(c, bag);
}

std::map<std::string, int> scss_signatures(const codecheck::StyleSheet& sheet) {
  std::map<std::string, int> bag;
  std::vector<std::string> rule_sigs;
  for (const auto& rule : sheet.rules) {
    std::vector<std::string> props;
    const auto& d = rule.decls;
    if (d.position) props.push_back("position");
    if (d.top) props.push_back("top");
    if (d.left) props.push_back("left");
    if (d.width) props.push_back("width");
    if (d.height) props.push_back("height");
    if (d.z_index) props.push_back("z-index");
    if (d.background_image) props.push_back("background-image");
    if (d.background_color) props.push_back("background-color");
    if (d.color) props.push_back("color");
    if (d.font_size) props.push_back("font-size");
    if (d.opacity) props.push_back("opacity");
    std::sort(props.begin(), props.end());
    std::string sig = "rule(";
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (i) sig += ",";
      sig += props[i];
      ++bag[props[i]];
    }
    sig += ")";
    ++bag[sig];
    rule_sigs.push_back(sig);
  }
  std::sort(rule_sigs.begin(), rule_sigs.end());
  std::string sheet_sig = "sheet(";
  for (std::size_t i = 0; i < rule_sigs.size(); ++i) {
    if (i) sheet_sig += ",";
    sheet_sig += rule_sigs[i];
  }
  sheet_sig += ")";
  ++bag[sheet_sig];
  return bag;
}

double bag_overlap(const std::map<std::string, int>& cand, const std::map<std::string, int>& ref) {
  double total = 0.0;
  double matched = 0.0;
  for (const auto& [sig, count] : ref) {
    total += count;
    const auto it = cand.find(sig);
    if (it != cand.end()) matched += std::min(count, it->second);
  }
  if (total <= 0.0) return 1.0;
  return matched / total;
}

// --- className -> selector edges ---------------------------------------------

struct ParsedPair {
  bool ok = false;
  codecheck::JsxTree tree;
  codecheck::StyleSheet sheet;
};

ParsedPair try_parse(const codecheck::GeneratedCode& code) {
  ParsedPair out;
  try {
    out.tree = codecheck::parse_jsx(code.jsx);
    out.sheet = codecheck::parse_scss(code.scss);
    out.ok = true;
  } catch (const codecheck::CodeCheckError&) {
    out.ok = false;
  }
  return out;
}

void collect_edges(const codecheck::JsxNode& node,
                   std::vector<std::vector<std::string>>& ancestry,
                   const codecheck::StyleSheet& sheet, std::set<std::string>& edges) {
  std::vector<std::string> classes;
  for (const auto& c : node.class_list()) {
    const std::string k = kebab_case(c);
    classes.push_back(k.empty() ? c : k);
  }
  for (const auto& rule : sheet.rules) {
    if (rule.path.empty()) continue;
    const bool self_has = std::find(classes.begin(), classes.end(), rule.path.back()) != classes.end();
    if (!self_has) continue;
    std::size_t seg = 0;
    const std::size_t need = rule.path.size() - 1;
    for (const auto& anc : ancestry) {
      if (seg == need) break;
      if (std::find(anc.begin(), anc.end(), rule.path[seg]) != anc.end()) ++seg;
    }
    if (seg != need) continue;
    std::string selector;
    for (std::size_t i = 0; i < rule.path.size(); ++i) {
      if (i) selector += " ";
      selector += "." + rule.path[i];
    }
    for (const auto& cls : classes) edges.insert(cls + " -> " + selector);
  }
  ancestry.push_back(classes);
  for (const auto& c : node.children) collect_edges(c, ancestry, sheet, edges);
  ancestry.pop_back();
}

std::set<std::string> dataflow_edges(const ParsedPair& parsed) {
  std::set<std::string> edges;
  if (!parsed.ok) return edges;
  std::vector<std::vector<std::string>> ancestry;
  collect_edges(parsed.tree.root, ancestry, parsed.sheet, edges);
  return edges;
}

}  // namespace

double codebleu(const codecheck::GeneratedCode& candidate, const codecheck::GeneratedCode& reference,
                const MetricConfig& cfg) {
  const ParsedPair cand = try_parse(candidate);
  const ParsedPair ref = try_parse(reference);

  const auto cand_jsx_tokens = tokenize(candidate.jsx);
  const auto ref_jsx_tokens = tokenize(reference.jsx);
  const auto cand_scss_tokens = tokenize(candidate.scss);
  const auto ref_scss_tokens = tokenize(reference.scss);

  const double ngram_jsx = bleu4(cand_jsx_tokens, ref_jsx_tokens, cfg, false);
  const double ngram_scss = bleu4(cand_scss_tokens, ref_scss_tokens, cfg, false);
  const double weighted_jsx = bleu4(cand_jsx_tokens, ref_jsx_tokens, cfg, true);
  const double weighted_scss = bleu4(cand_scss_tokens, ref_scss_tokens, cfg, true);

  double ast_jsx = 0.0;
  double ast_scss = 0.0;
  double dataflow = 0.0;
  if (cand.ok && ref.ok) {
    std::map<std::string, int> cand_bag, ref_bag;
    jsx_signatures(cand.tree.root, cand_bag);
    jsx_signatures(ref.tree.root, ref_bag);
    ast_jsx = bag_overlap(cand_bag, ref_bag);
    ast_scss = bag_overlap(scss_signatures(cand.sheet), scss_signatures(ref.sheet));

    const auto ref_edges = dataflow_edges(ref);
    if (ref_edges.empty()) {
      dataflow = 1.0;
    } else {
      const auto cand_edges = dataflow_edges(cand);
      std::size_t hit = 0;
      for (const auto& e : ref_edges)
        if (cand_edges.count(e)) ++hit;
      dataflow = double(hit) / double(ref_edges.size());
    }
  }

  const double side_jsx = cfg.codebleu_ngram_weight * ngram_jsx +
                          cfg.codebleu_weighted_ngram_weight * weighted_jsx +
                          cfg.codebleu_ast_weight * ast_jsx + cfg.codebleu_dataflow_weight * dataflow;
  const double side_scss = cfg.codebleu_ngram_weight * ngram_scss +
                           cfg.codebleu_weighted_ngram_weight * weighted_scss +
                           cfg.codebleu_ast_weight * ast_scss +
                           cfg.codebleu_dataflow_weight * dataflow;
  return (side_jsx + side_scss) / 2.0;
}

namespace {

std::vector<std::string> normalized_lines(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& line : split_lines(text)) {
    const std::string t = trim(line);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

struct Block {
  std::size_t a = 0, b = 0, len = 0;
};

Block longest_common_block(const std::vector<std::string>& a, std::size_t a_lo, std::size_t a_hi,
                           const std::vector<std::string>& b, std::size_t b_lo, std::size_t b_hi) {
  // Row-rolling common-suffix DP; the earliest (a, b) position wins ties,
  // like difflib's find_longest_match.
  Block best;
  std::vector<std::size_t> prev(b_hi - b_lo + 1, 0);
  std::vector<std::size_t> cur(b_hi - b_lo + 1, 0);
  for (std::size_t i = a_lo; i < a_hi; ++i) {
    cur[0] = 0;
    for (std::size_t j = b_lo; j < b_hi; ++j) {
      const std::size_t col = j - b_lo + 1;
      if (a[i] == b[j]) {
        const std::size_t run = prev[col - 1] + 1;
        cur[col] = run;
        if (run > best.len) {
          best.len = run;
          best.a = i + 1 - run;
          best.b = j + 1 - run;
        }
      } else {
        cur[col] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

std::size_t matched_total(const std::vector<std::string>& a, std::size_t a_lo, std::size_t a_hi,
                          const std::vector<std::string>& b, std::size_t b_lo, std::size_t b_hi) {
  if (a_lo >= a_hi || b_lo >= b_hi) return 0;
  const Block blk = longest_common_block(a, a_lo, a_hi, b, b_lo, b_hi);
  if (blk.len == 0) return 0;
  return blk.len + matched_total(a, a_lo, blk.a, b, b_lo, blk.b) +
         matched_total(a, blk.a + blk.len, a_hi, b, blk.b + blk.len, b_hi);
}

}  // namespace

double traditional_similarity(const std::string& candidate, const std::string& reference) {
  const auto a = normalized_lines(candidate);
  const auto b = normalized_lines(reference);
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t m = matched_total(a, 0, a.size(), b, 0, b.size());
  return 2.0 * double(m) / double(a.size() + b.size());
}

}  // namespace psd2code::metrics
