#include "topiclass/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topiclass {

Corpus Corpus::from_pages(std::vector<WebPage> pages) {
  if (pages.empty()) throw std::runtime_error("corpus is empty");

  Corpus c;
  c.pages_ = std::move(pages);
  for (std::size_t i = 0; i < c.pages_.size(); ++i) {
    const WebPage& p = c.pages_[i];
    if (p.label.empty())
      throw std::runtime_error("page '" + p.id + "' has an empty label");
    if (!c.id_index_.emplace(p.id, i).second)
      throw std::runtime_error("duplicate page id '" + p.id + "'");
  }

  std::set<std::string> labels;
  for (const WebPage& p : c.pages_) labels.insert(p.label);
  c.categories_.assign(labels.begin(), labels.end());
  c.label_index_.resize(c.pages_.size());
  for (std::size_t i = 0; i < c.pages_.size(); ++i) {
    auto it = std::lower_bound(c.categories_.begin(), c.categories_.end(), c.pages_[i].label);
    c.label_index_[i] = static_cast<std::size_t>(it - c.categories_.begin());
  }

  // Drop dangling and self links, then build forward/reverse indexes.
  c.forward_.resize(c.pages_.size());
  c.reverse_.resize(c.pages_.size());
  for (std::size_t i = 0; i < c.pages_.size(); ++i) {
    std::vector<std::string> kept;
    std::set<std::string> seen;
    for (const std::string& target : c.pages_[i].outlinks) {
      auto it = c.id_index_.find(target);
      if (it == c.id_index_.end() || it->second == i) {
        ++c.dropped_links_;
        continue;
      }
      if (seen.insert(target).second) kept.push_back(target);
    }
    std::sort(kept.begin(), kept.end());
    c.pages_[i].outlinks = kept;
    for (const std::string& target : kept)
      c.forward_[i].push_back(c.id_index_.at(target));
  }
  for (std::size_t i = 0; i < c.pages_.size(); ++i)
    for (std::size_t child : c.forward_[i]) c.reverse_[child].push_back(i);
  auto by_id = [&c](std::size_t a, std::size_t b) { return c.pages_[a].id < c.pages_[b].id; };
  for (auto& adj : c.forward_) std::sort(adj.begin(), adj.end(), by_id);
  for (auto& adj : c.reverse_) std::sort(adj.begin(), adj.end(), by_id);
  return c;
}

std::size_t Corpus::index_of(const std::string& id) const {
  auto it = id_index_.find(id);
  if (it == id_index_.end()) throw std::runtime_error("unknown page id '" + id + "'");
  return it->second;
}

std::vector<std::size_t> Corpus::siblings_of(std::size_t i) const {
  std::set<std::size_t> sibs;
  for (std::size_t parent : reverse_[i])
    for (std::size_t child : forward_[parent])
      if (child != i) sibs.insert(child);
  std::vector<std::size_t> out(sibs.begin(), sibs.end());
  std::sort(out.begin(), out.end(),
            [this](std::size_t a, std::size_t b) { return pages_[a].id < pages_[b].id; });
  return out;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());

  std::vector<WebPage> pages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": malformed record: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("category") ||
        !rec.contains("text") || !rec.contains("links"))
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": record must have id, category, text, links");
    WebPage p;
    try {
      p.id = rec.at("id").get<std::string>();
      p.label = rec.at("category").get<std::string>();
      p.text = rec.at("text").get<std::string>();
      p.outlinks = rec.at("links").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": malformed record: " + e.what());
    }
    pages.push_back(std::move(p));
  }
  return Corpus::from_pages(std::move(pages));
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::ostringstream out;
  for (const WebPage& p : corpus.pages()) {
    nlohmann::ordered_json rec;
    rec["id"] = p.id;
    rec["category"] = p.label;
    rec["text"] = p.text;
    rec["links"] = p.outlinks;
    out << rec.dump() << '\n';
  }
  return out.str();
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path.string());
  out << corpus_to_jsonl(corpus);
}

NeighborSets resolve_neighbors(const Corpus& corpus, const std::string& page_id) {
  std::size_t i = corpus.index_of(page_id);
  NeighborSets n;
  for (std::size_t p : corpus.parents_of(i)) n.parents.push_back(corpus.page(p).id);
  for (std::size_t c : corpus.children_of(i)) n.children.push_back(corpus.page(c).id);
  for (std::size_t s : corpus.siblings_of(i)) n.siblings.push_back(corpus.page(s).id);
  return n;
}

namespace {

std::string padded(const char* prefix, int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return std::string(prefix) + s;
}

}  // namespace

Corpus generate_synthetic_corpus(const SynthSpec& spec) {
  if (spec.n_classes < 2) throw std::invalid_argument("n_classes must be >= 2");
  if (spec.pages_per_class < 2) throw std::invalid_argument("pages_per_class must be >= 2");
  if (spec.words_per_class < 1) throw std::invalid_argument("words_per_class must be >= 1");
  if (spec.doc_length < 1) throw std::invalid_argument("doc_length must be >= 1");
  if (spec.text_noise < 0.0 || spec.text_noise >= 1.0)
    throw std::invalid_argument("text_noise must be in [0,1)");
  if (spec.link_noise < 0.0 || spec.link_noise > 1.0)
    throw std::invalid_argument("link_noise must be in [0,1]");
  if (spec.links_per_page < 0) throw std::invalid_argument("links_per_page must be >= 0");
  if (spec.pair_overlap < 0 || spec.pair_overlap > spec.words_per_class)
    throw std::invalid_argument("pair_overlap must be in [0, words_per_class]");

  std::mt19937_64 rng(spec.seed);

  // Per-class vocabulary blocks; paired classes (2i, 2i+1) optionally share
  // an extra block so that some class pairs are deliberately confusable.
  std::vector<std::vector<std::string>> class_words(spec.n_classes);
  for (int ci = 0; ci < spec.n_classes; ++ci) {
    for (int w = 0; w < spec.words_per_class; ++w)
      class_words[ci].push_back(padded("c", ci, 2) + padded("w", w, 3));
    if (spec.pair_overlap > 0) {
      int pair = ci / 2;
      for (int w = 0; w < spec.pair_overlap; ++w)
        class_words[ci].push_back(padded("pair", pair, 2) + padded("w", w, 3));
    }
  }
  std::vector<std::string> shared;
  for (int w = 0; w < spec.shared_words; ++w) shared.push_back(padded("shared", w, 3));

  auto pick = [&rng](const std::vector<std::string>& pool) -> const std::string& {
    std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
    return pool[d(rng)];
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<WebPage> pages;
  for (int ci = 0; ci < spec.n_classes; ++ci) {
    for (int pi = 0; pi < spec.pages_per_class; ++pi) {
      WebPage p;
      p.id = padded("c", ci, 2) + padded("p", pi, 3);
      p.label = padded("class", ci, 2);
      std::string text;
      for (int t = 0; t < spec.doc_length; ++t) {
        const std::string* word;
        if (unit(rng) < spec.text_noise) {
          // Off-topic token: background word or a word from some other class.
          if (!shared.empty() && unit(rng) < 0.5) {
            word = &pick(shared);
          } else {
            std::uniform_int_distribution<int> oc(0, spec.n_classes - 2);
            int other = oc(rng);
            if (other >= ci) ++other;
            word = &pick(class_words[other]);
          }
        } else {
          word = &pick(class_words[ci]);
        }
        if (!text.empty()) text += ' ';
        text += *word;
      }
      p.text = std::move(text);
      pages.push_back(std::move(p));
    }
  }

  // Links: mostly intra-class; link_noise fraction may point anywhere.
  int total = spec.n_classes * spec.pages_per_class;
  for (int ci = 0; ci < spec.n_classes; ++ci) {
    for (int pi = 0; pi < spec.pages_per_class; ++pi) {
      WebPage& p = pages[static_cast<std::size_t>(ci) * spec.pages_per_class + pi];
      for (int l = 0; l < spec.links_per_page; ++l) {
        int target;
        if (unit(rng) < spec.link_noise) {
          std::uniform_int_distribution<int> d(0, total - 1);
          target = d(rng);
        } else {
          std::uniform_int_distribution<int> d(0, spec.pages_per_class - 1);
          target = ci * spec.pages_per_class + d(rng);
        }
        if (target == ci * spec.pages_per_class + pi) continue;  // no self links
        p.outlinks.push_back(pages[target].id);
      }
    }
  }

  return Corpus::from_pages(std::move(pages));
}

}  // namespace topiclass
