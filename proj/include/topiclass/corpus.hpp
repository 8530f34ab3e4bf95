#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace topiclass {

struct WebPage {
  std::string id;
  std::string label;
  std::string text;
  std::vector<std::string> outlinks;
};

// Parent/child/sibling page ids for one page, each sorted and deduplicated.
struct NeighborSets {
  std::vector<std::string> parents;
  std::vector<std::string> children;
  std::vector<std::string> siblings;
};

// Immutable labeled document collection with its hyperlink graph.
// Pages keep insertion order; adjacency is stored both ways and the
// reverse index is always the exact transpose of the forward index.
class Corpus {
 public:
  // Validates pages, drops dangling and self links, builds both indexes.
  // Throws std::runtime_error on duplicate id, empty label, or empty input.
  static Corpus from_pages(std::vector<WebPage> pages);

  std::size_t size() const { return pages_.size(); }
  const std::vector<WebPage>& pages() const { return pages_; }
  const WebPage& page(std::size_t i) const { return pages_[i]; }

  const std::vector<std::string>& categories() const { return categories_; }
  std::size_t label_index(std::size_t page) const { return label_index_[page]; }

  bool has_page(const std::string& id) const { return id_index_.count(id) > 0; }
  std::size_t index_of(const std::string& id) const;

  // Pages the given page links to / pages linking to it, as indexes sorted by id.
  const std::vector<std::size_t>& children_of(std::size_t i) const { return forward_[i]; }
  const std::vector<std::size_t>& parents_of(std::size_t i) const { return reverse_[i]; }
  // Union of all parents' children, minus the page itself.
  std::vector<std::size_t> siblings_of(std::size_t i) const;

  std::size_t dropped_link_count() const { return dropped_links_; }

 private:
  std::vector<WebPage> pages_;
  std::vector<std::string> categories_;
  std::vector<std::size_t> label_index_;
  std::unordered_map<std::string, std::size_t> id_index_;
  std::vector<std::vector<std::size_t>> forward_;
  std::vector<std::vector<std::size_t>> reverse_;
  std::size_t dropped_links_ = 0;
};

// Corpus file: one JSON object per line with fields id, category, text, links.
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
std::string corpus_to_jsonl(const Corpus& corpus);

NeighborSets resolve_neighbors(const Corpus& corpus, const std::string& page_id);

struct SynthSpec {
  int n_classes = 8;
  int pages_per_class = 60;
  int words_per_class = 80;   // size of each class's planted vocabulary block
  int pair_overlap = 0;       // words shared between paired classes (2i, 2i+1)
  int shared_words = 100;     // class-neutral background vocabulary
  int doc_length = 30;        // tokens per page
  double text_noise = 0.25;   // fraction of tokens drawn off-topic
  int links_per_page = 3;
  double link_noise = 0.1;    // fraction of links allowed to cross classes
  std::uint64_t seed = 1;
};

// Deterministic generator: planted per-class vocabulary blocks and
// mostly intra-class links, so both text and graph carry the label signal.
Corpus generate_synthetic_corpus(const SynthSpec& spec);

}  // namespace topiclass
