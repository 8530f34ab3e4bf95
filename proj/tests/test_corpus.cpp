#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "topiclass/corpus.hpp"

using namespace topiclass;

namespace {

Corpus make_corpus(std::vector<WebPage> pages) { return Corpus::from_pages(std::move(pages)); }

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("load drops dangling outlinks") {
  auto path = write_temp(
      "corpus_dangling.jsonl",
      R"({"id":"p1","category":"x","text":"one","links":["p2","missing"]})" "\n"
      R"({"id":"p2","category":"x","text":"two","links":[]})" "\n"
      R"({"id":"p3","category":"y","text":"three","links":["p1"]})" "\n");
  Corpus c = load_corpus(path);
  CHECK(c.size() == 3);
  CHECK(c.page(c.index_of("p1")).outlinks == std::vector<std::string>{"p2"});
  CHECK(c.dropped_link_count() == 1);
}

TEST_CASE("self links are removed") {
  Corpus c = make_corpus({{"p1", "x", "t", {"p1", "p2"}}, {"p2", "x", "t", {}}});
  CHECK(c.page(0).outlinks == std::vector<std::string>{"p2"});
}

TEST_CASE("duplicate id is rejected with the offending id") {
  auto path = write_temp("corpus_dup.jsonl",
                         R"({"id":"p1","category":"x","text":"a","links":[]})" "\n"
                         R"({"id":"p1","category":"x","text":"b","links":[]})" "\n");
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("p1"), std::runtime_error);
}

TEST_CASE("empty corpus and empty label are errors") {
  CHECK_THROWS_AS(make_corpus({}), std::runtime_error);
  CHECK_THROWS_AS(make_corpus({{"p1", "", "t", {}}}), std::runtime_error);
}

TEST_CASE("malformed record reports its line number") {
  auto path = write_temp("corpus_bad.jsonl",
                         R"({"id":"p1","category":"x","text":"a","links":[]})" "\n"
                         "this is not json\n");
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("categories are the sorted distinct labels") {
  Corpus c = make_corpus({{"1", "zeta", "t", {}}, {"2", "alpha", "t", {}}, {"3", "zeta", "t", {}}});
  CHECK(c.categories() == std::vector<std::string>{"alpha", "zeta"});
  CHECK(c.label_index(0) == 1);
  CHECK(c.label_index(1) == 0);
}

TEST_CASE("neighbor resolution: single parent with one sibling") {
  Corpus c = make_corpus({{"a", "x", "t", {"b", "c"}}, {"b", "x", "t", {}}, {"c", "x", "t", {}}});
  NeighborSets n = resolve_neighbors(c, "b");
  CHECK(n.parents == std::vector<std::string>{"a"});
  CHECK(n.children.empty());
  CHECK(n.siblings == std::vector<std::string>{"c"});
}

TEST_CASE("neighbor resolution: isolated page") {
  Corpus c = make_corpus({{"a", "x", "t", {}}, {"b", "x", "t", {}}});
  NeighborSets n = resolve_neighbors(c, "a");
  CHECK(n.parents.empty());
  CHECK(n.children.empty());
  CHECK(n.siblings.empty());
}

TEST_CASE("neighbor resolution: two parents, one child, sibling via other parent") {
  Corpus c = make_corpus({{"a", "x", "t", {"c", "e"}},
                          {"b", "x", "t", {"c"}},
                          {"c", "x", "t", {"d"}},
                          {"d", "x", "t", {}},
                          {"e", "x", "t", {}}});
  NeighborSets n = resolve_neighbors(c, "c");
  CHECK(n.parents == std::vector<std::string>{"a", "b"});
  CHECK(n.children == std::vector<std::string>{"d"});
  CHECK(n.siblings == std::vector<std::string>{"e"});
}

TEST_CASE("resolve_neighbors rejects unknown ids") {
  Corpus c = make_corpus({{"a", "x", "t", {}}});
  CHECK_THROWS_AS(resolve_neighbors(c, "nope"), std::runtime_error);
}

TEST_CASE("forward/reverse adjacency is a transpose pair") {
  Corpus c = generate_synthetic_corpus({.n_classes = 4, .pages_per_class = 12, .seed = 3});
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t child : c.children_of(i)) {
      const auto& parents = c.parents_of(child);
      CHECK(std::find(parents.begin(), parents.end(), i) != parents.end());
    }
    for (std::size_t parent : c.parents_of(i)) {
      const auto& children = c.children_of(parent);
      CHECK(std::find(children.begin(), children.end(), i) != children.end());
    }
  }
}

TEST_CASE("sibling relation is symmetric") {
  Corpus c = generate_synthetic_corpus({.n_classes = 3, .pages_per_class = 10, .link_noise = 0.3, .seed = 9});
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t s : c.siblings_of(i)) {
      auto back = c.siblings_of(s);
      CHECK(std::find(back.begin(), back.end(), i) != back.end());
    }
  }
}

TEST_CASE("resolve_neighbors is repeatable") {
  Corpus c = generate_synthetic_corpus({.n_classes = 2, .pages_per_class = 8, .seed = 5});
  for (const WebPage& p : c.pages()) {
    NeighborSets a = resolve_neighbors(c, p.id);
    NeighborSets b = resolve_neighbors(c, p.id);
    CHECK(a.parents == b.parents);
    CHECK(a.children == b.children);
    CHECK(a.siblings == b.siblings);
  }
}

TEST_CASE("synthetic generator is deterministic") {
  SynthSpec spec{.n_classes = 2, .pages_per_class = 10, .seed = 7};
  Corpus a = generate_synthetic_corpus(spec);
  Corpus b = generate_synthetic_corpus(spec);
  CHECK(corpus_to_jsonl(a) == corpus_to_jsonl(b));
}

TEST_CASE("zero link noise keeps every link inside its class") {
  Corpus c = generate_synthetic_corpus(
      {.n_classes = 4, .pages_per_class = 10, .link_noise = 0.0, .seed = 11});
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t child : c.children_of(i))
      CHECK(c.page(i).label == c.page(child).label);
}

TEST_CASE("label histogram is exactly pages_per_class per class") {
  Corpus c = generate_synthetic_corpus({.n_classes = 8, .pages_per_class = 50, .seed = 1});
  CHECK(c.categories().size() == 8);
  std::map<std::string, int> histogram;
  for (const WebPage& p : c.pages()) ++histogram[p.label];
  for (const auto& [label, count] : histogram) CHECK(count == 50);
}

TEST_CASE("invalid synthetic specs are rejected") {
  CHECK_THROWS_AS(generate_synthetic_corpus({.n_classes = 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic_corpus({.pages_per_class = 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic_corpus({.text_noise = 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic_corpus({.link_noise = -0.1}), std::invalid_argument);
}

TEST_CASE("a 15-category corpus with the reference histogram loads with m=15") {
  // Class sizes of the reference collection; total 4625.
  const std::vector<std::pair<std::string, int>> sizes = {
      {"art", 74}, {"business", 88}, {"citizenship", 224}, {"countries", 220},
      {"design", 250}, {"everyday", 380}, {"geography", 650}, {"history", 400},
      {"it", 64}, {"language", 196}, {"mathematics", 45}, {"music", 140},
      {"people", 680}, {"religion", 146}, {"science", 1068}};
  std::vector<WebPage> pages;
  int next = 0;
  for (const auto& [label, count] : sizes)
    for (int i = 0; i < count; ++i)
      pages.push_back({"p" + std::to_string(next++), label, "text", {}});
  Corpus c = make_corpus(std::move(pages));
  CHECK(c.size() == 4625);
  CHECK(c.categories().size() == 15);
}
