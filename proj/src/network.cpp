#include "devroles/network.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "devroles/csv.hpp"

namespace devroles {

void DeveloperNetwork::add_edge(PersonId a, PersonId b, std::int64_t w) {
  if (a == b) return;
  if (b < a) std::swap(a, b);
  nodes.insert(a);
  nodes.insert(b);
  edges[{a, b}] += w;
}

std::int64_t DeveloperNetwork::weight(PersonId a, PersonId b) const {
  if (b < a) std::swap(a, b);
  auto it = edges.find({a, b});
  return it == edges.end() ? 0 : it->second;
}

Adjacency::Adjacency(const DeveloperNetwork& net) : ids(net.nodes.begin(), net.nodes.end()), neighbours(ids.size()) {
  auto index_of = [&](PersonId p) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), p) - ids.begin());
  };
  for (const auto& [pair, w] : net.edges) {
    if (w <= 0) continue;
    const auto a = index_of(pair.first);
    const auto b = index_of(pair.second);
    neighbours[a].push_back(b);
    neighbours[b].push_back(a);
  }
  for (auto& n : neighbours) std::sort(n.begin(), n.end());
}

DeveloperNetwork build_communication_network(std::span<const Message> messages, std::span<const Thread> threads,
                                             const AnalysisWindow& w) {
  DeveloperNetwork net;
  net.window = w.index;
  net.kind = NetworkKind::communication;
  std::vector<PersonId> authors;
  for (const auto& t : threads) {
    authors.clear();
    for (auto i : t.messages) {
      const Message& m = messages[i];
      if (w.contains(m.timestamp)) authors.push_back(m.author);
    }
    for (std::size_t i = 0; i < authors.size(); ++i) {
      net.add_node(authors[i]);
      for (std::size_t j = i + 1; j < authors.size(); ++j) net.add_edge(authors[i], authors[j]);
    }
  }
  return net;
}

double cosine_similarity(const TokenBag& a, const TokenBag& b) {
  std::int64_t dot = 0, na = 0, nb = 0;
  for (const auto& [t, c] : a) na += c * c;
  for (const auto& [t, c] : b) nb += c * c;
  if (na == 0 || nb == 0) return 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  // sqrt of the exact product keeps identical bags at exactly 1.
  return static_cast<double>(dot) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
}

TokenBag truncate_bag(const TokenBag& bag, std::size_t limit) {
  if (bag.size() <= limit) return bag;
  std::vector<std::pair<std::string, std::int64_t>> items(bag.begin(), bag.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  items.resize(limit);
  return TokenBag(items.begin(), items.end());
}

std::vector<std::pair<std::string, std::string>> semantic_coupling(const std::map<std::string, TokenBag>& bags,
                                                                   double theta) {
  std::vector<const std::string*> names;
  std::vector<const TokenBag*> vecs;
  for (const auto& [name, bag] : bags) {
    names.push_back(&name);
    vecs.push_back(&bag);
  }
  std::map<std::string_view, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (const auto& [tok, c] : *vecs[i]) {
      if (c > 0) index[tok].push_back(i);
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> candidates;
  for (const auto& [tok, posting] : index) {
    for (std::size_t a = 0; a < posting.size(); ++a) {
      for (std::size_t b = a + 1; b < posting.size(); ++b) candidates.emplace(posting[a], posting[b]);
    }
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : candidates) {
    if (cosine_similarity(*vecs[a], *vecs[b]) >= theta) out.emplace_back(*names[a], *names[b]);
  }
  return out;
}

DeveloperNetwork build_technical_network(std::span<const Commit> commits, const AnalysisWindow& w,
                                         const TechnicalNetworkOptions& options) {
  DeveloperNetwork net;
  net.window = w.index;
  net.kind = NetworkKind::technical;

  std::map<std::string, std::set<PersonId>> authors_of;
  std::map<std::string, TokenBag> bags;
  for (const auto& c : commits) {
    if (!w.contains(c.timestamp)) continue;
    net.add_node(c.author);
    for (const auto& ch : c.changes) {
      const std::string& key = options.granularity == Granularity::file ? ch.path : ch.entity;
      authors_of[key].insert(c.author);
      if (options.semantic) {
        auto& bag = bags[key];
        for (const auto& [tok, n] : ch.tokens) bag[tok] += n;
      }
    }
  }

  for (const auto& [entity, authors] : authors_of) {
    for (auto a = authors.begin(); a != authors.end(); ++a) {
      for (auto b = std::next(a); b != authors.end(); ++b) net.add_edge(*a, *b);
    }
  }

  if (options.semantic) {
    for (auto& [k, bag] : bags) bag = truncate_bag(bag, options.max_bag_tokens);
    std::erase_if(bags, [](const auto& kv) { return kv.second.empty(); });
    for (const auto& [e1, e2] : semantic_coupling(bags, options.theta)) {
      std::set<PersonPair> pairs;
      for (auto a : authors_of.at(e1)) {
        for (auto b : authors_of.at(e2)) {
          if (a != b) pairs.emplace(std::min(a, b), std::max(a, b));
        }
      }
      for (const auto& [a, b] : pairs) net.add_edge(a, b);
    }
  }
  return net;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_graphml(std::ostream& out, const DeveloperNetwork& net, const IdentityRegistry& registry) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
         "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
         "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
         "  <key id=\"person\" for=\"node\" attr.name=\"person\" attr.type=\"string\"/>\n"
         "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
  out << "  <graph id=\"window" << net.window << '_' << to_string(net.kind) << "\" edgedefault=\"undirected\">\n";
  for (auto p : net.nodes) {
    out << "    <node id=\"n" << p << "\"><data key=\"person\">" << xml_escape(registry.person(p).key)
        << "</data></node>\n";
  }
  for (const auto& [pair, w] : net.edges) {
    out << "    <edge source=\"n" << pair.first << "\" target=\"n" << pair.second << "\"><data key=\"weight\">" << w
        << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_edge_list(std::ostream& out, const DeveloperNetwork& net, const IdentityRegistry& registry) {
  std::vector<std::tuple<std::string, std::string, std::int64_t>> rows;
  for (const auto& [pair, w] : net.edges) {
    std::string a = registry.person(pair.first).key;
    std::string b = registry.person(pair.second).key;
    if (b < a) std::swap(a, b);
    rows.emplace_back(std::move(a), std::move(b), w);
  }
  std::sort(rows.begin(), rows.end());
  csv::write_row(out, {"source", "target", "weight"});
  for (const auto& [a, b, w] : rows) csv::write_row(out, {a, b, std::to_string(w)});
}

}  // namespace devroles
