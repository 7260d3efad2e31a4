#include "conceptmap/synth.hpp"

#include <array>
#include <cstdio>
#include <random>
#include <string>

namespace conceptmap::synth {

namespace {

constexpr std::array kFirst = {"Ahmed", "Mahmud", "Farid", "Omar", "Yusuf", "Khalid", "Samir",
                               "Haider", "Jamal", "Mustafa", "Ibrahim", "Tariq", "Zaid", "Abbas",
                               "Karim", "Hassan", "Ali", "Salim", "Nasser", "Hamid"};
constexpr std::array kLast = {"Jassim", "Rashid", "Hassan", "Khalil", "Saleh", "Tariq", "Jabbar",
                              "Abbas", "Salim", "Ibrahim", "Daud", "Aziz", "Hamza", "Kadhim",
                              "Saadi", "Nasser", "Hussein", "Mahdi", "Faraj", "Latif"};
constexpr std::array kOrgs = {"Ali Baba Group", "Mahdi Army", "Iraqi Police", "Baath Party",
                              "Ministry of Interior", "Iranian Special Group", "Iraqi Army",
                              "Badr Organization", "Red Crescent", "Ministry of Health"};
constexpr std::array kPlaces = {"Baghdad", "Basra", "Mosul", "Karkh", "Karrada", "Mansour",
                                "Adhamiyah", "Sadr City", "Abu Ghraib", "Dora", "Jadriya",
                                "Fallujah", "Ramadi", "Kirkuk", "Najaf", "Tikrit", "Samarra"};
constexpr std::array kVerbs = {"attacked", "funded", "met", "contacted", "recruited", "visited",
                               "supported", "threatened", "paid", "warned", "followed", "joined"};
constexpr std::array kThings = {"weapons", "rifles", "explosives", "documents", "leaflets",
                                "money", "fuel", "vehicles", "phones", "maps"};
constexpr std::array kMoves = {"traveled to", "returned to", "arrived in", "moved to",
                               "fled to", "drove to"};
constexpr std::array kTimes = {"Monday", "Tuesday", "Friday", "January", "March", "October",
                               "the morning", "the evening"};
constexpr std::array kAdverbs = {"quietly", "secretly", "openly", "repeatedly", "briefly"};
constexpr std::array kModifiers = {"eastern", "western", "northern", "southern", "central"};
constexpr std::array kRoles = {"commander", "leader", "courier", "driver", "officer",
                               "financier", "recruiter", "smuggler"};

// Explicit modulo sampling keeps the stream identical across standard
// library implementations (std::uniform_int_distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  template <typename Array>
  const char* pick(const Array& a) {
    return a[below(a.size())];
  }

 private:
  std::mt19937_64 engine_;
};

std::string person(Rng& rng) { return std::string(rng.pick(kFirst)) + " " + rng.pick(kLast); }

std::string sentence_for(Rng& rng, const std::string& actor, bool pronoun) {
  const std::string subject = pronoun ? "He" : actor;
  switch (rng.below(6)) {
    case 0:
      return subject + " " + rng.pick(kVerbs) + " " + person(rng) + " in " + rng.pick(kPlaces) + ".";
    case 1:
      return subject + " " + rng.pick(kMoves) + " " + rng.pick(kModifiers) + " " +
             rng.pick(kPlaces) + " on " + rng.pick(kTimes) + ".";
    case 2:
      return std::string("The ") + rng.pick(kOrgs) + " " + rng.pick(kVerbs) + " " + actor + ".";
    case 3:
      return subject + " delivered " + rng.pick(kThings) + " to the " + rng.pick(kOrgs) + ".";
    case 4:
      return subject + " " + rng.pick(kAdverbs) + " " + rng.pick(kVerbs) + " the " +
             rng.pick(kRoles) + " of the " + rng.pick(kOrgs) + ".";
    default:
      return "Local officials said " + actor + " " + rng.pick(kVerbs) + " " + person(rng) + ".";
  }
}

struct Names {
  std::string subject, relation, object;
};

Names base_names(Rng& rng, std::size_t cluster) {
  // The cluster number keeps clusters disjoint under every rule.
  Names n;
  n.subject = person(rng) + " " + std::to_string(cluster);
  n.relation = rng.pick(kVerbs);
  n.object = std::string(rng.pick(kThings)) + " " + std::to_string(cluster);
  return n;
}

}  // namespace

Corpus generate_corpus(std::size_t documents, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Document> docs;
  docs.reserve(documents);
  for (std::size_t d = 0; d < documents; ++d) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "synth-%06zu", d);
    doc.doc_id = id;
    doc.title = "Synthetic report " + std::to_string(d);
    doc.report_location = std::string(rng.pick(kPlaces));
    const std::string actor = person(rng);
    const std::size_t sentences = 3 + rng.below(6);
    for (std::size_t s = 0; s < sentences; ++s) {
      if (s) doc.body += ' ';
      doc.body += sentence_for(rng, actor, s > 0 && rng.below(3) == 0);
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), {{"generator", "synth-corpus seed=" + std::to_string(seed)}});
}

std::vector<Triple> generate_stress_triples(std::size_t records, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Triple> out;
  out.reserve(records);
  std::size_t cluster = 0;

  auto emit = [&](std::string s, std::string r, std::string o, std::size_t index) {
    if (out.size() == records) return;
    Triple t;
    t.subject = std::move(s);
    t.relation = std::move(r);
    t.object = std::move(o);
    char doc[32];
    std::snprintf(doc, sizeof doc, "stress-%04zu", cluster / 100);
    t.key = {doc, cluster % 100, index};
    t.subject_class = EntityClass::Person;
    out.push_back(std::move(t));
  };

  while (out.size() < records) {
    const Names n = base_names(rng, cluster);
    // Weights out of 200: standalone 30, each two-member kind 33 (x4 = 132),
    // three-member chain 38.
    const std::size_t roll = rng.below(200);
    if (roll < 30) {
      emit(n.subject, n.relation, n.object, 0);
    } else if (roll < 63) {  // longer object wins
      emit(n.subject, n.relation, n.object, 0);
      emit(n.subject, n.relation, std::string(rng.pick(kModifiers)) + " " + n.object, 1);
    } else if (roll < 96) {  // longer relation wins
      emit(n.subject, n.relation, n.object, 0);
      emit(n.subject, std::string(rng.pick(kAdverbs)) + " " + n.relation, n.object, 1);
    } else if (roll < 129) {  // longer subject wins
      emit("the " + std::string(rng.pick(kRoles)) + " " + n.subject, n.relation, n.object, 0);
      emit(n.subject, n.relation, n.object, 1);
    } else if (roll < 162) {  // nested prepositional variant
      const std::string place = std::string(rng.pick(kPlaces)) + " " + std::to_string(cluster);
      const std::string move = rng.pick(kMoves);
      emit(n.subject, move, place, 0);
      emit(n.subject, move + " " + place + " in", rng.pick(kTimes), 1);
    } else {  // chain: object refinement, then relation refinement
      const std::string longer = std::string(rng.pick(kModifiers)) + " " + n.object;
      emit(n.subject, n.relation, n.object, 0);
      emit(n.subject, n.relation, longer, 1);
      emit(n.subject, std::string(rng.pick(kAdverbs)) + " " + n.relation, longer, 2);
    }
    ++cluster;
  }
  return out;
}

}  // namespace conceptmap::synth
