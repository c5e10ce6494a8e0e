#include "pragproof/reason/prover.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "pragproof/n3/algebra.hpp"

namespace pragproof::reason {

const char* to_string(ProveStatus status) {
  switch (status) {
    case ProveStatus::Proved: return "proved";
    case ProveStatus::Unprovable: return "unprovable";
    case ProveStatus::BudgetExceeded: return "budget exceeded";
  }
  return "?";
}

void Budget::validate() const {
  if (max_steps == 0) throw std::invalid_argument("budget step bound must be positive");
  if (max_time.count() <= 0) throw std::invalid_argument("budget time bound must be positive");
}

FilterRule FilterRule::from_document(std::string source, const n3::Document& document) {
  const n3::Formula& body = document.body;
  if (!body.atoms.empty() || body.implications.size() != 1) {
    throw std::invalid_argument("goal document must contain exactly one implication");
  }
  const n3::Implication& imp = body.implications.front();
  if (!imp.antecedent.is_graph() || !imp.consequent.is_graph()) {
    throw std::invalid_argument("goal implication must relate two formulas");
  }
  for (const n3::Term& v : n3::variables_in_order(imp)) {
    if (v.is_existential()) throw std::invalid_argument("goal filter contains existential _:" + v.text());
  }
  if (!n3::components(imp.consequent.formula(), 2).empty()) {
    throw std::invalid_argument("goal must not contain nested formulas");
  }
  return FilterRule{std::move(source), imp, body};
}

namespace {

using detail::Atom;
using detail::AtomRef;
using detail::Rule;

constexpr Sym kUnbound = std::numeric_limits<Sym>::min();

enum class VarKind : std::uint8_t { Universal, Placeholder };

struct Evidence {
  bool from_lemma = false;
  std::uint32_t index = 0;  // fact or lemma index
  std::uint32_t atom = 0;   // head atom of the lemma
};

struct Lemma {
  std::uint32_t rule = 0;
  std::vector<Sym> values;  // one per rule variable
  std::vector<Evidence> evidence;
  std::vector<Atom> head;
  std::vector<std::uint32_t> closure;  // sorted lemma ids, self included
};

struct BudgetHit {};
struct PassAbandoned {};

using Goal = std::array<Sym, 3>;

Sym var_sym(std::size_t global) { return -static_cast<Sym>(global) - 1; }
std::size_t var_index(Sym s) { return static_cast<std::size_t>(-(s + 1)); }

class Engine {
 public:
  Engine(const KnowledgeBase& kb, const FilterRule& filter, const Budget& budget, const ProveOptions& options)
      : kb_(kb), budget_(budget), filter_source_(filter.source), filter_doc_(filter.source_formula) {
    budget.validate();
    excluded_.assign(kb.sources().size(), false);
    for (const std::string& iri : options.excluded_sources) {
      if (auto idx = kb.source_index(iri)) excluded_[*idx] = true;
    }
    filter_ = detail::compile_rule(filter.rule, std::numeric_limits<std::uint32_t>::max(), 0,
                                   [this](const n3::Term& t) { return intern(t); });
    started_ = std::chrono::steady_clock::now();
  }

  ProveResult run() {
    ProveResult result;
    try {
      if (auto found = depth_first()) {
        result.status = ProveStatus::Proved;
        result.proof = std::move(found);
        stats_.lemmas = lemmas_.size();
        result.stats = stats_;
        return result;
      }
      for (bound_ = 0;; ++bound_) {
        ++stats_.rounds;
        cut_ = false;
        std::vector<Evidence> evidence(filter_.body.size());
        std::vector<Sym> values;
        std::size_t base = allocate(filter_);
        bool found = solve_body(filter_, base, 0, evidence, [&] {
          values.clear();
          for (std::size_t i = 0; i < filter_.variables.size(); ++i) values.push_back(deref(var_sym(base + i)));
          return true;
        });
        release(base);
        if (found) {
          result.status = ProveStatus::Proved;
          result.proof = build_proof(values, evidence);
          break;
        }
        if (!cut_ || (saturated_ && bound_ >= lemmas_.size() + filter_.body.size())) {
          result.status = ProveStatus::Unprovable;
          result.message = "no derivation of the goal exists";
          break;
        }
        if (!saturated_ && stats_.steps > saturation_threshold()) {
          saturate();
          if (!goal_reachable()) {
            result.status = ProveStatus::Unprovable;
            result.message = "no derivation of the goal exists";
            break;
          }
        }
      }
    } catch (const BudgetHit&) {
      result.status = ProveStatus::BudgetExceeded;
      result.message = "reasoning budget exhausted after " + std::to_string(stats_.steps) + " rule expansions";
      result.proof.reset();
    }
    stats_.lemmas = lemmas_.size();
    result.stats = stats_;
    return result;
  }

 private:
  const KnowledgeBase& kb_;
  const Budget& budget_;
  std::string filter_source_;
  n3::Formula filter_doc_;
  Rule filter_;
  std::vector<bool> excluded_;
  std::chrono::steady_clock::time_point started_;

  std::vector<n3::Term> extra_;
  std::unordered_map<n3::Term, Sym> extra_ids_;
  std::vector<bool> extra_is_skolem_;

  std::vector<Sym> binding_;
  std::vector<VarKind> kind_;
  std::vector<std::size_t> trail_;

  std::vector<Lemma> lemmas_;
  std::map<std::pair<std::uint32_t, std::vector<Sym>>, std::uint32_t> lemma_keys_;
  std::unordered_map<Sym, std::vector<AtomRef>> lemma_heads_;

  std::vector<std::uint32_t> use_count_;
  std::size_t distinct_used_ = 0;
  std::size_t pending_ = 0;
  std::size_t bound_ = 0;
  bool cut_ = false;

  std::uint64_t pass_limit_ = 0;  // nonzero during the depth-first pass

  std::vector<Goal> ancestors_;
  ProveStats stats_;
  bool saturated_ = false;  // every derivable atom is a fact or a lemma head

  Sym intern(const n3::Term& t) {
    if (auto s = kb_.lookup(t)) return *s;
    auto [it, inserted] = extra_ids_.try_emplace(t, static_cast<Sym>(kb_.constant_count() + extra_.size()));
    if (inserted) {
      extra_.push_back(t);
      extra_is_skolem_.push_back(false);
    }
    return it->second;
  }

  Sym new_skolem() {
    auto sym = static_cast<Sym>(kb_.constant_count() + extra_.size());
    extra_.push_back(n3::Term::existential("sk!" + std::to_string(extra_.size())));
    extra_is_skolem_.push_back(true);
    return sym;
  }

  bool is_skolem(Sym s) const {
    auto k = kb_.constant_count();
    return s >= 0 && static_cast<std::size_t>(s) >= k && extra_is_skolem_[static_cast<std::size_t>(s) - k];
  }

  const n3::Term& constant(Sym s) const {
    auto k = kb_.constant_count();
    return static_cast<std::size_t>(s) < k ? kb_.constant(s) : extra_[static_cast<std::size_t>(s) - k];
  }

  // Variable store.

  std::size_t allocate(const Rule& rule) {
    std::size_t base = binding_.size();
    binding_.resize(base + rule.variables.size(), kUnbound);
    for (bool e : rule.existential) kind_.push_back(e ? VarKind::Placeholder : VarKind::Universal);
    return base;
  }

  void release(std::size_t base) {
    binding_.resize(base);
    kind_.resize(base);
  }

  Sym deref(Sym s) const {
    while (s < 0) {
      Sym b = binding_[var_index(s)];
      if (b == kUnbound) return s;
      s = b;
    }
    return s;
  }

  void bind(Sym var, Sym value) {
    binding_[var_index(var)] = value;
    trail_.push_back(var_index(var));
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      binding_[trail_.back()] = kUnbound;
      trail_.pop_back();
    }
  }

  static Sym globalize(Sym s, std::size_t base) { return s >= 0 ? s : var_sym(base + var_index(s)); }

  Goal goal_of(const Atom& a, std::size_t base) const {
    return {globalize(a.s, base), globalize(a.p, base), globalize(a.o, base)};
  }

  bool placeholder(Sym s) const { return s < 0 && kind_[var_index(s)] == VarKind::Placeholder; }

  // Unifies a rule head position with a goal position. Head placeholders may only
  // be aliased by unbound variables of the caller; callee universals never see them.
  bool unify_head_term(Sym head, Sym goal, std::size_t base) {
    Sym a = deref(head);
    Sym b = deref(goal);
    if (a == b) return true;
    bool a_var = a < 0, b_var = b < 0;
    if (!a_var && !b_var) return false;
    if (placeholder(a) || placeholder(b)) {
      Sym p = placeholder(a) ? a : b;
      Sym other = placeholder(a) ? b : a;
      if (other >= 0 || placeholder(other) || var_index(other) >= base) return false;
      bind(other, p);
      return true;
    }
    if (a_var) {
      bind(a, b);
    } else {
      bind(b, a);
    }
    return true;
  }

  bool unify_head(const Atom& head, std::size_t base, const Goal& goal) {
    return unify_head_term(globalize(head.s, base), goal[0], base) &&
           unify_head_term(globalize(head.p, base), goal[1], base) &&
           unify_head_term(globalize(head.o, base), goal[2], base);
  }

  bool unify_ground(const Goal& goal, const Atom& atom) {
    const std::array<Sym, 3> values{atom.s, atom.p, atom.o};
    for (std::size_t i = 0; i < 3; ++i) {
      Sym g = deref(goal[i]);
      if (g >= 0) {
        if (g != values[i]) return false;
      } else {
        bind(g, values[i]);
      }
    }
    return true;
  }

  // Cost accounting over the lemmas used by the proof under construction.

  void add_closure(const Lemma& l) {
    for (std::uint32_t id : l.closure)
      if (use_count_[id]++ == 0) ++distinct_used_;
  }

  void remove_closure(const Lemma& l) {
    for (std::uint32_t id : l.closure)
      if (--use_count_[id] == 0) --distinct_used_;
  }

  bool within_bound(std::size_t extra) {
    if (distinct_used_ + pending_ + extra <= bound_) return true;
    cut_ = true;
    return false;
  }

  void tick() {
    ++stats_.steps;
    if (pass_limit_ && stats_.steps > pass_limit_) throw PassAbandoned{};
    if (stats_.steps > budget_.max_steps) throw BudgetHit{};
    if ((stats_.steps & 255u) == 0 && std::chrono::steady_clock::now() - started_ > budget_.max_time) throw BudgetHit{};
  }

  bool variant(const Goal& a, const Goal& b) const {
    std::array<std::pair<Sym, Sym>, 3> pairs{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      Sym x = deref(a[i]);
      Sym y = deref(b[i]);
      if (x >= 0 || y >= 0) {
        if (x != y) return false;
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if ((pairs[j].first == x) != (pairs[j].second == y)) return false;
      }
      pairs[n++] = {x, y};
    }
    return true;
  }

  bool has_variant_ancestor(const Goal& goal) const {
    for (const Goal& a : ancestors_)
      if (variant(goal, a)) return true;
    return false;
  }

  using Continuation = std::function<bool(const Evidence&)>;

  bool solve_body(const Rule& rule, std::size_t base, std::size_t i, std::vector<Evidence>& evidence,
                  const std::function<bool()>& done) {
    if (i == rule.body.size()) return done();
    Goal goal = goal_of(rule.body[i], base);
    return solve_goal(goal, [&](const Evidence& ev) {
      evidence[i] = ev;
      return solve_body(rule, base, i + 1, evidence, done);
    });
  }

  // Unbounded depth-first pass with a step cap. Facts and lemmas are preferred at
  // every subgoal, so the proofs it finds are short on the inputs that matter; when
  // the cap is hit, state is reset and iterative deepening takes over.
  std::optional<Proof> depth_first() {
    bound_ = std::numeric_limits<std::size_t>::max();
    pass_limit_ = stats_.steps + saturation_threshold();
    ++stats_.rounds;
    std::vector<Evidence> evidence(filter_.body.size());
    std::vector<Sym> values;
    bool found = false;
    try {
      std::size_t base = allocate(filter_);
      found = solve_body(filter_, base, 0, evidence, [&] {
        for (std::size_t i = 0; i < filter_.variables.size(); ++i) values.push_back(deref(var_sym(base + i)));
        return true;
      });
    } catch (const PassAbandoned&) {
      found = false;
    }
    pass_limit_ = 0;
    undo(0);
    release(0);
    ancestors_.clear();
    pending_ = 0;
    distinct_used_ = 0;
    std::fill(use_count_.begin(), use_count_.end(), 0u);
    bound_ = 0;
    if (!found) return std::nullopt;
    return build_proof(values, evidence);
  }

  bool solve_goal(const Goal& goal, const Continuation& k) {
    Sym predicate = deref(goal[1]);
    if (solve_with_facts(goal, predicate, k)) return true;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> answered;
    if (solve_with_lemmas(goal, predicate, answered, k)) return true;
    if (saturated_) return false;
    return solve_with_rules(goal, predicate, answered, k);
  }

  // Forward closure, used once backward search has proven expensive. Rules are
  // re-run only when a lemma for one of their body predicates appeared in the last pass.

  std::uint64_t saturation_threshold() const { return 1024 + kb_.facts().size() + kb_.rules().size(); }

  void saturate() {
    std::size_t saved = bound_;
    bound_ = std::numeric_limits<std::size_t>::max();
    saturated_ = true;
    std::set<Sym> delta;
    for (bool first = true;; first = false) {
      std::set<Sym> fresh;
      for (std::uint32_t r = 0; r < kb_.rules().size(); ++r) {
        const Rule& rule = kb_.rules()[r];
        if (excluded_[rule.source] || rule.head.empty()) continue;
        bool touched = first || std::any_of(rule.body.begin(), rule.body.end(),
                                            [&](const Atom& a) { return a.p < 0 || delta.count(a.p); });
        if (!touched) continue;
        std::size_t base = allocate(rule);
        std::vector<Evidence> evidence(rule.body.size());
        solve_body(rule, base, 0, evidence, [&] {
          tick();
          std::size_t before = lemmas_.size();
          lemma_for(r, base, evidence);
          if (lemmas_.size() > before)
            for (const Atom& a : lemmas_.back().head) fresh.insert(a.p);
          return false;
        });
        release(base);
      }
      if (fresh.empty()) break;
      delta = std::move(fresh);
    }
    bound_ = saved;
  }

  bool goal_reachable() {
    std::size_t saved = bound_;
    bound_ = std::numeric_limits<std::size_t>::max();
    std::size_t mark = trail_.size();
    std::size_t base = allocate(filter_);
    std::vector<Evidence> evidence(filter_.body.size());
    bool found = solve_body(filter_, base, 0, evidence, [] { return true; });
    undo(mark);
    release(base);
    bound_ = saved;
    return found;
  }

  bool try_fact(const Goal& goal, std::uint32_t index, const Continuation& k) {
    const detail::Fact& fact = kb_.facts()[index];
    if (excluded_[fact.source]) return false;
    std::size_t mark = trail_.size();
    bool ok = unify_ground(goal, fact.atom) && k(Evidence{false, index, 0});
    undo(mark);
    return ok;
  }

  bool solve_with_facts(const Goal& goal, Sym predicate, const Continuation& k) {
    if (predicate >= 0) {
      if (const auto* list = kb_.facts_with_predicate(predicate)) {
        for (std::uint32_t index : *list)
          if (try_fact(goal, index, k)) return true;
      }
      return false;
    }
    for (std::uint32_t index = 0; index < kb_.facts().size(); ++index)
      if (try_fact(goal, index, k)) return true;
    return false;
  }

  bool try_lemma(const Goal& goal, AtomRef ref, std::vector<std::pair<std::uint32_t, std::uint32_t>>& answered,
                 const Continuation& k) {
    std::size_t mark = trail_.size();
    bool ok = false;
    if (unify_ground(goal, lemmas_[ref.owner].head[ref.atom])) {
      answered.emplace_back(ref.owner, ref.atom);
      add_closure(lemmas_[ref.owner]);
      ok = within_bound(0) && k(Evidence{true, ref.owner, ref.atom});
      remove_closure(lemmas_[ref.owner]);
    }
    undo(mark);
    return ok;
  }

  bool solve_with_lemmas(const Goal& goal, Sym predicate, std::vector<std::pair<std::uint32_t, std::uint32_t>>& answered,
                         const Continuation& k) {
    if (predicate >= 0) {
      auto it = lemma_heads_.find(predicate);
      if (it == lemma_heads_.end()) return false;
      std::size_t count = it->second.size();
      for (std::size_t j = 0; j < count; ++j) {
        AtomRef ref = lemma_heads_[predicate][j];
        if (try_lemma(goal, ref, answered, k)) return true;
      }
      return false;
    }
    std::size_t count = lemmas_.size();
    for (std::uint32_t l = 0; l < count; ++l) {
      for (std::uint32_t a = 0; a < lemmas_[l].head.size(); ++a)
        if (try_lemma(goal, {l, a}, answered, k)) return true;
    }
    return false;
  }

  std::vector<AtomRef> rule_candidates(Sym predicate) const {
    std::vector<AtomRef> out;
    if (predicate >= 0) {
      if (const auto* list = kb_.heads_with_predicate(predicate)) out = *list;
      const auto& wild = kb_.heads_with_variable_predicate();
      out.insert(out.end(), wild.begin(), wild.end());
      std::sort(out.begin(), out.end(), [](AtomRef a, AtomRef b) {
        return a.owner != b.owner ? a.owner < b.owner : a.atom < b.atom;
      });
      return out;
    }
    for (std::uint32_t r = 0; r < kb_.rules().size(); ++r)
      for (std::uint32_t h = 0; h < kb_.rules()[r].head.size(); ++h) out.push_back({r, h});
    return out;
  }

  bool solve_with_rules(const Goal& goal, Sym predicate, std::vector<std::pair<std::uint32_t, std::uint32_t>>& answered,
                        const Continuation& k) {
    std::vector<AtomRef> candidates = rule_candidates(predicate);
    if (candidates.empty() || has_variant_ancestor(goal)) return false;
    for (AtomRef cand : candidates) {
      const Rule& rule = kb_.rules()[cand.owner];
      if (excluded_[rule.source]) continue;
      tick();
      std::size_t base = allocate(rule);
      std::size_t mark = trail_.size();
      bool found = false;
      if (unify_head(rule.head[cand.atom], base, goal) && within_bound(1)) {
        ++pending_;
        ancestors_.push_back(goal);
        std::vector<Evidence> evidence(rule.body.size());
        found = solve_body(rule, base, 0, evidence, [&] {
          return complete(cand, base, evidence, answered, k);
        });
        ancestors_.pop_back();
        --pending_;
      }
      undo(mark);
      release(base);
      if (found) return true;
    }
    return false;
  }

  std::uint32_t lemma_for(std::uint32_t rule_id, std::size_t base, const std::vector<Evidence>& evidence) {
    const Rule& rule = kb_.rules()[rule_id];
    std::vector<Sym> key;
    key.reserve(rule.frontier.size());
    for (int v : rule.frontier) key.push_back(deref(var_sym(base + static_cast<std::size_t>(v))));
    auto found = lemma_keys_.find({rule_id, key});
    if (found != lemma_keys_.end()) return found->second;

    Lemma lemma;
    lemma.rule = rule_id;
    lemma.evidence = evidence;
    for (std::size_t v = 0; v < rule.variables.size(); ++v) {
      lemma.values.push_back(rule.existential[v] ? new_skolem() : deref(var_sym(base + v)));
    }
    auto value = [&](Sym s) { return s >= 0 ? s : lemma.values[var_index(s)]; };
    for (const Atom& a : rule.head) lemma.head.push_back({value(a.s), value(a.p), value(a.o)});
    auto id = static_cast<std::uint32_t>(lemmas_.size());
    for (const Evidence& ev : evidence) {
      if (!ev.from_lemma) continue;
      const auto& c = lemmas_[ev.index].closure;
      lemma.closure.insert(lemma.closure.end(), c.begin(), c.end());
    }
    lemma.closure.push_back(id);
    std::sort(lemma.closure.begin(), lemma.closure.end());
    lemma.closure.erase(std::unique(lemma.closure.begin(), lemma.closure.end()), lemma.closure.end());
    for (std::uint32_t h = 0; h < lemma.head.size(); ++h) lemma_heads_[lemma.head[h].p].push_back({id, h});
    lemmas_.push_back(std::move(lemma));
    use_count_.push_back(0);
    lemma_keys_.emplace(std::make_pair(rule_id, std::move(key)), id);
    return id;
  }

  bool complete(AtomRef cand, std::size_t base, const std::vector<Evidence>& evidence,
                std::vector<std::pair<std::uint32_t, std::uint32_t>>& answered, const Continuation& k) {
    std::uint32_t id = lemma_for(cand.owner, base, evidence);
    std::pair<std::uint32_t, std::uint32_t> answer{id, cand.atom};
    if (std::find(answered.begin(), answered.end(), answer) != answered.end()) return false;
    answered.push_back(answer);
    const Rule& rule = kb_.rules()[cand.owner];
    std::size_t mark = trail_.size();
    --pending_;
    add_closure(lemmas_[id]);
    bool ok = false;
    if (within_bound(0)) {
      for (std::size_t v = 0; v < rule.variables.size(); ++v) {
        if (!rule.existential[v]) continue;
        Sym var = var_sym(base + v);
        if (binding_[base + v] == kUnbound) bind(var, lemmas_[id].values[v]);
      }
      ok = k(Evidence{true, id, cand.atom});
    }
    undo(mark);
    remove_closure(lemmas_[id]);
    ++pending_;
    return ok;
  }

  // Proof extraction.

  struct Builder {
    Proof proof;
    std::map<std::uint32_t, StepRef> inference_of;
    std::map<std::pair<std::uint32_t, std::uint32_t>, StepRef> rule_extraction;
    std::map<std::uint32_t, StepRef> fact_extraction;
    std::map<std::pair<std::uint32_t, std::uint32_t>, StepRef> lemma_extraction;
    std::vector<std::pair<StepRef, std::uint32_t>> pending_parsing;  // extraction step, source index
  };

  static constexpr std::uint32_t kFilterSource = std::numeric_limits<std::uint32_t>::max();

  void collect_preorder(std::uint32_t id, std::vector<std::uint32_t>& order, std::vector<bool>& seen) const {
    if (seen[id]) return;
    seen[id] = true;
    order.push_back(id);
    for (const Evidence& ev : lemmas_[id].evidence)
      if (ev.from_lemma) collect_preorder(ev.index, order, seen);
  }

  void name_skolems(std::uint32_t id, std::vector<bool>& seen, std::map<Sym, n3::Term>& names, std::size_t& counter) const {
    if (seen[id]) return;
    seen[id] = true;
    const Lemma& l = lemmas_[id];
    for (const Evidence& ev : l.evidence)
      if (ev.from_lemma) name_skolems(ev.index, seen, names, counter);
    const Rule& rule = kb_.rules()[l.rule];
    for (std::size_t v = 0; v < rule.variables.size(); ++v) {
      if (!rule.existential[v] || names.count(l.values[v])) continue;
      std::string name;
      do {
        name = "sk" + std::to_string(counter++);
      } while (kb_.used_labels().count(name));
      names.emplace(l.values[v], n3::Term::existential(name));
    }
  }

  Proof build_proof(const std::vector<Sym>& filter_values, const std::vector<Evidence>& filter_evidence) {
    std::vector<std::uint32_t> order;
    std::vector<bool> seen(lemmas_.size(), false);
    for (const Evidence& ev : filter_evidence)
      if (ev.from_lemma) collect_preorder(ev.index, order, seen);

    std::map<Sym, n3::Term> names;
    std::size_t counter = 0;
    std::vector<bool> named(lemmas_.size(), false);
    for (const Evidence& ev : filter_evidence)
      if (ev.from_lemma) name_skolems(ev.index, named, names, counter);

    auto term = [&](Sym s) -> n3::Term {
      auto it = names.find(s);
      return it != names.end() ? it->second : constant(s);
    };
    auto triple = [&](const Atom& a) { return n3::Triple{term(a.s), term(a.p), term(a.o)}; };

    Builder b;
    b.proof.steps.resize(2 + order.size());
    b.proof.root = 0;
    for (std::size_t i = 0; i < order.size(); ++i) b.inference_of[order[i]] = 2 + i;

    auto add_step = [&](ProofStep step) {
      b.proof.steps.push_back(std::move(step));
      return b.proof.steps.size() - 1;
    };
    auto rule_ref = [&](std::uint32_t source, std::uint32_t index, const n3::Implication& imp) {
      auto key = std::make_pair(source, index);
      auto it = b.rule_extraction.find(key);
      if (it != b.rule_extraction.end()) return it->second;
      ProofStep step;
      step.kind = StepKind::Extraction;
      step.gives.implications.push_back(imp);
      StepRef ref = add_step(std::move(step));
      b.pending_parsing.emplace_back(ref, source);
      b.rule_extraction.emplace(key, ref);
      return ref;
    };
    auto evidence_ref = [&](const Evidence& ev) -> StepRef {
      if (!ev.from_lemma) {
        auto it = b.fact_extraction.find(ev.index);
        if (it != b.fact_extraction.end()) return it->second;
        const detail::Fact& fact = kb_.facts()[ev.index];
        ProofStep step;
        step.kind = StepKind::Extraction;
        step.gives.atoms.push_back(kb_.sources()[fact.source].document.body.atoms[fact.index]);
        StepRef ref = add_step(std::move(step));
        b.pending_parsing.emplace_back(ref, fact.source);
        b.fact_extraction.emplace(ev.index, ref);
        return ref;
      }
      StepRef inference = b.inference_of.at(ev.index);
      if (lemmas_[ev.index].head.size() <= 1) return inference;
      auto key = std::make_pair(ev.index, ev.atom);
      auto it = b.lemma_extraction.find(key);
      if (it != b.lemma_extraction.end()) return it->second;
      ProofStep step;
      step.kind = StepKind::Extraction;
      step.gives.atoms.push_back(triple(lemmas_[ev.index].head[ev.atom]));
      step.because = inference;
      StepRef ref = add_step(std::move(step));
      b.lemma_extraction.emplace(key, ref);
      return ref;
    };
    auto bindings = [&](const Rule& rule, const std::vector<Sym>& values) {
      std::vector<Binding> out;
      for (std::size_t v = 0; v < rule.variables.size(); ++v) out.push_back({rule.variables[v], term(values[v])});
      return out;
    };

    for (std::size_t i = 0; i < order.size(); ++i) {
      const Lemma& l = lemmas_[order[i]];
      const Rule& rule = kb_.rules()[l.rule];
      ProofStep step;
      step.kind = StepKind::Inference;
      for (const Atom& a : l.head) step.gives.atoms.push_back(triple(a));
      step.rule = rule_ref(rule.source, rule.index, kb_.sources()[rule.source].document.body.implications[rule.index]);
      for (const Evidence& ev : l.evidence) step.evidence.push_back(evidence_ref(ev));
      step.bindings = bindings(rule, l.values);
      b.proof.steps[2 + i] = std::move(step);
    }

    ProofStep filter_step;
    filter_step.kind = StepKind::Inference;
    auto value = [&](Sym s) { return s >= 0 ? s : filter_values[var_index(s)]; };
    for (const Atom& a : filter_.head) filter_step.gives.atoms.push_back(triple({value(a.s), value(a.p), value(a.o)}));
    filter_step.rule = rule_ref(kFilterSource, 0, filter_doc_.implications.front());
    for (const Evidence& ev : filter_evidence) filter_step.evidence.push_back(evidence_ref(ev));
    filter_step.bindings = bindings(filter_, filter_values);

    ProofStep root;
    root.kind = StepKind::Proof;
    root.gives = filter_step.gives;
    root.components.push_back(1);
    b.proof.steps[0] = std::move(root);
    b.proof.steps[1] = std::move(filter_step);

    std::map<std::uint32_t, StepRef> parsing;
    for (const auto& [extraction, source] : b.pending_parsing) {
      auto it = parsing.find(source);
      if (it == parsing.end()) {
        ProofStep step;
        step.kind = StepKind::Parsing;
        if (source == kFilterSource) {
          step.source = filter_source_;
          step.gives = filter_doc_;
        } else {
          step.source = kb_.sources()[source].iri;
          step.gives = kb_.sources()[source].document.body;
        }
        it = parsing.emplace(source, add_step(std::move(step))).first;
      }
      b.proof.steps[extraction].because = it->second;
    }
    b.proof.skolem_count = names.size();
    return std::move(b.proof);
  }
};

}  // namespace

ProveResult prove(const KnowledgeBase& kb, const FilterRule& filter, const Budget& budget, const ProveOptions& options) {
  Engine engine(kb, filter, budget, options);
  return engine.run();
}

}  // namespace pragproof::reason
