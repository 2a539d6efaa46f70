#include "impcheck/program_automaton.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace impcheck {

void ProgramAutomaton::sort_edges() {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.stmt.text() != b.stmt.text()) return a.stmt.text() < b.stmt.text();
        return a.dst < b.dst;
    });
}

std::vector<const ProgramAutomaton::Edge*> ProgramAutomaton::out(int loc) const {
    std::vector<const Edge*> result;
    for (const auto& e : edges)
        if (e.src == loc) result.push_back(&e);
    return result;
}

std::vector<Statement> ProgramAutomaton::alphabet() const {
    std::vector<Statement> sigma;
    for (const auto& e : edges) sigma.push_back(e.stmt);
    std::sort(sigma.begin(), sigma.end());
    sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
    return sigma;
}

namespace {

class Builder {
  public:
    explicit Builder(bool fuse) : fuse_(fuse) {}

    int fresh() {
        names_.push_back("l" + std::to_string(names_.size()));
        return static_cast<int>(names_.size()) - 1;
    }

    void edge(int src, Statement stmt, int dst) {
        edges_.push_back({src, std::move(stmt), dst});
    }

    // Lowers a statement list starting at `entry`. If `exit_to` is set the
    // block's fall-through control ends exactly there; otherwise a fresh
    // location is allocated on demand. Returns the location where control
    // ends up.
    int block(const std::vector<AstStmt>& stmts, int entry, std::optional<int> exit_to) {
        int cur = entry;
        std::vector<Statement> run;
        for (size_t i = 0; i < stmts.size(); ++i) {
            const AstStmt& s = stmts[i];
            bool last = i + 1 == stmts.size();
            switch (s.kind) {
                case AstStmt::Kind::Assign: {
                    Statement st = Statement::assign(s.var, *s.rhs);
                    if (fuse_) {
                        run.push_back(std::move(st));
                        if (last) cur = flush(run, cur, exit_to);
                    } else {
                        int next = (last && exit_to) ? *exit_to : fresh();
                        edge(cur, std::move(st), next);
                        cur = next;
                    }
                    break;
                }
                case AstStmt::Kind::Havoc: {
                    cur = flush(run, cur, std::nullopt);
                    int next = (last && exit_to) ? *exit_to : fresh();
                    edge(cur, Statement::havoc(s.var), next);
                    cur = next;
                    break;
                }
                case AstStmt::Kind::Assume: {
                    cur = flush(run, cur, std::nullopt);
                    int next = (last && exit_to) ? *exit_to : fresh();
                    edge(cur, Statement::assume(*s.cond), next);
                    cur = next;
                    break;
                }
                case AstStmt::Kind::Assert: {
                    cur = flush(run, cur, std::nullopt);
                    int err = fresh();
                    errors_.insert(err);
                    edge(cur, Statement::assume(s.cond->pushed_negation()), err);
                    int next = (last && exit_to) ? *exit_to : fresh();
                    edge(cur, Statement::assume(*s.cond), next);
                    cur = next;
                    break;
                }
                case AstStmt::Kind::If: {
                    cur = flush(run, cur, std::nullopt);
                    int join = (last && exit_to) ? *exit_to : fresh();
                    if (s.then_body.empty()) {
                        edge(cur, Statement::assume(*s.cond), join);
                    } else {
                        int then_entry = fresh();
                        edge(cur, Statement::assume(*s.cond), then_entry);
                        block(s.then_body, then_entry, join);
                    }
                    BoolExpr neg = s.cond->pushed_negation();
                    if (s.else_body.empty()) {
                        edge(cur, Statement::assume(std::move(neg)), join);
                    } else {
                        int else_entry = fresh();
                        edge(cur, Statement::assume(std::move(neg)), else_entry);
                        block(s.else_body, else_entry, join);
                    }
                    cur = join;
                    break;
                }
                case AstStmt::Kind::While: {
                    cur = flush(run, cur, std::nullopt);
                    int head = cur;
                    if (s.then_body.empty()) {
                        edge(head, Statement::assume(*s.cond), head);
                    } else {
                        int body_entry = fresh();
                        edge(head, Statement::assume(*s.cond), body_entry);
                        block(s.then_body, body_entry, head);
                    }
                    int next = (last && exit_to) ? *exit_to : fresh();
                    edge(head, Statement::assume(s.cond->pushed_negation()), next);
                    cur = next;
                    break;
                }
            }
        }
        cur = flush(run, cur, exit_to);
        if (exit_to && cur != *exit_to) {
            // Reached only by an empty block whose fall-through must land on
            // exit_to; the callers above never produce that combination.
            throw std::logic_error("dangling block exit");
        }
        return cur;
    }

    std::vector<std::string> names_;
    std::vector<ProgramAutomaton::Edge> edges_;
    std::set<int> errors_;

  private:
    int flush(std::vector<Statement>& run, int cur, std::optional<int> target) {
        if (run.empty()) {
            if (target && cur != *target) throw std::logic_error("dangling block exit");
            return cur;
        }
        int next = target ? *target : fresh();
        edge(cur, run.size() == 1 ? run[0] : Statement::seq(run), next);
        run.clear();
        return next;
    }

    bool fuse_;
};

}  // namespace

ProgramAutomaton lower(const Program& program, const LowerOptions& opts) {
    Builder b(opts.fuse_assignments);
    int init = b.fresh();
    b.block(program.body, init, std::nullopt);

    ProgramAutomaton pa;
    pa.vars = program.vars;
    std::sort(pa.vars.begin(), pa.vars.end());

    int n = static_cast<int>(b.names_.size());
    std::vector<char> keep(n, 1);
    if (opts.prune && !b.errors_.empty()) {
        // Keep locations both reachable from the initial location and able
        // to reach an error location.
        std::vector<char> fwd(n, 0), bwd(n, 0);
        std::vector<int> work{init};
        fwd[init] = 1;
        while (!work.empty()) {
            int u = work.back();
            work.pop_back();
            for (const auto& e : b.edges_)
                if (e.src == u && !fwd[e.dst]) {
                    fwd[e.dst] = 1;
                    work.push_back(e.dst);
                }
        }
        for (int e : b.errors_)
            if (!bwd[e]) {
                bwd[e] = 1;
                work.push_back(e);
            }
        while (!work.empty()) {
            int u = work.back();
            work.pop_back();
            for (const auto& e : b.edges_)
                if (e.dst == u && !bwd[e.src]) {
                    bwd[e.src] = 1;
                    work.push_back(e.src);
                }
        }
        for (int i = 0; i < n; ++i) keep[i] = (fwd[i] && bwd[i]) || i == init;
    }

    std::vector<int> remap(n, -1);
    for (int i = 0; i < n; ++i) {
        if (keep[i]) {
            remap[i] = static_cast<int>(pa.names.size());
            pa.names.push_back("l" + std::to_string(pa.names.size()));
        }
    }
    pa.initial = remap[init];
    for (int e : b.errors_)
        if (keep[e]) pa.errors.insert(remap[e]);
    for (auto& e : b.edges_)
        if (keep[e.src] && keep[e.dst])
            pa.edges.push_back({remap[e.src], std::move(e.stmt), remap[e.dst]});
    pa.sort_edges();
    return pa;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

// Edge labels in the style of the usual CFG drawings: bare guard text for
// assume edges, statement text otherwise.
std::string display_label(const Statement& st) {
    if (st.kind() == Statement::Kind::Assume) return st.guard().text();
    return st.text();
}

}  // namespace

std::string to_dot(const ProgramAutomaton& pa) {
    std::ostringstream os;
    os << "digraph program {\n  rankdir=TB;\n";
    os << "  __start [shape=point];\n";
    for (int i = 0; i < pa.num_locations(); ++i) {
        os << "  " << pa.names[i] << " [shape=" << (pa.is_error(i) ? "doublecircle" : "circle")
           << "];\n";
    }
    os << "  __start -> " << pa.names[pa.initial] << ";\n";
    for (const auto& e : pa.edges) {
        os << "  " << pa.names[e.src] << " -> " << pa.names[e.dst] << " [label=\""
           << dot_escape(display_label(e.stmt)) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::vector<Word> error_words_up_to(const ProgramAutomaton& pa, size_t max_len,
                                    size_t max_count) {
    std::vector<Word> result;
    struct Item {
        int loc;
        Word word;
    };
    std::vector<Item> frontier{{pa.initial, {}}};
    if (pa.is_error(pa.initial)) result.push_back({});
    for (size_t len = 0; len < max_len && !frontier.empty(); ++len) {
        std::vector<Item> next;
        for (const auto& item : frontier) {
            for (const auto& e : pa.edges) {
                if (e.src != item.loc) continue;
                Item succ{e.dst, item.word};
                succ.word.push_back(e.stmt);
                if (pa.is_error(e.dst)) {
                    result.push_back(succ.word);
                    if (result.size() >= max_count)
                        throw std::runtime_error("error_words_up_to: too many words");
                }
                next.push_back(std::move(succ));
                if (next.size() >= max_count)
                    throw std::runtime_error("error_words_up_to: frontier too large");
            }
        }
        frontier = std::move(next);
    }
    return result;
}

bool replays_to_error(const ProgramAutomaton& pa, const Word& word) {
    std::set<int> cur{pa.initial};
    for (const auto& st : word) {
        std::set<int> next;
        for (const auto& e : pa.edges)
            if (cur.count(e.src) && e.stmt == st) next.insert(e.dst);
        cur = std::move(next);
        if (cur.empty()) return false;
    }
    for (int loc : cur)
        if (pa.is_error(loc)) return true;
    return false;
}

}  // namespace impcheck
