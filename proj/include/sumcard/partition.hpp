#pragma once
// Unifiable partitions of a query's atom set, the refinement order between
// them, and the signed chain-count coefficients over that order.
//
// A partition groups atoms that are meant to collapse onto a single data
// triple. Grouping is only sensible when the induced position-wise term
// identifications never equate two distinct resources; such partitions are
// kept, all others are pruned during enumeration. Each kept partition
// carries its unifier: every variable mapped to the least term of its
// connected component under the fixed total term order.

#include "sumcard/dictionary.hpp"
#include "sumcard/errors.hpp"
#include "sumcard/query.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace sumcard {

// Total order: every resource precedes every variable; ties by id.
struct TermOrder {
    static bool less(const Term& a, const Term& b) {
        if (a.kind != b.kind) return a.is_resource();
        return a.id < b.id;
    }
};

struct QueryPartition {
    std::vector<std::vector<std::uint32_t>> blocks;  // atom indices, canonical order
    std::vector<Term> unifier;                       // per variable id; identity when untouched
};

// Returns true iff a substitution can make the two atoms identical.
// Flat first-order unification: connect positions, fail when a connected
// component acquires two distinct resources.
inline bool atoms_unifiable(const Atom& a, const Atom& b) {
    // nodes: distinct terms of the two atoms
    std::vector<Term> terms;
    auto node = [&](Term t) -> std::size_t {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i] == t) return i;
        }
        terms.push_back(t);
        return terms.size() - 1;
    };
    std::size_t na[3], nb[3];
    for (int i = 0; i < 3; ++i) { na[i] = node(a.at(i)); nb[i] = node(b.at(i)); }

    std::vector<std::size_t> parent(terms.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    std::vector<ResourceId> res(terms.size(), kNoResource);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].is_resource()) res[i] = terms[i].id;
    }
    for (int i = 0; i < 3; ++i) {
        std::size_t ra = find(na[i]), rb = find(nb[i]);
        if (ra == rb) continue;
        if (res[ra] != kNoResource && res[rb] != kNoResource && res[ra] != res[rb]) return false;
        parent[ra] = rb;
        if (res[rb] == kNoResource) res[rb] = res[ra];
    }
    return true;
}

class PartitionBase {
public:
    static constexpr int kDefaultAtomCap = 12;

    explicit PartitionBase(const Query& q, int atom_cap = kDefaultAtomCap) : q_(&q) {
        if (static_cast<int>(q.size()) > atom_cap) {
            throw CapExceededError("general path intractable: query has " +
                                   std::to_string(q.size()) + " atoms, cap is " +
                                   std::to_string(atom_cap));
        }
        collect_terms();
        Builder builder(*this);
        builder.enumerate();
        build_refines();
    }

    const Query& query() const { return *q_; }
    const std::vector<QueryPartition>& partitions() const { return partitions_; }
    std::size_t size() const { return partitions_.size(); }

    // P_i refines into P_j: every block of P_i lies inside a block of P_j
    bool refines(std::size_t i, std::size_t j) const { return refines_[i][j]; }

    // signed chain count between comparable partitions; memoised recursion on
    // the identity  -K(P,P') = sum over P strictly-below P'' up-to P' of K(P'',P')
    std::int64_t kappa(std::size_t i, std::size_t j) const {
        if (!refines(i, j)) throw EstimationError("kappa requested outside the order");
        if (i == j) return 1;
        std::uint64_t key = i * partitions_.size() + j;
        auto it = kappa_memo_.find(key);
        if (it != kappa_memo_.end()) return it->second;
        std::int64_t sum = 0;
        for (std::size_t k = 0; k < partitions_.size(); ++k) {
            if (k != i && refines_[i][k] && refines_[k][j]) sum += kappa(k, j);
        }
        kappa_memo_.emplace(key, -sum);
        return -sum;
    }

    std::size_t singleton_index() const { return singleton_index_; }

private:
    const Query* q_;
    std::vector<QueryPartition> partitions_;
    std::vector<std::vector<bool>> refines_;
    std::size_t singleton_index_ = 0;
    mutable std::unordered_map<std::uint64_t, std::int64_t> kappa_memo_;

    std::vector<Term> terms_;                 // distinct terms of q
    std::vector<std::array<std::size_t, 3>> atom_terms_;  // per atom, term indices

    void collect_terms() {
        auto index_of = [&](Term t) -> std::size_t {
            for (std::size_t i = 0; i < terms_.size(); ++i) {
                if (terms_[i] == t) return i;
            }
            terms_.push_back(t);
            return terms_.size() - 1;
        };
        for (const Atom& a : q_->atoms()) {
            atom_terms_.push_back({index_of(a.s), index_of(a.p), index_of(a.o)});
        }
    }

    // Union-find over term indices with undo log; no path compression so
    // rollback is exact. Each root tracks the resource of its component (at
    // most one, else the union is rejected) and the least term.
    class Builder {
    public:
        explicit Builder(PartitionBase& base) : base_(base) {
            std::size_t n = base_.terms_.size();
            parent_.resize(n);
            rank_.assign(n, 0);
            res_.assign(n, kNoResource);
            least_.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                parent_[i] = i;
                least_[i] = base_.terms_[i];
                if (base_.terms_[i].is_resource()) res_[i] = base_.terms_[i].id;
            }
        }

        void enumerate() { recurse(0); }

    private:
        PartitionBase& base_;
        std::vector<std::size_t> parent_;
        std::vector<std::uint8_t> rank_;
        std::vector<ResourceId> res_;
        std::vector<Term> least_;
        std::vector<std::vector<std::uint32_t>> blocks_;

        struct UndoEntry {
            std::size_t child, parent;
            ResourceId parent_res;
            Term parent_least;
            std::uint8_t parent_rank;
        };
        std::vector<UndoEntry> log_;

        std::size_t find(std::size_t x) const {
            while (parent_[x] != x) x = parent_[x];
            return x;
        }

        bool unite(std::size_t a, std::size_t b) {
            std::size_t ra = find(a), rb = find(b);
            if (ra == rb) return true;
            if (res_[ra] != kNoResource && res_[rb] != kNoResource && res_[ra] != res_[rb])
                return false;
            if (rank_[ra] > rank_[rb]) std::swap(ra, rb);
            log_.push_back({ra, rb, res_[rb], least_[rb], rank_[rb]});
            parent_[ra] = rb;
            if (rank_[ra] == rank_[rb]) rank_[rb] += 1;
            if (res_[rb] == kNoResource) res_[rb] = res_[ra];
            if (TermOrder::less(least_[ra], least_[rb])) least_[rb] = least_[ra];
            return true;
        }

        void undo_to(std::size_t mark) {
            while (log_.size() > mark) {
                const UndoEntry& e = log_.back();
                parent_[e.child] = e.child;
                res_[e.parent] = e.parent_res;
                least_[e.parent] = e.parent_least;
                rank_[e.parent] = e.parent_rank;
                log_.pop_back();
            }
        }

        // connect atom `a` to atom `b` position-wise
        bool join_atoms(std::uint32_t a, std::uint32_t b, std::size_t& mark) {
            mark = log_.size();
            for (int i = 0; i < 3; ++i) {
                if (!unite(base_.atom_terms_[a][i], base_.atom_terms_[b][i])) {
                    undo_to(mark);
                    return false;
                }
            }
            return true;
        }

        void recurse(std::uint32_t atom) {
            if (atom == base_.q_->size()) {
                emit();
                return;
            }
            // index-based: recursion grows and shrinks blocks_, so references
            // into it do not survive the recursive call
            std::size_t existing = blocks_.size();
            for (std::size_t bi = 0; bi < existing; ++bi) {
                std::size_t mark = 0;
                if (join_atoms(atom, blocks_[bi].front(), mark)) {
                    blocks_[bi].push_back(atom);
                    recurse(atom + 1);
                    blocks_[bi].pop_back();
                    undo_to(mark);
                }
            }
            blocks_.emplace_back(1, atom);
            recurse(atom + 1);
            blocks_.pop_back();
        }

        void emit() {
            QueryPartition p;
            p.blocks = blocks_;
            p.unifier.resize(base_.q_->var_count());
            for (std::uint64_t v = 0; v < base_.q_->var_count(); ++v) p.unifier[v] = Term::variable(v);
            for (std::size_t i = 0; i < base_.terms_.size(); ++i) {
                if (base_.terms_[i].is_variable()) {
                    p.unifier[base_.terms_[i].id] = least_[find(i)];
                }
            }
            bool all_singletons = true;
            for (const auto& b : p.blocks) all_singletons &= b.size() == 1;
            if (all_singletons) base_.singleton_index_ = base_.partitions_.size();
            base_.partitions_.push_back(std::move(p));
        }
    };

    void build_refines() {
        std::size_t n = partitions_.size();
        refines_.assign(n, std::vector<bool>(n, false));
        std::size_t atom_count = q_->size();
        std::vector<std::uint32_t> block_of(atom_count);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::uint32_t bi = 0; bi < partitions_[j].blocks.size(); ++bi) {
                for (std::uint32_t a : partitions_[j].blocks[bi]) block_of[a] = bi;
            }
            for (std::size_t i = 0; i < n; ++i) {
                bool ok = true;
                for (const auto& block : partitions_[i].blocks) {
                    std::uint32_t target = block_of[block.front()];
                    for (std::uint32_t a : block) ok &= block_of[a] == target;
                    if (!ok) break;
                }
                refines_[i][j] = ok;
            }
        }
    }
};

}  // namespace sumcard
