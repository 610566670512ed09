#include "kitbench/species.hpp"

#include <algorithm>
#include <numeric>

#include "kitbench/errors.hpp"
#include "kitbench/util.hpp"

namespace kitbench {

namespace {

std::string perm_text(const std::vector<int>& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i != 0) out += ' ';
        out += std::to_string(p[i]);
    }
    out += ')';
    return out;
}

int perm_rank(const std::vector<std::vector<int>>& perms, const std::vector<int>& sigma) {
    const auto it = std::lower_bound(perms.begin(), perms.end(), sigma);
    if (it == perms.end() || *it != sigma) return -1;
    return static_cast<int>(it - perms.begin());
}

} // namespace

// --- builder -------------------------------------------------------------

SetSpecies::Builder::Builder(int max_arity) {
    if (max_arity < 0)
        fail(ErrorKind::IndexOutOfRange, "a species needs a nonnegative top arity");
    if (max_arity > 6)
        fail(ErrorKind::GroupTooLarge,
             "permutation tables past arity 6 grow factorially; got arity " +
                 std::to_string(max_arity));
    max_arity_ = max_arity;
    perms_.resize(static_cast<std::size_t>(max_arity) + 1);
    names_.resize(perms_.size());
    action_.resize(perms_.size());
    for (int n = 0; n <= max_arity; ++n) {
        perms_[static_cast<std::size_t>(n)] = all_permutations(n);
        action_[static_cast<std::size_t>(n)].resize(
            perms_[static_cast<std::size_t>(n)].size());
    }
}

int SetSpecies::Builder::add_element(int arity, std::string name) {
    if (arity < 0 || arity > max_arity_)
        fail(ErrorKind::IndexOutOfRange,
             "arity " + std::to_string(arity) + " outside [0, " + std::to_string(max_arity_) + "]");
    auto& names = names_[static_cast<std::size_t>(arity)];
    if (name.empty()) name = std::to_string(arity) + "." + std::to_string(names.size());
    names.push_back(std::move(name));
    for (auto& row : action_[static_cast<std::size_t>(arity)]) row.push_back(-1);
    return static_cast<int>(names.size()) - 1;
}

void SetSpecies::Builder::set_action(int arity, const std::vector<int>& sigma, int x, int image) {
    if (arity < 0 || arity > max_arity_)
        fail(ErrorKind::IndexOutOfRange,
             "arity " + std::to_string(arity) + " outside [0, " + std::to_string(max_arity_) + "]");
    const auto& perms = perms_[static_cast<std::size_t>(arity)];
    if (static_cast<int>(sigma.size()) != arity || !is_permutation_vec(sigma))
        fail(ErrorKind::TypeMismatch,
             perm_text(sigma) + " is not a permutation of " + std::to_string(arity) +
                 " positions");
    const int rank = perm_rank(perms, sigma);
    const int count = static_cast<int>(names_[static_cast<std::size_t>(arity)].size());
    if (x < 0 || x >= count || image < 0 || image >= count)
        fail(ErrorKind::UnknownElement,
             "no element with that index at arity " + std::to_string(arity));
    int& slot = action_[static_cast<std::size_t>(arity)][static_cast<std::size_t>(rank)]
                       [static_cast<std::size_t>(x)];
    if (slot != -1 && slot != image)
        fail(ErrorKind::TypeMismatch,
             "action of " + perm_text(sigma) + " on element " + std::to_string(x) +
                 " at arity " + std::to_string(arity) + " set twice with different results");
    slot = image;
}

SetSpecies SetSpecies::Builder::build(bool validate) {
    if (validate) {
        for (int n = 0; n <= max_arity_; ++n) {
            const auto& perms = perms_[static_cast<std::size_t>(n)];
            const auto& table = action_[static_cast<std::size_t>(n)];
            const int count = static_cast<int>(names_[static_cast<std::size_t>(n)].size());
            for (std::size_t s = 0; s < perms.size(); ++s)
                for (int x = 0; x < count; ++x)
                    if (table[s][static_cast<std::size_t>(x)] == -1)
                        fail(ErrorKind::UnknownElement,
                             "action of " + perm_text(perms[s]) + " undefined on element " +
                                 std::to_string(x) + " at arity " + std::to_string(n));
            if (count > 0 && !perms.empty())
                for (int x = 0; x < count; ++x)
                    if (table[0][static_cast<std::size_t>(x)] != x)
                        fail(ErrorKind::BadIdentity,
                             "identity permutation moves element " + std::to_string(x) +
                                 " at arity " + std::to_string(n));
            for (std::size_t s = 0; s < perms.size(); ++s)
                for (std::size_t r = 0; r < perms.size(); ++r) {
                    const int composed = perm_rank(perms, compose_perm(perms[s], perms[r]));
                    for (int x = 0; x < count; ++x) {
                        const int stepwise =
                            table[s][static_cast<std::size_t>(
                                table[r][static_cast<std::size_t>(x)])];
                        if (table[static_cast<std::size_t>(composed)]
                                 [static_cast<std::size_t>(x)] != stepwise)
                            fail(ErrorKind::TypeMismatch,
                                 "action is not functorial on element " + std::to_string(x) +
                                     " at arity " + std::to_string(n) + " along " +
                                     perm_text(perms[r]) + " then " + perm_text(perms[s]));
                    }
                }
        }
    }
    SetSpecies out;
    out.perms_ = std::move(perms_);
    out.names_ = std::move(names_);
    out.action_ = std::move(action_);
    return out;
}

// --- accessors -------------------------------------------------------------

int SetSpecies::size(int arity) const {
    if (arity < 0 || arity > max_arity()) return 0;
    return static_cast<int>(names_[static_cast<std::size_t>(arity)].size());
}

int SetSpecies::total_size() const {
    int total = 0;
    for (int n = 0; n <= max_arity(); ++n) total += size(n);
    return total;
}

const std::string& SetSpecies::element_name(int arity, int x) const {
    if (arity < 0 || arity > max_arity() || x < 0 || x >= size(arity))
        fail(ErrorKind::UnknownElement,
             "no element " + std::to_string(x) + " at arity " + std::to_string(arity));
    return names_[static_cast<std::size_t>(arity)][static_cast<std::size_t>(x)];
}

const std::vector<std::vector<int>>& SetSpecies::permutations(int arity) const {
    if (arity < 0 || arity > max_arity())
        fail(ErrorKind::IndexOutOfRange,
             "arity " + std::to_string(arity) + " outside [0, " + std::to_string(max_arity()) +
                 "]");
    return perms_[static_cast<std::size_t>(arity)];
}

int SetSpecies::act(int arity, const std::vector<int>& sigma, int x) const {
    const auto& perms = permutations(arity);
    if (static_cast<int>(sigma.size()) != arity || !is_permutation_vec(sigma))
        fail(ErrorKind::TypeMismatch,
             perm_text(sigma) + " is not a permutation of " + std::to_string(arity) +
                 " positions");
    return act_rank(arity, perm_rank(perms, sigma), x);
}

int SetSpecies::act_rank(int arity, int rank, int x) const {
    if (arity < 0 || arity > max_arity() || rank < 0 ||
        rank >= static_cast<int>(perms_[static_cast<std::size_t>(arity)].size()))
        fail(ErrorKind::IndexOutOfRange, "no permutation of that rank at arity " +
                                             std::to_string(arity));
    if (x < 0 || x >= size(arity))
        fail(ErrorKind::UnknownElement,
             "no element " + std::to_string(x) + " at arity " + std::to_string(arity));
    return action_[static_cast<std::size_t>(arity)][static_cast<std::size_t>(rank)]
                  [static_cast<std::size_t>(x)];
}

// --- factories --------------------------------------------------------------

SetSpecies free_set_species(const std::vector<int>& copies) {
    if (copies.empty())
        fail(ErrorKind::IndexOutOfRange, "a species needs at least the arity-0 slot");
    SetSpecies::Builder b(static_cast<int>(copies.size()) - 1);
    for (int n = 0; n < static_cast<int>(copies.size()); ++n) {
        const auto perms = all_permutations(n);
        const int order = static_cast<int>(perms.size());
        for (int c = 0; c < copies[static_cast<std::size_t>(n)]; ++c) {
            const int first = b.add_element(
                n, std::to_string(n) + "/" + std::to_string(c) + "/0");
            for (int r = 1; r < order; ++r)
                b.add_element(n, std::to_string(n) + "/" + std::to_string(c) + "/" +
                                     std::to_string(r));
            for (int s = 0; s < order; ++s)
                for (int r = 0; r < order; ++r) {
                    const auto image = compose_perm(perms[static_cast<std::size_t>(s)],
                                                    perms[static_cast<std::size_t>(r)]);
                    const auto it = std::lower_bound(perms.begin(), perms.end(), image);
                    b.set_action(n, perms[static_cast<std::size_t>(s)], first + r,
                                 first + static_cast<int>(it - perms.begin()));
                }
        }
    }
    return b.build(true);
}

SetSpecies regular_set_species(int max_arity) {
    if (max_arity < 0)
        fail(ErrorKind::IndexOutOfRange, "a species needs a nonnegative top arity");
    return free_set_species(std::vector<int>(static_cast<std::size_t>(max_arity) + 1, 1));
}

SetSpecies point_set_species(int max_arity, int at_arity) {
    SetSpecies::Builder b(max_arity);
    const int x = b.add_element(at_arity, "pt");
    for (const auto& sigma : all_permutations(at_arity)) b.set_action(at_arity, sigma, x, x);
    return b.build(true);
}

SetSpecies empty_set_species(int max_arity) {
    SetSpecies::Builder b(max_arity);
    return b.build(true);
}

// --- analytic evaluation ------------------------------------------------------

AnalyticOrbits analytic_eval_set(const SetSpecies& f, int set_size, std::size_t budget) {
    if (set_size < 0)
        fail(ErrorKind::IndexOutOfRange, "the argument set needs a nonnegative size");
    AnalyticOrbits out;
    out.per_arity.assign(static_cast<std::size_t>(f.max_arity()) + 1, 0);
    for (int n = 0; n <= f.max_arity(); ++n) {
        const int count = f.size(n);
        if (count == 0) continue;
        std::size_t block = 1;
        bool overflow = false;
        for (int i = 0; i < n; ++i) {
            if (set_size != 0 && block > budget / static_cast<std::size_t>(set_size))
                overflow = true;
            block *= static_cast<std::size_t>(set_size);
        }
        const std::size_t pairs = block * static_cast<std::size_t>(count);
        if (overflow || (block != 0 && pairs / block != static_cast<std::size_t>(count)) ||
            pairs > budget)
            fail(ErrorKind::BudgetExceeded,
                 "analytic evaluation at arity " + std::to_string(n) + " needs more than " +
                     std::to_string(budget) + " pairs");
        if (block == 0) continue;  // no tuples to pair the elements with

        const auto encode = [&](int x, const std::vector<int>& tuple) {
            std::size_t code = static_cast<std::size_t>(x);
            for (int v : tuple) code = code * static_cast<std::size_t>(set_size) +
                                       static_cast<std::size_t>(v);
            return code;
        };
        const auto decode = [&](std::size_t code) {
            std::vector<int> tuple(static_cast<std::size_t>(n));
            for (int i = n - 1; i >= 0; --i) {
                tuple[static_cast<std::size_t>(i)] =
                    static_cast<int>(code % static_cast<std::size_t>(set_size));
                code /= static_cast<std::size_t>(set_size);
            }
            return std::pair<int, std::vector<int>>(static_cast<int>(code), std::move(tuple));
        };

        UnionFind uf(static_cast<int>(pairs));
        const auto& perms = f.permutations(n);
        std::vector<int> pulled(static_cast<std::size_t>(n));
        for (int s = 1; s < static_cast<int>(perms.size()); ++s) {
            const auto& sigma = perms[static_cast<std::size_t>(s)];
            for (std::size_t pair = 0; pair < pairs; ++pair) {
                auto [x, tuple] = decode(pair);
                for (int i = 0; i < n; ++i)
                    pulled[static_cast<std::size_t>(i)] =
                        tuple[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])];
                uf.unite(static_cast<int>(encode(f.act_rank(n, s, x), tuple)),
                         static_cast<int>(encode(x, pulled)));
            }
        }
        std::vector<char> seen(pairs, 0);
        for (std::size_t pair = 0; pair < pairs; ++pair) {
            const int root = uf.find(static_cast<int>(pair));
            if (seen[static_cast<std::size_t>(root)]) continue;
            seen[static_cast<std::size_t>(root)] = 1;
            auto [x, tuple] = decode(pair);
            out.per_arity[static_cast<std::size_t>(n)] += 1;
            out.reps.push_back({n, x, std::move(tuple)});
        }
    }
    for (int c : out.per_arity) out.total += c;
    return out;
}

// --- freeness and polynomial coefficients ---------------------------------------

SetFreeness is_free_species(const SetSpecies& f) {
    for (int n = 0; n <= f.max_arity(); ++n) {
        const auto& perms = f.permutations(n);
        for (int x = 0; x < f.size(n); ++x)
            for (int s = 1; s < static_cast<int>(perms.size()); ++s)
                if (f.act_rank(n, s, x) == x)
                    return {false, n, x, perms[static_cast<std::size_t>(s)]};
    }
    return {};
}

PolynomialReport polynomial_coefficients(const SetSpecies& f) {
    PolynomialReport out;
    const SetFreeness freeness = is_free_species(f);
    if (!freeness.free) {
        out.free = false;
        out.arity = freeness.arity;
        out.elem = freeness.elem;
        out.fixing = freeness.fixing;
        out.detail = "the permutation " + perm_text(freeness.fixing) + " fixes element " +
                     std::to_string(freeness.elem) + " at arity " +
                     std::to_string(freeness.arity);
        return out;
    }
    out.coefficients.assign(static_cast<std::size_t>(f.max_arity()) + 1, 0);
    for (int n = 0; n <= f.max_arity(); ++n) {
        const int count = f.size(n);
        if (count == 0) continue;
        UnionFind uf(count);
        for (int x = 0; x < count; ++x)
            for (int s = 1; s < static_cast<int>(f.permutations(n).size()); ++s)
                uf.unite(x, f.act_rank(n, s, x));
        out.coefficients[static_cast<std::size_t>(n)] = uf.class_count();
    }
    return out;
}

} // namespace kitbench
