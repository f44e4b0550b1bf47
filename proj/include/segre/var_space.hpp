#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "segre/errors.hpp"

namespace segre {

/// What a block of variables stands for.
enum class Role {
    W,       // holomorphic CR-tangent coordinates w
    Z,       // holomorphic transverse coordinates z
    Zeta,    // complexified conjugate of w
    Xi,      // complexified conjugate of z
    Chain,   // chain parameters u{i}
    Base,    // symbolic basepoint parameters
    Leaf,    // Segre leaf parameters
    Coord,   // plain coordinates of a vector-field system
    Time,    // flow times
    RealW,   // real-form inputs: w, wbar, x
    RealWbar,
    RealX,
};

struct Variable {
    std::string name;
    Role role;
    std::size_t block;
    std::size_t index;  // position inside the block
};

struct Block {
    std::string label;
    Role role;
    std::vector<std::size_t> vars;
};

class VarSpace;
using VarSpacePtr = std::shared_ptr<const VarSpace>;

/*
 * An ordered list of named variables grouped into role-tagged blocks, with
 * an optional sigma-pairing between blocks. Immutable once built; shared by
 * every Series defined over it.
 */
class VarSpace {
public:
    class Builder {
    public:
        /// Adds `count` variables named prefix1..prefixN (or prefix_1.. when `underscore`).
        Builder& block(const std::string& label, Role role, std::size_t count, const std::string& prefix,
                       bool underscore = false) {
            std::vector<std::string> names;
            for (std::size_t j = 1; j <= count; ++j)
                names.push_back(prefix + (underscore ? "_" : "") + std::to_string(j));
            return named_block(label, role, names);
        }

        Builder& named_block(const std::string& label, Role role, const std::vector<std::string>& names) {
            Block b{label, role, {}};
            const std::size_t bi = space_->blocks_.size();
            for (std::size_t j = 0; j < names.size(); ++j) {
                if (space_->by_name_.count(names[j]))
                    throw Error("duplicate variable name '" + names[j] + "'");
                const std::size_t vi = space_->vars_.size();
                space_->vars_.push_back({names[j], role, bi, j});
                space_->by_name_[names[j]] = vi;
                space_->partner_.push_back(std::nullopt);
                b.vars.push_back(vi);
            }
            space_->blocks_.push_back(std::move(b));
            return *this;
        }

        /// Declares blocks `a` and `b` as sigma-partners (variable-wise, same length).
        Builder& pair(const std::string& a, const std::string& b) {
            const auto& ba = space_->blocks_.at(space_->block_index(a));
            const auto& bb = space_->blocks_.at(space_->block_index(b));
            if (ba.vars.size() != bb.vars.size()) throw Error("sigma-paired blocks differ in size");
            for (std::size_t j = 0; j < ba.vars.size(); ++j) {
                space_->partner_[ba.vars[j]] = bb.vars[j];
                space_->partner_[bb.vars[j]] = ba.vars[j];
            }
            return *this;
        }

        /// Declares a block fixed by sigma (real parameters such as chain times).
        Builder& self_paired(const std::string& a) {
            for (auto v : space_->blocks_.at(space_->block_index(a)).vars) space_->partner_[v] = v;
            return *this;
        }

        VarSpacePtr build() { return std::move(space_); }

    private:
        std::shared_ptr<VarSpace> space_{new VarSpace()};
    };

    std::size_t size() const { return vars_.size(); }
    const Variable& var(std::size_t i) const { return vars_.at(i); }
    const std::vector<Variable>& vars() const { return vars_; }
    const std::vector<Block>& blocks() const { return blocks_; }

    std::optional<std::size_t> find(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index(const std::string& name) const {
        auto i = find(name);
        if (!i) throw UnknownVariable("unknown variable '" + name + "'");
        return *i;
    }

    bool has_block(const std::string& label) const {
        for (const auto& b : blocks_)
            if (b.label == label) return true;
        return false;
    }

    std::size_t block_index(const std::string& label) const {
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i].label == label) return i;
        throw UnknownVariable("unknown variable block '" + label + "'");
    }

    const Block& block(const std::string& label) const { return blocks_[block_index(label)]; }

    /// Variable indices of the listed blocks, concatenated in order.
    std::vector<std::size_t> indices_of(const std::vector<std::string>& labels) const {
        std::vector<std::size_t> out;
        for (const auto& l : labels) {
            const auto& b = block(l);
            out.insert(out.end(), b.vars.begin(), b.vars.end());
        }
        return out;
    }

    std::optional<std::size_t> partner(std::size_t i) const { return partner_.at(i); }

    bool fully_paired() const {
        for (const auto& p : partner_)
            if (!p) return false;
        return true;
    }

    friend bool operator==(const VarSpace& a, const VarSpace& b) {
        if (&a == &b) return true;
        if (a.vars_.size() != b.vars_.size() || a.blocks_.size() != b.blocks_.size()) return false;
        for (std::size_t i = 0; i < a.vars_.size(); ++i)
            if (a.vars_[i].name != b.vars_[i].name || a.vars_[i].role != b.vars_[i].role) return false;
        for (std::size_t i = 0; i < a.blocks_.size(); ++i)
            if (a.blocks_[i].label != b.blocks_[i].label) return false;
        return a.partner_ == b.partner_;
    }

private:
    VarSpace() = default;

    std::vector<Variable> vars_;
    std::vector<Block> blocks_;
    std::vector<std::optional<std::size_t>> partner_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

inline bool same_space(const VarSpacePtr& a, const VarSpacePtr& b) { return a == b || *a == *b; }

// Standard spaces -----------------------------------------------------------

/// (w, z, zeta, xi) with sigma pairing w<->zeta, z<->xi.
inline VarSpacePtr ambient_space(std::size_t m, std::size_t d) {
    return VarSpace::Builder()
        .block("w", Role::W, m, "w")
        .block("z", Role::Z, d, "z")
        .block("zeta", Role::Zeta, m, "zeta")
        .block("xi", Role::Xi, d, "xi")
        .pair("w", "zeta")
        .pair("z", "xi")
        .build();
}

/// Intrinsic chart (w, zeta, xi) of the complexified manifold.
inline VarSpacePtr chart_space(std::size_t m, std::size_t d) {
    return VarSpace::Builder()
        .block("w", Role::W, m, "w")
        .block("zeta", Role::Zeta, m, "zeta")
        .block("xi", Role::Xi, d, "xi")
        .pair("w", "zeta")
        .build();
}

/// Real-form inputs (w, wbar, x) for y = h(w, wbar, x).
inline VarSpacePtr real_space(std::size_t m, std::size_t d) {
    return VarSpace::Builder()
        .block("w", Role::RealW, m, "w")
        .block("wbar", Role::RealWbar, m, "wbar")
        .block("x", Role::RealX, d, "x")
        .pair("w", "wbar")
        .self_paired("x")
        .build();
}

/// Chain parameters u{i}_j for i=1..k, j=1..m; optional symbolic basepoint
/// parameters wp_j, zetap_j, xip_j.
inline VarSpacePtr chain_space(std::size_t m, std::size_t d, std::size_t k, bool symbolic_base) {
    VarSpace::Builder b;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::string label = "u" + std::to_string(i);
        b.block(label, Role::Chain, m, label, true);
        b.self_paired(label);
    }
    if (symbolic_base) {
        b.block("wp", Role::Base, m, "wp", true);
        b.block("zetap", Role::Base, m, "zetap", true);
        b.block("xip", Role::Base, d, "xip", true);
        b.pair("wp", "zetap");
    }
    return b.build();
}

inline std::string chain_block(std::size_t i) { return "u" + std::to_string(i); }

}  // namespace segre
