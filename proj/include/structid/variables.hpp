#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "structid/errors.hpp"

namespace structid {

using VarId = std::uint32_t;

// Immutable symbol table. Variable ids are dense 0..size()-1 and names are
// unique within a table. Polynomials hold a shared_ptr to their table;
// pointer identity defines the variable context.
class VarTable {
  public:
    static std::shared_ptr<const VarTable> make(std::vector<std::string> names) {
        return std::shared_ptr<const VarTable>(new VarTable(std::move(names)));
    }

    std::size_t size() const { return names_.size(); }

    const std::string& name(VarId id) const { return names_.at(id); }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    VarId id_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw ArgumentError("unknown variable: " + name);
        return it->second;
    }

    const std::vector<std::string>& names() const { return names_; }

  private:
    explicit VarTable(std::vector<std::string> names) : names_(std::move(names)) {
        for (VarId i = 0; i < names_.size(); ++i) {
            auto [it, fresh] = index_.emplace(names_[i], i);
            (void)it;
            if (!fresh) throw ArgumentError("duplicate variable name: " + names_[i]);
        }
    }

    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> index_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

struct Variable {
    VarId id = 0;
    VarTablePtr table;

    const std::string& name() const { return table->name(id); }
};

}  // namespace structid
