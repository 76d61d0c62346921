#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "momentprop/errors.hpp"

namespace momentprop {

enum class SymbolKind : std::uint8_t { state, disturbance, control, constant };

using SymbolId = std::uint32_t;

inline const char* symbol_kind_name(SymbolKind k) {
    switch (k) {
        case SymbolKind::state: return "state";
        case SymbolKind::disturbance: return "disturbance";
        case SymbolKind::control: return "control";
        case SymbolKind::constant: return "constant";
    }
    return "?";
}

class SymbolTable {
public:
    SymbolId declare(std::string name, SymbolKind kind) {
        if (index_.count(name) != 0) {
            throw ValidationError("symbol '" + name + "' declared twice");
        }
        const SymbolId id = static_cast<SymbolId>(names_.size());
        index_.emplace(name, id);
        names_.push_back(std::move(name));
        kinds_.push_back(kind);
        return id;
    }

    std::optional<SymbolId> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(SymbolId id) const { return names_.at(id); }
    SymbolKind kind(SymbolId id) const { return kinds_.at(id); }
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::vector<SymbolKind> kinds_;
    std::unordered_map<std::string, SymbolId> index_;
};

}  // namespace momentprop
