#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace confsym {

// The toolkit works over a closed alphabet: coordinates, jet coordinates,
// reduced-ODE unknowns with their derivative symbols, and named parameters.
// Symbols are interned to small integer ids so evaluation environments can be
// flat arrays.
enum class SymKind : std::uint8_t { Variable, Parameter };

struct SymbolInfo {
    std::string_view name;
    SymKind kind;
    bool positive;  // known strictly positive on the working domain
};

namespace sym {
// Variables.
inline constexpr int t = 0;
inline constexpr int x = 1;
inline constexpr int u = 2;
inline constexpr int u_t = 3;
inline constexpr int u_x = 4;
inline constexpr int u_xx = 5;
inline constexpr int u_xxx = 6;
inline constexpr int u_xt = 7;
inline constexpr int u_xxt = 8;
inline constexpr int zeta = 9;
inline constexpr int omega = 10;
inline constexpr int s = 11;
inline constexpr int Psi = 12;
inline constexpr int Psi_1 = 13;
inline constexpr int Psi_2 = 14;
inline constexpr int Psi_3 = 15;
inline constexpr int Phi = 16;
inline constexpr int Phi_1 = 17;
inline constexpr int Phi_2 = 18;
inline constexpr int Phi_3 = 19;
inline constexpr int W = 20;
inline constexpr int W_1 = 21;
inline constexpr int W_2 = 22;
inline constexpr int W_3 = 23;
inline constexpr int Theta = 24;
inline constexpr int Theta_1 = 25;
inline constexpr int Theta_2 = 26;
inline constexpr int Theta_3 = 27;
// Parameters.
inline constexpr int alpha = 28;
inline constexpr int beta = 29;
inline constexpr int a = 30;
inline constexpr int b = 31;
inline constexpr int gamma = 32;
inline constexpr int mu = 33;
inline constexpr int sigma = 34;
inline constexpr int c1 = 35;
inline constexpr int c2 = 36;
inline constexpr int c3 = 37;
inline constexpr int c4 = 38;
inline constexpr int c5 = 39;
inline constexpr int epsilon = 40;
inline constexpr int p = 41;

inline constexpr int count = 42;
}  // namespace sym

inline constexpr std::array<SymbolInfo, sym::count> kSymbolTable{{
    {"t", SymKind::Variable, true},
    {"x", SymKind::Variable, true},
    {"u", SymKind::Variable, false},
    {"u_t", SymKind::Variable, false},
    {"u_x", SymKind::Variable, false},
    {"u_xx", SymKind::Variable, false},
    {"u_xxx", SymKind::Variable, false},
    {"u_xt", SymKind::Variable, false},
    {"u_xxt", SymKind::Variable, false},
    {"zeta", SymKind::Variable, true},
    {"omega", SymKind::Variable, true},
    {"s", SymKind::Variable, true},
    {"Psi", SymKind::Variable, false},
    {"Psi_1", SymKind::Variable, false},
    {"Psi_2", SymKind::Variable, false},
    {"Psi_3", SymKind::Variable, false},
    {"Phi", SymKind::Variable, false},
    {"Phi_1", SymKind::Variable, false},
    {"Phi_2", SymKind::Variable, false},
    {"Phi_3", SymKind::Variable, false},
    {"W", SymKind::Variable, false},
    {"W_1", SymKind::Variable, false},
    {"W_2", SymKind::Variable, false},
    {"W_3", SymKind::Variable, false},
    {"Theta", SymKind::Variable, false},
    {"Theta_1", SymKind::Variable, false},
    {"Theta_2", SymKind::Variable, false},
    {"Theta_3", SymKind::Variable, false},
    {"alpha", SymKind::Parameter, true},
    {"beta", SymKind::Parameter, true},
    {"a", SymKind::Parameter, false},
    {"b", SymKind::Parameter, false},
    {"gamma", SymKind::Parameter, false},
    {"mu", SymKind::Parameter, false},
    {"sigma", SymKind::Parameter, false},
    {"c1", SymKind::Parameter, false},
    {"c2", SymKind::Parameter, false},
    {"c3", SymKind::Parameter, false},
    {"c4", SymKind::Parameter, false},
    {"c5", SymKind::Parameter, false},
    {"epsilon", SymKind::Parameter, false},
    {"p", SymKind::Parameter, false},
}};

inline std::string_view symbol_name(int id) { return kSymbolTable[static_cast<size_t>(id)].name; }

inline std::optional<int> find_symbol(std::string_view name) {
    for (int i = 0; i < sym::count; ++i)
        if (kSymbolTable[static_cast<size_t>(i)].name == name) return i;
    return std::nullopt;
}

inline bool symbol_is_positive(int id) { return kSymbolTable[static_cast<size_t>(id)].positive; }
inline bool symbol_is_parameter(int id) {
    return kSymbolTable[static_cast<size_t>(id)].kind == SymKind::Parameter;
}

// Unary elementary functions admitted as evaluation leaves.
enum class Func : std::uint8_t { Sin, Cos, Exp, Log };

inline std::string_view func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
    }
    return "?";
}

inline std::optional<Func> find_func(std::string_view name) {
    if (name == "sin") return Func::Sin;
    if (name == "cos") return Func::Cos;
    if (name == "exp") return Func::Exp;
    if (name == "log") return Func::Log;
    return std::nullopt;
}

}  // namespace confsym
