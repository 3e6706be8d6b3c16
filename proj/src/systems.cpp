#include "pfab/systems.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace pfab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

const char* to_string(SystemKind k) {
    switch (k) {
        case SystemKind::S1: return "s1";
        case SystemKind::S2: return "s2";
        case SystemKind::R19: return "r19";
        case SystemKind::R20: return "r20";
    }
    return "?";
}

SystemKind system_from_string(const std::string& s) {
    if (s == "s1" || s == "S1") return SystemKind::S1;
    if (s == "s2" || s == "S2") return SystemKind::S2;
    if (s == "r19" || s == "R19") return SystemKind::R19;
    if (s == "r20" || s == "R20") return SystemKind::R20;
    throw std::invalid_argument("unknown system: " + s);
}

SystemSpec make_system(SystemKind kind) {
    SystemSpec s;
    s.kind = kind;
    switch (kind) {
        case SystemKind::S1:
            s.k = rat(1);
            s.lambda2 = rat(1, 4);
            s.lambda1 = rat(-1, 2);
            s.lambda0 = rat(1, 4);
            s.sigma = {{-kInf, -1.0}, {0.0, kInf}};
            s.centers = {{-1.0, -1.0}, {1.0, 0.0}};
            s.mu_exponent = rat(-2);
            break;
        case SystemKind::S2:
            s.k = rat(2);
            s.lambda2 = rat(1);
            s.lambda1 = rat(-2);
            s.lambda0 = rat(1);
            s.sigma = {{0.0, 1.0}};
            s.centers = {{1.0, 0.0}};
            s.mu_exponent = rat(-3);
            break;
        case SystemKind::R19:
            s.k = rat(3, 2);
            s.lambda2 = rat(1, 128);
            s.lambda1 = rat(1, 128);
            s.lambda0 = rat(0);
            s.sigma = {{1.0 / 64.0, kInf}};
            s.centers = {{1.0, 1.0 / 64.0}};
            s.mu_exponent = rat(-5, 2);
            break;
        case SystemKind::R20:
            s.k = rat(1, 2);
            s.lambda2 = rat(0);
            s.lambda1 = rat(1, 128);
            s.lambda0 = rat(1, 128);
            s.sigma = {{1.0 / 64.0, kInf}};
            s.centers = {{1.0, 1.0 / 64.0}};
            s.mu_exponent = rat(-3, 2);
            break;
    }
    return s;
}

int SystemSpec::branch_of(double h) const {
    for (size_t i = 0; i < sigma.size(); ++i)
        if (sigma[i].contains(h)) return static_cast<int>(i);
    throw std::domain_error("h outside the admissible range of " + std::string(to_string(kind)));
}

namespace {
double pow_real(const SystemSpec& sys, double x, double e) {
    // x^e; negative x only allowed for integer e (the S1 h<-1 branch).
    if (x > 0.0) return std::pow(x, e);
    if (x == 0.0) throw std::domain_error("x = 0 outside the domain of H");
    if (sys.kind == SystemKind::S1) return std::pow(x, e);  // integer exponents only
    throw std::domain_error("x < 0 with non-integer exponent");
}
}  // namespace

double hamiltonian(const SystemSpec& sys, double x, double y) {
    double l2 = to_double(sys.lambda2), l1 = to_double(sys.lambda1), l0 = to_double(sys.lambda0);
    return pow_real(sys, x, -sys.k_d()) * (0.5 * y * y + l2 * x * x + l1 * x + l0);
}

double half_energy(const SystemSpec& sys, double h, double x) {
    double l2 = to_double(sys.lambda2), l1 = to_double(sys.lambda1), l0 = to_double(sys.lambda0);
    return h * pow_real(sys, x, sys.k_d()) - l2 * x * x - l1 * x - l0;
}

void PerturbationPoly::set(char which, bool plus, int i, int j, double v) {
    if (i < 0 || j < 0 || i + j > n) throw std::invalid_argument("perturbation index out of range");
    auto& m = which == 'a' ? (plus ? a_plus : a_minus) : (plus ? b_plus : b_minus);
    if (v == 0.0) m.erase({i, j});
    else m[{i, j}] = v;
}

double PerturbationPoly::get(char which, bool plus, int i, int j) const {
    const auto& m = which == 'a' ? (plus ? a_plus : a_minus) : (plus ? b_plus : b_minus);
    auto it = m.find({i, j});
    return it == m.end() ? 0.0 : it->second;
}

bool PerturbationPoly::is_smooth() const {
    auto same = [](const std::map<std::pair<int, int>, double>& p,
                   const std::map<std::pair<int, int>, double>& q) {
        for (const auto& [k, v] : p) {
            auto it = q.find(k);
            if ((it == q.end() ? 0.0 : it->second) != v) return false;
        }
        for (const auto& [k, v] : q) {
            auto it = p.find(k);
            if ((it == p.end() ? 0.0 : it->second) != v) return false;
        }
        return true;
    };
    return same(a_plus, a_minus) && same(b_plus, b_minus);
}

void PerturbationPoly::validate() const {
    for (const auto* m : {&a_plus, &a_minus, &b_plus, &b_minus})
        for (const auto& [ij, v] : *m) {
            (void)v;
            if (ij.first < 0 || ij.second < 0 || ij.first + ij.second > n)
                throw std::invalid_argument("perturbation index outside degree bound");
        }
}

namespace {
nlohmann::json map_to_json(const std::map<std::pair<int, int>, double>& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [ij, v] : m)
        j[std::to_string(ij.first) + "," + std::to_string(ij.second)] = v;
    return j;
}
std::map<std::pair<int, int>, double> map_from_json(const nlohmann::json& j) {
    std::map<std::pair<int, int>, double> m;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        auto comma = key.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("bad index key: " + key);
        int i = std::stoi(key.substr(0, comma));
        int jj = std::stoi(key.substr(comma + 1));
        double v = it.value().get<double>();
        if (v != 0.0) m[{i, jj}] = v;
    }
    return m;
}
}  // namespace

std::string PerturbationPoly::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["a+"] = map_to_json(a_plus);
    j["a-"] = map_to_json(a_minus);
    j["b+"] = map_to_json(b_plus);
    j["b-"] = map_to_json(b_minus);
    return j.dump(2);
}

PerturbationPoly PerturbationPoly::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PerturbationPoly p;
    p.n = j.at("n").get<int>();
    if (j.contains("a+")) p.a_plus = map_from_json(j["a+"]);
    if (j.contains("a-")) p.a_minus = map_from_json(j["a-"]);
    if (j.contains("b+")) p.b_plus = map_from_json(j["b+"]);
    if (j.contains("b-")) p.b_minus = map_from_json(j["b-"]);
    p.validate();
    return p;
}

namespace {
double poly_eval(const std::map<std::pair<int, int>, double>& m, double x, double y) {
    double acc = 0.0;
    for (const auto& [ij, c] : m) acc += c * std::pow(x, ij.first) * std::pow(y, ij.second);
    return acc;
}
}  // namespace

std::pair<double, double> vector_field(const SystemSpec& sys, Side side, double eps,
                                       const PerturbationPoly& pert, double x, double y) {
    double fx = 0.0, fy = 0.0;
    switch (sys.kind) {
        case SystemKind::S1:
            fx = kSqrt2 * x * y;
            fy = (kSqrt2 / 4.0) * (1.0 - x * x + 2.0 * y * y);
            break;
        case SystemKind::S2:
            fx = (kSqrt2 / 2.0) * x * y;
            fy = (kSqrt2 / 2.0) * (2.0 - 2.0 * x + y * y);
            break;
        case SystemKind::R19:
            fx = -x * y;
            fy = -0.75 * y * y + x * x / 256.0 - x / 256.0;
            break;
        case SystemKind::R20:
            fx = -x * y;
            fy = -0.25 * y * y + x / 256.0 - 1.0 / 256.0;
            break;
    }
    if (eps != 0.0) {
        bool plus = side == Side::upper;
        fx += eps * poly_eval(plus ? pert.a_plus : pert.a_minus, x, y);
        fy += eps * poly_eval(plus ? pert.b_plus : pert.b_minus, x, y);
    }
    return {fx, fy};
}

}  // namespace pfab
