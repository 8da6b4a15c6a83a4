#pragma once

// Closed-form coefficients of the two known expansions of the fundamental
// Dirichlet eigenvalue of the ellipse:
//
//   constant area (A = pi):      lambda_0 / rho = sum_nu C_nu(rho) e^(2 nu)
//   constant semi-major (a = 1): lambda'_0      = sum_nu c_nu stretch^nu, nu >= -2
//
// C_nu are rational polynomials in rho = j01^2, c_nu rational Laurent
// polynomials in pi. They serve as solver seeds and as test oracles.

#include <array>
#include <string_view>
#include <vector>

#include "precision.hpp"

namespace ellipse_lab::known {

/// C_nu = (sum_i numerator[i] rho^(deg-i)) / denominator.
struct RhoPolynomial {
    int nu;
    std::string_view denominator;
    std::vector<std::string_view> numerator;  // highest power first
};

inline const std::vector<RhoPolynomial>& maclaurin_table() {
    static const std::vector<RhoPolynomial> table = {
        {0, "1", {"1"}},
        {1, "1", {"0"}},
        {2, "32", {"1", "-2"}},
        {3, "32", {"1", "-2"}},
        {4, "32768", {"-7", "58", "832", "-1792"}},
        {5, "16384", {"-7", "58", "320", "-768"}},
        {6, "28311552", {"87", "-1066", "-12778", "134676", "418176", "-1140480"}},
        {7, "9437184", {"87", "-1066", "-2698", "51156", "104832", "-329472"}},
        {8, "3710851743744",
         {"-206061", "3371550", "44817952", "-742073664", "-4882432", "21039022080", "30916214784",
          "-113359454208"}},
        {9, "927712935936",
         {"-206061", "3371550", "4906528", "-253044032", "307986432", "5234098176", "5775556608",
          "-25027411968"}},
        {10, "14843406974976000",
         {"16700445", "-342482130", "-5150192834", "118301328148", "-200183585216", "-4688313904000",
          "9860534272000", "80801390592000", "68584734720000", "-356640620544000"}},
        {11, "2968681394995200",
         {"16700445", "-342482130", "-204728834", "37384128148", "-126365422016", "-962599369600",
          "2869625651200", "15282796953600", "10059094425600", "-64012419072000"}},
        // The two highest rows are stored with the overall sign that makes them
        // positive (matching the numeric values below); as usually printed
        // their numerators carry the opposite sign.
        {12, "4924686192529637376000",
         {"-120332513685", "2968187062070", "50217731403560", "-1484737085079984", "4817972151021312",
          "77508820026886656", "-383914479592341504", "-1477542066905088000", "6033467570651136000",
          "23656611409035264000", "11993659465531392000", "-95949275724251136000"}},
        {13, "820781032088272896000",
         {"-120332513685", "2968187062070", "-572997966040", "-443153032753584", "2432501708504832",
          "13031591176137216", "-94442136581505024", "-204288219832320000", "1178391769251840000",
          "3645518590771200000", "1389639688519680000", "-14537769049128960000"}},
    };
    return table;
}

/// Rounded reference values of C_2..C_31 (20 decimals).
inline constexpr std::array<std::string_view, 30> kMaclaurinNumeric = {
    "0.11822456134208701629", "0.11822456134208701629", "0.11003095525016373549", "0.10183734915824045469",
    "0.09469809424285786691", "0.08861319050401597214", "0.08341794996585013471", "0.07894768465249571895",
    "0.07506629658798923053", "0.07166627779626831642", "0.06866339082734667271", "0.06599134928348895227",
    "0.06359753741872661359", "0.06143976881171471065", "0.05948387383735141015", "0.05770190566258202267",
    "0.05607079818966375885", "0.05457135306802184693", "0.05318746732402259177", "0.05190553831652441797",
    "0.05071400061380009767", "0.04960296200320839231", "0.04856391475086479136", "0.04758950454972984014",
    "0.04667334411591790177", "0.04580986165578441533", "0.04499417680286498705", "0.04422199837110163796",
    "0.04348953956755718180", "0.04279344727893972947"};

/// One term  (num/den) * pi^pi_power  of an asymptotic coefficient.
struct PiTerm {
    long num;
    long den;
    int pi_power;
};

struct PiCoefficient {
    int nu;
    std::vector<PiTerm> terms;
};

inline const std::vector<PiCoefficient>& asymptotic_table() {
    static const std::vector<PiCoefficient> table = {
        {-2, {{1, 4, 2}}},
        {-1, {{1, 2, 1}}},
        {0, {{3, 4, 0}}},
        {1, {{11, 8, -1}, {1, 12, 1}}},
        {2, {{61, 16, -2}, {1, 12, 0}}},
        {3, {{1971, 128, -3}, {-9, 16, -1}, {3, 80, 1}}},
        {4, {{20851, 256, -4}, {-271, 48, -2}, {2, 45, 0}}},
        {5, {{537219, 1024, -5}, {-11667, 256, -3}, {-7, 64, -1}, {5, 224, 1}}},
    };
    return table;
}

/// Rounded reference values of c_-2..c_7 (20 decimals).
inline constexpr std::array<std::string_view, 10> kAsymptoticNumeric = {
    "2.46740110027233965471", "1.57079632679489661923", "0.75000000000000000000", "0.69947548130186160990",
    "0.46962034596974608696", "0.43538365077995525294", "0.30855816280914840552", "0.27983128169766678772",
    "0.19027912693622176700", "0.15981739762228202463"};

inline Real evaluate(const RhoPolynomial& p, const Real& rho) {
    const unsigned prec = rho.precision();
    Real acc = make_real(0, prec);
    for (auto c : p.numerator) acc = acc * rho + parse_real(c, prec);
    return acc / parse_real(p.denominator, prec);
}

inline Real evaluate(const PiCoefficient& c, const Real& pi) {
    const unsigned prec = pi.precision();
    Real acc = make_real(0, prec);
    for (const auto& t : c.terms) {
        Real term = make_real(t.num, prec) / t.den;
        acc += term * pow(pi, t.pi_power);
    }
    return acc;
}

/// C_nu(rho) for nu = 0..13.
inline Real maclaurin_coefficient(int nu, const Real& rho) {
    const auto& table = maclaurin_table();
    if (nu < 0 || nu >= static_cast<int>(table.size())) throw DomainError("maclaurin_coefficient: nu out of range");
    return evaluate(table[static_cast<std::size_t>(nu)], rho);
}

/// c_nu for nu = -2..5.
inline Real asymptotic_coefficient(int nu, const Real& pi) {
    const auto& table = asymptotic_table();
    if (nu < -2 || nu + 2 >= static_cast<int>(table.size())) throw DomainError("asymptotic_coefficient: nu out of range");
    return evaluate(table[static_cast<std::size_t>(nu + 2)], pi);
}

}  // namespace ellipse_lab::known
