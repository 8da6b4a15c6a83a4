#pragma once

// Command implementations behind the ellipse_lab tool: constants, eig, fit,
// relate and pipeline. Each takes a RunConfig and streams, returns an exit
// status, and never calls exit() itself.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "records_io.hpp"
#include "relation.hpp"
#include "series.hpp"
#include "solver.hpp"

namespace ellipse_lab {

enum class GridSpacing { Linear, Geometric };
enum class SeriesFamily { Maclaurin, Asymptotic };

inline GridSpacing parse_spacing(std::string_view s) {
    if (s == "linear") return GridSpacing::Linear;
    if (s == "geometric") return GridSpacing::Geometric;
    throw ParseError("unknown grid spacing '" + std::string(s) + "' (linear or geometric)");
}

inline SeriesFamily parse_family(std::string_view s) {
    if (s == "maclaurin") return SeriesFamily::Maclaurin;
    if (s == "asymptotic") return SeriesFamily::Asymptotic;
    throw ParseError("unknown series family '" + std::string(s) + "' (maclaurin or asymptotic)");
}

struct RunConfig {
    unsigned digits = 30;
    std::string out;
    unsigned jobs = 1;

    // eig
    std::string convention = "A";
    // Empty or zero grid fields take the convention's default grid, see
    // resolved_grid.
    std::string grid_start;
    std::string grid_stop;
    unsigned grid_count = 0;
    std::string grid_spacing;
    unsigned grid_decimals = 15;
    double grid_cluster = 1;             ///< > 1 crowds grid points toward grid-stop
    std::vector<std::string> e_values;  ///< explicit eccentricities; overrides the grid
    unsigned basis_size = 0;
    unsigned ladder_step = 4;
    unsigned max_rungs = 60;
    std::string dist = "cheb";
    double bracket_pad = 0.05;

    // fit / pipeline
    std::string data;
    std::string family = "maclaurin";
    unsigned terms = 0;                  ///< exponents in the model; 0 = known + records
    std::vector<std::string> known;      ///< leading coefficients, as decimals
    unsigned max_basis = 8;              ///< widest relation basis the pipeline tries
    unsigned max_steps = 0;              ///< 0 = no limit on accepted closed forms

    // relate
    std::string value;
    unsigned trusted = 0;                ///< 0 = significant digits of `value`
    std::string basis = "t,1";
    unsigned threshold = 25;
    std::string max_coefficient = "1000000";
};

// ---- grids -----------------------------------------------------------------

namespace detail {

/// x rounded to `decimals` places, as a trimmed decimal string.
inline std::string round_decimal(const Real& x, unsigned decimals) {
    const unsigned w = static_cast<unsigned>(x.precision());
    Real scaled = x * pow10_at(static_cast<long>(decimals), w);
    Integer n = round_to_integer(scaled);
    bool neg = n < 0;
    std::string digits = (neg ? Integer(-n) : n).str();
    if (digits.size() <= decimals) digits.insert(0, decimals + 1 - digits.size(), '0');
    std::string s = digits.substr(0, digits.size() - decimals) + "." + digits.substr(digits.size() - decimals);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return (neg ? "-" : "") + s;
}

}  // namespace detail

/// Shortest decimal spelling of a parsed eccentricity, as records write it.
inline std::string canonical_decimal(const Real& e) {
    return format_fixed(e, std::max(1u, static_cast<unsigned>(e.precision()) - 1), true);
}

/// Fills unset grid fields. Constant area: 30 points equally spaced over
/// [0.000001, 0.00003]. Constant semi-major axis: 36 points over
/// [0.9998, 0.999995], geometric in 1 - e.
inline RunConfig resolved_grid(RunConfig cfg) {
    const bool area = parse_convention(cfg.convention) == Convention::ConstantArea;
    if (cfg.grid_start.empty()) cfg.grid_start = area ? "0.000001" : "0.9998";
    if (cfg.grid_stop.empty()) cfg.grid_stop = area ? "0.00003" : "0.999995";
    if (cfg.grid_count == 0) cfg.grid_count = area ? 30 : 36;
    if (cfg.grid_spacing.empty()) cfg.grid_spacing = area ? "linear" : "geometric";
    return cfg;
}

/// Eccentricities of the run, as exact decimal strings in increasing order.
/// Geometric spacing is geometric in e for grids within [0, 0.5] and in
/// 1 - e for grids within (0.5, 1). With grid_cluster = p the grid parameter
/// runs over 1 - (1 - i/(n-1))^p instead of i/(n-1).
inline std::vector<std::string> grid_eccentricities(const RunConfig& run) {
    const RunConfig cfg = resolved_grid(run);
    std::vector<std::string> out;
    if (!cfg.e_values.empty()) {
        out = cfg.e_values;
    } else {
        const unsigned w = cfg.grid_decimals + 40;
        const Real a = parse_real(cfg.grid_start, w), b = parse_real(cfg.grid_stop, w);
        const unsigned n = cfg.grid_count;
        const GridSpacing sp = parse_spacing(cfg.grid_spacing);
        if (!(cfg.grid_cluster >= 1)) throw DomainError("grid-cluster must be at least 1");
        const Real p = make_real(cfg.grid_cluster, w);
        for (unsigned i = 0; i < n; ++i) {
            Real t = n == 1 ? make_real(0, w) : Real(make_real(i, w) / (n - 1));
            if (cfg.grid_cluster != 1) t = 1 - pow(1 - t, p);
            Real e;
            if (sp == GridSpacing::Linear) {
                e = a + (b - a) * t;
            } else if (a > Real(0.5) && b > Real(0.5)) {
                Real da = 1 - a, db = 1 - b;
                e = 1 - da * pow(db / da, t);
            } else {
                if (a <= 0 || b <= 0) throw DomainError("geometric grid needs positive endpoints");
                e = a * pow(b / a, t);
            }
            out.push_back(detail::round_decimal(e, cfg.grid_decimals));
        }
    }
    // One precision for all, so equal decimals ("0.1", "0.10") compare equal.
    std::size_t longest = 0;
    for (auto& s : out) longest = std::max(longest, s.size());
    std::vector<std::pair<Real, std::string>> keyed;
    for (auto& s : out) {
        detail::decimal_significant_digits(s);
        Real e = parse_real(s, static_cast<unsigned>(longest) + kRecordParseGuard);
        if (e < 0 || e > Real(kMaxEccentricity))
            throw DomainError("eccentricity " + s + " outside [0, 0.9999995]");
        keyed.push_back({e, s});
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 1; i < keyed.size(); ++i)
        if (keyed[i].first == keyed[i - 1].first) throw DomainError("grid eccentricities must be distinct");
    out.clear();
    for (auto& k : keyed) out.push_back(k.second);
    return out;
}

inline SolverConfig solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.basis_size = cfg.basis_size;
    sc.target_digits = cfg.digits;
    sc.distribution = parse_distribution(cfg.dist);
    sc.bracket_pad = cfg.bracket_pad;
    sc.ladder_step = cfg.ladder_step;
    sc.max_rungs = cfg.max_rungs;
    return sc;
}

inline void check_precision(const RunConfig& cfg) {
    if (cfg.digits < PrecisionContext::kMinDigits) throw DomainError("--digits must be at least 10");
}

// ---- constants ---------------------------------------------------------------

inline int cmd_constants(const RunConfig& cfg, std::ostream& out) {
    check_precision(cfg);
    PrecisionContext ctx(cfg.digits);
    const auto& k = fundamental_constants(ctx);
    out << "digits = " << cfg.digits << '\n';
    out << "pi = " << format_fixed(k.pi, cfg.digits) << '\n';
    out << "j01 = " << format_fixed(k.j01, cfg.digits) << '\n';
    out << "rho = " << format_fixed(k.rho, cfg.digits) << '\n';
    return 0;
}

// ---- eig -------------------------------------------------------------------------

/// Computes the grid's missing eigenvalues into the data file cfg.out.
/// Records already present at >= the requested digits are kept as they are.
inline int cmd_eig(const RunConfig& cfg, std::ostream& log) {
    check_precision(cfg);
    if (cfg.out.empty()) throw DomainError("eig needs --out <data file>");
    const Convention conv = parse_convention(cfg.convention);
    const auto grid = grid_eccentricities(cfg);
    const std::filesystem::path path(cfg.out);

    std::vector<EigenvalueRecord> records;
    if (std::filesystem::exists(path)) records = read_data_file(path);

    std::vector<std::string> todo;
    for (const auto& es : grid) {
        const std::string key =
            canonical_decimal(parse_real(es, static_cast<unsigned>(es.size()) + kRecordParseGuard));
        bool have = false;
        for (const auto& r : records)
            if (canonical_decimal(r.shape.eccentricity()) == key && r.shape.convention() == conv &&
                r.digits_claimed >= cfg.digits)
                have = true;
        if (!have) todo.push_back(es);
    }
    log << "eig: " << grid.size() << " grid points, " << grid.size() - todo.size() << " already present, "
        << todo.size() << " to compute\n";
    if (todo.empty()) return 0;

    const SolverConfig sc = solver_config(cfg);
    PrecisionContext ctx(cfg.digits);
    std::mutex mu;  // guards records, the file and the log
    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < todo.size(); i = next++) {
            const std::string& es = todo[i];
            auto t0 = std::chrono::steady_clock::now();
            try {
                EllipseShape shape(parse_real(es, static_cast<unsigned>(es.size()) + kRecordParseGuard), conv);
                auto rec = solve_fundamental(shape, sc, ctx);
                double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                std::lock_guard<std::mutex> lock(mu);
                std::erase_if(records, [&](const EigenvalueRecord& r) {
                    return canonical_decimal(r.shape.eccentricity()) == canonical_decimal(rec.shape.eccentricity()) &&
                           r.shape.convention() == conv;
                });
                records.push_back(rec);
                write_data_file(path, records);
                log << "  e=" << es << " lambda=" << format_fixed(rec.lambda, 20) << "... M=" << rec.solver.basis_size
                    << " (" << std::fixed << std::setprecision(1) << secs << " s)" << std::defaultfloat << std::endl;
            } catch (const std::exception& ex) {
                ++failures;
                std::lock_guard<std::mutex> lock(mu);
                log << "  e=" << es << " FAILED: " << ex.what() << std::endl;
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(todo.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failures > 0) log << "eig: " << failures << " point(s) failed\n";
    return failures > 0 ? 1 : 0;
}

// ---- fit -------------------------------------------------------------------------

inline unsigned data_digits(const std::vector<EigenvalueRecord>& records) {
    unsigned d = 0;
    for (const auto& r : records) d = std::max(d, r.digits_claimed);
    return d;
}

/// Model of the family with `count` exponents and the given known values.
inline SeriesModel family_model(SeriesFamily fam, unsigned count, const std::vector<Real>& known) {
    SeriesModel m = fam == SeriesFamily::Maclaurin ? maclaurin_model(count) : asymptotic_model(count);
    for (std::size_t i = 0; i < known.size() && i < m.exponents.size(); ++i)
        m.known_prefix.push_back({m.exponents[i], known[i]});
    return m;
}

inline std::string coefficient_name(SeriesFamily fam, int nu) {
    return (fam == SeriesFamily::Maclaurin ? "C" : "c") + std::to_string(nu);
}

/// Fit report: a fenced key = value block, then the human table.
inline void write_fit_report(std::ostream& out, const RunConfig& cfg, SeriesFamily fam, const SeriesFit& fit,
                             const std::vector<unsigned>& truncation, std::size_t nrecords, unsigned digits) {
    const auto unknown = fit.model.unknown_exponents();
    out << "```fit\n";
    out << "family = " << cfg.family << '\n';
    out << "data = " << cfg.data << '\n';
    out << "fingerprint = " << fit.data_fingerprint << '\n';
    out << "records = " << nrecords << '\n';
    out << "data_digits = " << digits << '\n';
    out << "known = " << fit.model.known_prefix.size() << '\n';
    for (std::size_t i = 0; i < unknown.size(); ++i) {
        const int nu = coefficient_index(fit.model, unknown[i]);
        const unsigned sig = std::max(fit.trusted_digits[i] + 2, 10u);
        out << coefficient_name(fam, nu) << " = " << format_sci(fit.coefficients[i], sig) << '\n';
        out << "D" << nu << " = " << fit.trusted_digits[i] << '\n';
        if (i < truncation.size()) out << "T" << nu << " = " << truncation[i] << '\n';
    }
    out << "```\n\n";

    out << std::left << std::setw(5) << "nu" << std::setw(28) << (fam == SeriesFamily::Maclaurin ? "C_nu" : "c_nu")
        << std::setw(12) << "ratio" << std::setw(7) << "D_nu" << "T_nu\n";
    std::optional<Real> prev;
    if (!fit.model.known_prefix.empty()) prev = fit.model.known_prefix.back().value;
    for (std::size_t i = 0; i < unknown.size(); ++i) {
        const int nu = coefficient_index(fit.model, unknown[i]);
        const Real& c = fit.coefficients[i];
        std::string ratio = "-";
        if (prev && *prev != 0) {
            std::ostringstream r;
            r << std::fixed << std::setprecision(5) << static_cast<double>(c / *prev);
            ratio = r.str();
        }
        out << std::left << std::setw(5) << nu << std::setw(28) << format_fixed(c, 20) << std::setw(12) << ratio
            << std::setw(7) << fit.trusted_digits[i] << (i < truncation.size() ? std::to_string(truncation[i]) : "-")
            << '\n';
        prev = c;
    }
}

inline std::vector<Real> parse_known(const RunConfig& cfg, const PrecisionContext& ctx) {
    std::vector<Real> v;
    for (const auto& s : cfg.known) v.push_back(ctx.parse(s));
    return v;
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    check_precision(cfg);
    if (cfg.data.empty()) throw DomainError("fit needs --data <data file>");
    const SeriesFamily fam = parse_family(cfg.family);
    auto records = read_data_file(cfg.data);
    const unsigned digits = std::max(cfg.digits, data_digits(records));
    PrecisionContext ctx(digits);
    auto known = parse_known(cfg, ctx);
    const unsigned count = cfg.terms ? cfg.terms : static_cast<unsigned>(known.size() + records.size());
    SeriesModel model = family_model(fam, count, known);
    auto fit = fit_interpolating(records, model, ctx);
    std::vector<unsigned> truncation;
    if (records.size() > 1) truncation = estimate_truncation_digits(records, model, ctx);
    std::ostringstream report;
    report << "# D_nu: digits stable under a relative data perturbation at the data precision\n"
           << "# T_nu: digits shared with a fit one term shorter (series truncation)\n";
    write_fit_report(report, cfg, fam, fit, truncation, records.size(), data_digits(records));
    out << report.str();
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out);
        f << report.str();
    }
    return 0;
}

// ---- relate --------------------------------------------------------------------

inline void write_relation_report(std::ostream& out, const IntegerRelation& rel, const std::string& value,
                                  unsigned trusted) {
    std::string vec, basis;
    for (std::size_t i = 0; i < rel.coefficients.size(); ++i) vec += (i ? "," : "") + rel.coefficients[i].str();
    for (std::size_t i = 0; i < rel.basis.size(); ++i) basis += (i ? "," : "") + atom_name(rel.basis.elements()[i]);
    const bool found = rel.status != RelationStatus::NotFound;
    out << "```relation\n";
    out << "value = " << value << '\n';
    out << "trusted_digits = " << trusted << '\n';
    out << "basis = " << basis << '\n';
    out << "status = " << status_name(rel.status) << '\n';
    out << "relation = " << (found ? vec : "") << '\n';
    out << "closed_form = " << (found ? closed_form(rel) : "") << '\n';
    out << "matched_digits = " << rel.target_digits_matched << '\n';
    out << "```\n\n";
    if (!found) {
        out << "no relation over (" << basis << ") at " << trusted << " digits\n";
        return;
    }
    out << "relation     " << vec << "  over (" << basis << ")\n";
    out << "closed form  " << closed_form(rel) << '\n';
    out << "matched      " << rel.target_digits_matched << " digits\n";
    out << "status       " << status_name(rel.status) << '\n';
}

inline int cmd_relate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.value.empty()) throw DomainError("relate needs --value <decimal>");
    const unsigned trusted = cfg.trusted ? cfg.trusted : detail::decimal_significant_digits(cfg.value);
    if (trusted < 10) throw PrecisionError("relate: need at least 10 trusted digits");
    PrecisionContext ctx(std::max({cfg.digits, 2 * trusted + 10, PrecisionContext::kMinDigits}));
    Real target = parse_real(cfg.value, ctx.working_digits());
    RelationOptions opt;
    opt.min_matched = cfg.threshold;
    opt.max_coefficient = Integer(cfg.max_coefficient);
    auto rel = find_relation(target, trusted, parse_basis(cfg.basis), ctx, opt);
    std::ostringstream report;
    write_relation_report(report, rel, cfg.value, trusted);
    out << report.str();
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out);
        f << report.str();
    }
    return rel.status == RelationStatus::Unambiguous ? 0 : 1;
}

// ---- pipeline ------------------------------------------------------------------

/// Candidate constants for coefficient nu, most likely first; the pipeline
/// tries growing prefixes of this list.
///   asymptotic, odd nu:  pi, 1/pi, 1/pi^3, ...     even nu: 1, 1/pi^2, ...
///   (nu < 0 leads with pi^-nu)
///   Maclaurin C_nu:      1, rho, rho^2, ..., rho^(2 floor(nu/2) - 1)
inline std::vector<BasisAtom> ansatz_atoms(SeriesFamily fam, int nu, unsigned limit) {
    std::vector<BasisAtom> atoms;
    if (fam == SeriesFamily::Maclaurin) {
        int top = std::max(1, 2 * (nu / 2) - 1);
        atoms.push_back(BasisAtom::one());
        for (int k = 1; k <= top; ++k) atoms.push_back(BasisAtom::rho(k));
    } else {
        if (nu < 0) atoms.push_back(BasisAtom::pi(-nu));
        const bool odd = (nu % 2) != 0;
        if (odd && nu > 0) atoms.push_back(BasisAtom::pi(1));
        for (int k = odd ? 1 : 0; k <= std::max(nu, 1); k += 2) {
            BasisAtom a = BasisAtom::pi(-k);
            if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) atoms.push_back(a);
        }
    }
    if (atoms.size() > limit) atoms.resize(limit);
    return atoms;
}

struct DiscoveryEntry {
    int nu;
    Real value;                  ///< fitted coefficient
    unsigned trusted_digits;
    IntegerRelation relation;
    std::string closed_form;
};

struct DiscoveryResult {
    std::vector<DiscoveryEntry> accepted;
    std::string stop_reason;
    bool error = false;
};

/// Smallest number of trusted digits: perturbation estimate, truncation
/// estimate, and the data claim.
inline unsigned leading_trusted_digits(std::span<const EigenvalueRecord> records, const SeriesModel& model,
                                       const SeriesFit& fit, const PrecisionContext& ctx) {
    unsigned d = fit.trusted_digits.empty() ? 0 : fit.trusted_digits.front();
    auto trunc = estimate_truncation_digits(records, model, ctx);
    if (!trunc.empty()) d = std::min(d, trunc.front());
    return d;
}

/// Log10 of the product of the abscissae; the leading coefficient of a
/// square fit is off by roughly (next coefficient) * 10^this.
inline double feasibility_exponent(std::span<const EigenvalueRecord> records, const SeriesModel& model,
                                   const PrecisionContext& ctx) {
    double s = 0;
    for (const auto& p : model_data(records, model, ctx)) {
        double lx = log10_abs(p.x);
        s += model.variable == SeriesVariable::EvenEccentricity ? 2 * lx : lx;
    }
    return s;
}

inline DiscoveryResult run_discovery(const RunConfig& cfg, std::ostream& log) {
    DiscoveryResult res;
    const SeriesFamily fam = parse_family(cfg.family);
    if (cfg.data.empty()) throw DomainError("pipeline needs --data <data file>");
    auto records = read_data_file(cfg.data);
    if (records.empty()) throw InsufficientDataError("pipeline: data file holds no records");
    const unsigned ddigits = data_digits(records);
    PrecisionContext ctx(std::max({cfg.digits, ddigits, PrecisionContext::kMinDigits}));
    const unsigned w = ctx.working_digits();

    std::vector<Real> known;
    std::vector<int> known_nu;
    if (fam == SeriesFamily::Maclaurin) {
        known = {make_real(1, w), make_real(0, w)};  // C0 = 1, C1 = 0
        known_nu = {0, 1};
    }
    const unsigned n = static_cast<unsigned>(records.size());
    {
        SeriesModel m = family_model(fam, static_cast<unsigned>(known.size()) + n, known);
        double fe = feasibility_exponent(records, m, ctx);
        log << "# family = " << cfg.family << ", records = " << n << ", data digits = " << ddigits << '\n';
        log << "# feasibility: product of abscissae 1e" << std::fixed << std::setprecision(1) << fe
            << std::defaultfloat << "; first unknown good to about " << static_cast<int>(-fe) << " digits\n";
    }

    RelationOptions opt;
    opt.min_matched = cfg.threshold;
    opt.max_coefficient = Integer(cfg.max_coefficient);
    for (;;) {
        if (cfg.max_steps && res.accepted.size() >= cfg.max_steps) {
            res.stop_reason = "step limit reached";
            break;
        }
        SeriesModel model = family_model(fam, static_cast<unsigned>(known.size()) + n, known);
        SeriesFit fit = fit_interpolating(records, model, ctx);
        const int exponent = model.unknown_exponents().front();
        const int nu = coefficient_index(model, exponent);
        const Real& value = fit.coefficients.front();
        const unsigned trusted = leading_trusted_digits(records, model, fit, ctx);
        log << "fit " << coefficient_name(fam, nu) << " = " << format_sci(value, std::max(trusted, 10u) + 2)
            << "  trusted " << trusted << '\n';
        if (trusted < 10) {
            res.stop_reason = "precision exhausted at " + coefficient_name(fam, nu) + " (" + std::to_string(trusted) +
                              " trusted digits)";
            break;
        }
        auto atoms = ansatz_atoms(fam, nu, cfg.max_basis);
        std::optional<IntegerRelation> hit;
        IntegerRelation last;
        for (std::size_t k = 1; k <= atoms.size(); ++k) {
            ConstantBasis basis = ConstantBasis::with_target({atoms.begin(), atoms.begin() + static_cast<long>(k)});
            IntegerRelation rel = find_relation(value, trusted, basis, ctx, opt);
            std::string names;
            for (std::size_t i = 0; i < basis.size(); ++i) names += (i ? "," : "") + atom_name(basis.elements()[i]);
            log << "  try (" << names << "): " << status_name(rel.status);
            if (rel.status != RelationStatus::NotFound)
                log << "  " << closed_form(rel) << "  matched " << rel.target_digits_matched;
            log << '\n';
            last = rel;
            if (rel.status == RelationStatus::Unambiguous) {
                hit = rel;
                break;
            }
        }
        if (!hit) {
            res.stop_reason = "no unambiguous closed form for " + coefficient_name(fam, nu) + " (" +
                              std::string(status_name(last.status)) + ")";
            break;
        }
        Real exact = relation_value(*hit, ctx);
        DiscoveryEntry entry{nu, value, trusted, *hit, closed_form(*hit)};
        std::string vec;
        for (std::size_t i = 0; i < hit->coefficients.size(); ++i) vec += (i ? "," : "") + hit->coefficients[i].str();
        log << "accepted " << coefficient_name(fam, nu) << " = " << entry.closed_form << "  relation [" << vec
            << "]  matched " << hit->target_digits_matched << " digits\n";
        res.accepted.push_back(std::move(entry));
        known.push_back(exact);
        known_nu.push_back(nu);
    }
    log << "stop: " << res.stop_reason << '\n';
    log << "# discovered " << res.accepted.size() << " closed form(s)\n";
    for (const auto& e : res.accepted)
        log << "#   " << coefficient_name(fam, e.nu) << " = " << e.closed_form << "   (" << e.relation.target_digits_matched
            << " digits)\n";
    return res;
}

inline int cmd_pipeline(const RunConfig& cfg, std::ostream& out) {
    std::ostringstream log;
    int status = 0;
    try {
        auto res = run_discovery(cfg, log);
        status = res.accepted.empty() ? 1 : 0;
    } catch (const std::exception& ex) {
        log << "halted: " << ex.what() << '\n';
        status = 1;
    }
    out << log.str();
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out);
        f << log.str();
    }
    return status;
}

}  // namespace ellipse_lab
