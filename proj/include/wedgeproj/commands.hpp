#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wedgeproj/io.hpp"
#include "wedgeproj/isotone.hpp"
#include "wedgeproj/projection.hpp"
#include "wedgeproj/wedge.hpp"

namespace wedgeproj {

/** Exit-code contract shared by all commands: 0 success, 1 mathematical
 * negative (failed certificate, not_isotone verdict, violations found),
 * 2 unusable input (parse, dimension, scale), 3 hypothesis not met
 * (inapplicable).
 */
enum ExitCode : int { exit_ok = 0, exit_negative = 1, exit_input = 2, exit_inapplicable = 3 };

/// Options common to every command; commands ignore fields they do not use.
struct CommandOptions {
    std::string wedge_path;
    std::string points_path;
    long pairs = 1000;
    std::uint64_t seed = 0;
    bool intrinsic = false;
    Tolerance tol;
    std::string output_path;  ///< empty: no report file
};

namespace detail {

/// Fixed report skeleton: command echo, input digests, tolerance settings.
inline json report_header(const std::string& command, const CommandOptions& opt,
                          const std::string& wedge_bytes, const std::string& points_bytes) {
    json inputs = json::object();
    if (!opt.wedge_path.empty()) inputs["wedge"] = fnv1a_hex(wedge_bytes);
    if (!opt.points_path.empty()) inputs["points"] = fnv1a_hex(points_bytes);
    json rep;
    rep["command"] = command;
    rep["inputs"] = std::move(inputs);
    rep["tolerances"] = to_json(opt.tol);
    return rep;
}

/// Appends the wall time, writes the report file when requested.
inline void finish_report(json& rep, const CommandOptions& opt,
                          std::chrono::steady_clock::time_point start) {
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    rep["wall_time_ms"] = ms;
    if (!opt.output_path.empty()) {
        std::ofstream out(opt.output_path, std::ios::binary);
        if (!out) throw ParseError("cannot write " + opt.output_path);
        out << rep.dump(2) << "\n";
    }
}

inline json certificate_json(const KktCertificate& cert) {
    return json{{"max_inner_generator", cert.max_inner_generator},
                {"complementarity", cert.complementarity},
                {"point_in_wedge", cert.point_in_wedge},
                {"passed", cert.passed}};
}

inline json projection_json(const ProjectionResult& res) {
    json coeffs = json::object();
    for (const auto& [idx, w] : res.active_coefficients)
        coeffs[std::to_string(idx)] = w;
    return json{{"point", to_json(res.point)},
                {"residual", to_json(res.residual)},
                {"distance", res.residual.norm()},
                {"active_coefficients", std::move(coeffs)},
                {"lineality_component", to_json(res.lineality_component)},
                {"certificate", certificate_json(res.certificate)}};
}

inline json isotone_json(const IsotoneReport& rep) {
    json j;
    j["verdict"] = to_string(rep.verdict);
    j["reason"] = rep.reason;
    j["polar_rays"] = to_json(rep.polar_rays);
    if (rep.worst_pair)
        j["worst_pair"] = json{{"i", rep.worst_pair->i},
                               {"j", rep.worst_pair->j},
                               {"inner_product", rep.worst_pair->inner}};
    else
        j["worst_pair"] = nullptr;
    return j;
}

}  // namespace detail

/** project: metric projection of every point in the points file onto the
 * wedge.  The monotone kind dispatches to the fast exact path, the
 * generators kind to the split-and-enumerate engine; both report the same
 * certificate, evaluated against the wedge's generator set.  Exit 0 only
 * if every certificate passes.
 */
inline int cmd_project(const CommandOptions& opt, std::ostream& out = std::cout) {
    const auto start = std::chrono::steady_clock::now();
    const std::string wedge_bytes = detail::read_file(opt.wedge_path);
    const std::string points_bytes = detail::read_file(opt.points_path);
    const WedgeSpec spec = parse_wedge_spec(wedge_bytes);
    const std::vector<Vector> points = parse_points(points_bytes);

    for (const Vector& x : points)
        if (x.size() != spec.wedge.ambient_dim())
            throw DimensionMismatch("point of dim " + std::to_string(x.size()) +
                                    " vs wedge ambient dim " +
                                    std::to_string(spec.wedge.ambient_dim()));

    json rep = detail::report_header("project", opt, wedge_bytes, points_bytes);
    json results = json::array();
    bool all_passed = true;

    if (spec.kind == "monotone") {
        for (const Vector& x : points) {
            ProjectionResult res;
            res.point = pava_project(x);
            res.residual = x - res.point;
            const MonotoneCoefficients co = monotone_coefficients(res.point);
            for (Index j = 0; j + 1 < spec.monotone_m; ++j)
                if (co.t[j] > 0.0) res.active_coefficients[j] = co.t[j];
            res.lineality_component = Vector::Constant(x.size(), co.t[spec.monotone_m - 1]);
            res.certificate = verify_projection(spec.wedge, x, res.point, opt.tol);
            all_passed = all_passed && res.certificate.passed;
            results.push_back(detail::projection_json(res));
        }
    } else {
        const WedgeDecomposition split = decompose(spec.wedge, opt.tol);
        for (const Vector& x : points) {
            const ProjectionResult res = project_wedge(spec.wedge, split, x, opt.tol);
            all_passed = all_passed && res.certificate.passed;
            results.push_back(detail::projection_json(res));
        }
    }
    rep["results"] = std::move(results);
    rep["all_certificates_passed"] = all_passed;
    detail::finish_report(rep, opt, start);
    out << "project: " << points.size() << " point(s), certificates "
        << (all_passed ? "all passed" : "FAILED") << "\n";
    return all_passed ? exit_ok : exit_negative;
}

/** decompose: emit the lineality basis, the cone-part generators, and the
 * generating flag for the wedge.
 */
inline int cmd_decompose(const CommandOptions& opt, std::ostream& out = std::cout) {
    const auto start = std::chrono::steady_clock::now();
    const std::string wedge_bytes = detail::read_file(opt.wedge_path);
    const WedgeSpec spec = parse_wedge_spec(wedge_bytes);
    const WedgeDecomposition split = decompose(spec.wedge, opt.tol);

    json rep = detail::report_header("decompose", opt, wedge_bytes, {});
    rep["ambient_dim"] = spec.wedge.ambient_dim();
    rep["lineality_dim"] = split.lineality.dim();
    json lin = json::array();
    for (Index i = 0; i < split.lineality.dim(); ++i)
        lin.push_back(to_json(Vector(split.lineality.vector(i))));
    rep["lineality_basis"] = std::move(lin);
    json cone = json::array();
    if (!split.cone_part.is_trivial(opt.tol))
        for (Index j = 0; j < split.cone_part.count(); ++j)
            cone.push_back(to_json(Vector(split.cone_part.generator(j))));
    rep["cone_part_generators"] = std::move(cone);
    rep["generating"] = is_generating(spec.wedge, opt.tol);
    detail::finish_report(rep, opt, start);
    out << "decompose: lineality dim " << split.lineality.dim() << ", cone part "
        << (split.cone_part.is_trivial(opt.tol) ? 0 : split.cone_part.count())
        << " generator(s), " << (rep["generating"].get<bool>() ? "generating" : "not generating")
        << "\n";
    return exit_ok;
}

/** polar: extreme rays of the wedge's polar.  The polar of W = K (+) L is
 * the polar of K inside the orthogonal complement of L; it has an
 * extreme-ray description only when K generates that complement, so other
 * inputs exit as inapplicable.  With --intrinsic the wedge is first
 * reduced to the span of its generators.
 */
inline int cmd_polar(const CommandOptions& opt, std::ostream& out = std::cout) {
    const auto start = std::chrono::steady_clock::now();
    const std::string wedge_bytes = detail::read_file(opt.wedge_path);
    const WedgeSpec spec = parse_wedge_spec(wedge_bytes);

    json rep = detail::report_header("polar", opt, wedge_bytes, {});
    rep["intrinsic"] = opt.intrinsic;

    GeneratedWedge target = spec.wedge;
    std::optional<SubspaceBasis> back_map;
    if (opt.intrinsic) {
        auto [reduced, span] = intrinsic_wedge(spec.wedge, opt.tol);
        target = std::move(reduced);
        back_map = std::move(span);
        rep["span_dim"] = back_map->dim();
    }

    const WedgeDecomposition split = decompose(target, opt.tol);
    const SubspaceBasis lperp = complement_basis(split.lineality, opt.tol);
    std::vector<Vector> rays;
    try {
        rays = polar_generators(split.cone_part, lperp, opt.tol);
    } catch (const PolarNotPointed& e) {
        rep["verdict"] = "inapplicable";
        rep["reason"] = e.what();
        detail::finish_report(rep, opt, start);
        out << "polar: inapplicable (" << e.what() << ")\n";
        return exit_inapplicable;
    }
    if (back_map)
        for (Vector& r : rays) r = back_map->vectors() * r;

    rep["polar_rays"] = to_json(rays);
    rep["lineality_dim"] = split.lineality.dim();
    detail::finish_report(rep, opt, start);
    out << "polar: " << rays.size() << " extreme ray(s)\n";
    return exit_ok;
}

/** check-isotone: run the decision procedure and exit 0 for isotone, 1 for
 * not_isotone, 3 for inapplicable.  --intrinsic first reduces the wedge to
 * the span of its generators, extending the criterion to non-generating
 * wedges; rays are reported in ambient coordinates either way.
 */
inline int cmd_check_isotone(const CommandOptions& opt, std::ostream& out = std::cout) {
    const auto start = std::chrono::steady_clock::now();
    const std::string wedge_bytes = detail::read_file(opt.wedge_path);
    const WedgeSpec spec = parse_wedge_spec(wedge_bytes);

    json rep = detail::report_header("check-isotone", opt, wedge_bytes, {});
    rep["intrinsic"] = opt.intrinsic;

    IsotoneReport ir;
    if (opt.intrinsic) {
        auto [reduced, span] = intrinsic_wedge(spec.wedge, opt.tol);
        ir = check_isotone_wedge(reduced, opt.tol);
        for (Vector& r : ir.polar_rays) r = span.vectors() * r;
    } else {
        ir = check_isotone_wedge(spec.wedge, opt.tol);
    }
    rep.update(detail::isotone_json(ir));
    detail::finish_report(rep, opt, start);
    out << "check-isotone: " << to_string(ir.verdict) << " (" << ir.reason << ")\n";
    switch (ir.verdict) {
        case Verdict::isotone: return exit_ok;
        case Verdict::not_isotone: return exit_negative;
        default: return exit_inapplicable;
    }
}

/** sample: randomized isotonicity test over seeded ordered pairs; exits 0
 * only when no violation was found.  Violating pairs are reported
 * verbatim with both projections and the failed membership certificate.
 */
inline int cmd_sample(const CommandOptions& opt, std::ostream& out = std::cout) {
    const auto start = std::chrono::steady_clock::now();
    const std::string wedge_bytes = detail::read_file(opt.wedge_path);
    const WedgeSpec spec = parse_wedge_spec(wedge_bytes);

    const SampleReport sr = sample_isotonicity(spec.wedge, opt.pairs, opt.seed, opt.tol);

    json rep = detail::report_header("sample", opt, wedge_bytes, {});
    rep["seed"] = opt.seed;
    rep["pairs_tested"] = sr.pairs_tested;
    rep["violation_count"] = sr.violations.size();
    json viols = json::array();
    for (const OrderPair& p : sr.violations) {
        json v;
        v["u"] = to_json(p.u);
        v["v"] = to_json(p.v);
        v["order_witness_residual"] = p.witness.residual_norm;
        v["proj_u"] = to_json(*p.proj_u);
        v["proj_v"] = to_json(*p.proj_v);
        v["difference_residual"] = p.failure->residual_norm;
        viols.push_back(std::move(v));
    }
    rep["violations"] = std::move(viols);
    detail::finish_report(rep, opt, start);
    out << "sample: " << sr.pairs_tested << " pair(s), " << sr.violations.size()
        << " violation(s)\n";
    return sr.violations.empty() ? exit_ok : exit_negative;
}

/** pava: project every line of the points file onto the
 * nonincreasing-coordinates wedge of that line's own length.  Lines of
 * length one pass through unchanged.  Exit 0 only if every certificate
 * passes.
 */
inline int cmd_pava(const CommandOptions& opt, std::ostream& out = std::cout) {
    const auto start = std::chrono::steady_clock::now();
    const std::string points_bytes = detail::read_file(opt.points_path);
    const std::vector<Vector> points = parse_points(points_bytes);

    json rep = detail::report_header("pava", opt, {}, points_bytes);
    json results = json::array();
    bool all_passed = true;
    for (const Vector& x : points) {
        const Vector p = pava_project(x);
        json r;
        r["input"] = to_json(x);
        r["point"] = to_json(p);
        r["distance"] = (x - p).norm();
        if (x.size() >= 2) {
            const KktCertificate cert =
                verify_projection(build_monotone_wedge(x.size()), x, p, opt.tol);
            r["certificate"] = detail::certificate_json(cert);
            all_passed = all_passed && cert.passed;
        } else {
            r["certificate"] = nullptr;
        }
        results.push_back(std::move(r));
    }
    rep["results"] = std::move(results);
    rep["all_certificates_passed"] = all_passed;
    detail::finish_report(rep, opt, start);
    out << "pava: " << points.size() << " point(s), certificates "
        << (all_passed ? "all passed" : "FAILED") << "\n";
    return all_passed ? exit_ok : exit_negative;
}

}  // namespace wedgeproj
