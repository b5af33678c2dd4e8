// zrs: command-line front end for the point-interaction scattering toolkit.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "zrs/io.hpp"
#include "zrs/krein.hpp"
#include "zrs/resolvent.hpp"
#include "zrs/scattering.hpp"
#include "zrs/spherical.hpp"

namespace {

using namespace zrs;
using nlohmann::json;

enum Exit : int { ok = 0, usage = 1, check_failed = 2, numerical = 3 };

struct RunConfig {
    std::string config;
    std::string out;
    std::optional<std::size_t> n;
    std::optional<std::size_t> n0;
    std::optional<std::size_t> grid_order;
    std::string grid_kind = "gauss-legendre-product";
    std::uint64_t seed = 0;
    std::size_t trials = 4;
    double lambda = 1.0;
    std::vector<double> interval;
    double b = 1.0;
    std::size_t points = 32;
    std::size_t sample_order = 3;
    std::vector<std::size_t> n_sweep;
    std::vector<double> z{0.0, 1.0};
    std::vector<double> z2{-2.0, 0.5};
    std::vector<double> source;
    double perturb = 0.0;
    double tol_hilbert = 1e-10;
    double tol_symmetry = 1e-12;
    double tol_boundary = 1e-5;
    std::size_t order = 16;
};

// Output sink: --out file or stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw BadParams("cannot open output '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

ScattererSet load(const RunConfig& rc) {
    ScattererSet s = load_scatterers(rc.config);
    if (rc.n) {
        if (*rc.n < 1) throw BadParams("--n must be >= 1");
        if (s.family()) {
            FamilySpec spec = *s.family();
            spec.n = *rc.n;
            return generate_family(spec);
        }
        if (*rc.n > s.size()) throw BadParams("--n exceeds the number of listed scatterers");
        s = s.prefix(*rc.n);
    }
    return s;
}

SphereGrid grid_for(const RunConfig& rc, double lambda, const ScattererSet& s) {
    return make_grid(parse_grid_kind(rc.grid_kind),
                     rc.grid_order.value_or(default_grid_order(lambda, s)));
}

SMatrixRep build_rep(const RunConfig& rc, double lambda, const ScattererSet& s) {
    if (rc.n0) return smatrix_schur(lambda, s, *rc.n0, std::max(rc.b, lambda));
    return smatrix(lambda, s);
}

// Evaluates fn(k) for k in [0, count) on a small thread pool; results stay in order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F fn) {
    std::vector<T> out(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    out[k] = fn(k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

int cmd_validate(const RunConfig& rc) {
    const ScattererSet s = load(rc);
    AdmissibilityOptions opt;
    opt.b = rc.interval.empty() ? rc.b : rc.interval[1];
    opt.n0 = rc.n0;
    AdmissibilityReport report = check_admissibility(s, opt);
    if (!rc.interval.empty() && s.is_truncation())
        attach_tail_decay(report, s, rc.interval[0], rc.interval[1]);
    Sink sink(rc.out);
    sink.stream() << to_json(report).dump(2) << '\n';
    return report.verdict.pass ? ok : check_failed;
}

int cmd_smatrix(const RunConfig& rc) {
    const ScattererSet s = load(rc);
    const double lambda = rc.lambda;
    if (!(lambda > 0.0)) throw BadParams("--lambda must be positive");
    const SMatrixRep rep = build_rep(rc, lambda, s);
    const auto grid = std::make_shared<const SphereGrid>(grid_for(rc, lambda, s));
    const double reduced = unitarity_defect_reduced(rep);
    const double quad = unitarity_defect_quadrature(rep, grid, rc.trials, rc.seed);
    const SphereGrid samples = make_grid(GridKind::GaussLegendreProduct, rc.sample_order);

    Sink sink(rc.out);
    auto& os = sink.stream();
    os << "theta,phi,theta_prime,phi_prime,re_s,im_s,defect_reduced,defect_quadrature\n"
       << std::setprecision(12);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = 0; j < samples.size(); ++j) {
            const dcomplex v = smatrix_kernel(rep, samples.nodes[i], samples.nodes[j]);
            os << samples.theta[i] << ',' << samples.phi[i] << ',' << samples.theta[j] << ','
               << samples.phi[j] << ',' << v.real() << ',' << v.imag() << ',' << reduced << ','
               << quad << '\n';
        }
    }
    return ok;
}

struct SweepRow {
    double lambda = 0.0;
    double defect_reduced = 0.0;
    double defect_quadrature = 0.0;
    double gamma_norm = 0.0;
    double mu = 0.0;
    CMatrix gamma;
};

int cmd_sweep(const RunConfig& rc) {
    const ScattererSet s = load(rc);
    Sink sink(rc.out);
    auto& os = sink.stream();
    os << std::setprecision(12);

    if (!rc.n_sweep.empty()) {
        if (!(rc.lambda > 0.0)) throw BadParams("--lambda must be positive");
        if (!s.family()) throw BadParams("--n-sweep needs a family configuration");
        os << "lambda,n,n_prime,gamma_diff\n";
        std::optional<CMatrix> prev;
        std::size_t prev_n = 0;
        for (std::size_t n : rc.n_sweep) {
            FamilySpec spec = *s.family();
            spec.n = n;
            CMatrix g = gamma_at(generate_family(spec), rc.lambda);
            if (prev) {
                const auto common = static_cast<Eigen::Index>(std::min(n, prev_n));
                const double diff =
                    spectral_norm(CMatrix(g.topLeftCorner(common, common) -
                                          prev->topLeftCorner(common, common)));
                os << rc.lambda << ',' << prev_n << ',' << n << ',' << diff << '\n';
            }
            prev = std::move(g);
            prev_n = n;
        }
        return ok;
    }

    if (rc.interval.size() != 2 || !(rc.interval[0] > 0.0) || !(rc.interval[1] > rc.interval[0]))
        throw BadParams("--interval needs 0 < a < b");
    if (rc.points < 2) throw BadParams("--points must be >= 2");
    const double a = rc.interval[0], b = rc.interval[1];
    const double h = (b - a) / static_cast<double>(rc.points - 1);
    const auto rows = parallel_map<SweepRow>(rc.points, [&](std::size_t k) {
        SweepRow r;
        r.lambda = k + 1 == rc.points ? b : a + h * static_cast<double>(k);
        const SMatrixRep rep = build_rep(rc, r.lambda, s);
        const auto grid = std::make_shared<const SphereGrid>(grid_for(rc, r.lambda, s));
        r.defect_reduced = unitarity_defect_reduced(rep);
        r.defect_quadrature = unitarity_defect_quadrature(rep, grid, rc.trials, rc.seed + k);
        r.gamma_norm = spectral_norm(rep.gamma);
        r.mu = gram_matrix(r.lambda, s).mu;
        r.gamma = rep.gamma;
        return r;
    });
    os << "lambda,defect_reduced,defect_quadrature,gamma_norm,mu,increment\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        os << r.lambda << ',' << r.defect_reduced << ',' << r.defect_quadrature << ','
           << r.gamma_norm << ',' << r.mu << ',';
        if (k > 0) os << spectral_norm(CMatrix(r.gamma - rows[k - 1].gamma));
        os << '\n';
    }
    return ok;
}

dcomplex as_complex(const std::vector<double>& v) { return {v.at(0), v.at(1)}; }

int cmd_resolvent(const RunConfig& rc) {
    const ScattererSet s = load(rc);
    const dcomplex z1 = as_complex(rc.z), z2 = as_complex(rc.z2);
    if (z1.imag() == 0.0 || z2.imag() == 0.0) throw BadParams("--z and --z2 need Im != 0");
    if (z1 == z2) throw BadParams("--z and --z2 must differ");

    const auto e1 = ComplexEnergy::at(z1), e2 = ComplexEnergy::at(z2);
    CMatrix c1 = krein_C(e1, s);
    const CMatrix c2 = krein_C(e2, s);
    if (rc.perturb != 0.0) c1.array() += rc.perturb;
    const double hilbert = hilbert_identity_residual(z1, z2, c1, c2, build_Q(e1, s), build_Q(e2, s));
    const double symmetry = symmetry_residual(z1, s);

    Vec3 source;
    if (rc.source.size() == 3) {
        source = {rc.source[0], rc.source[1], rc.source[2]};
    } else {
        source = {s.max_radius() + 1.0, 0.5, 0.25};
    }
    const auto bc = boundary_condition_residual(z1, s, source);
    const double bc_max = bc.empty() ? 0.0 : *std::max_element(bc.begin(), bc.end());

    const bool pass = hilbert < rc.tol_hilbert && symmetry < rc.tol_symmetry && bc_max < rc.tol_boundary;
    json out = {{"z", {z1.real(), z1.imag()}},
                {"z2", {z2.real(), z2.imag()}},
                {"hilbert_residual", hilbert},
                {"symmetry_residual", symmetry},
                {"boundary_residuals", bc},
                {"source", {source.x(), source.y(), source.z()}},
                {"tolerances",
                 {{"hilbert", rc.tol_hilbert}, {"symmetry", rc.tol_symmetry}, {"boundary", rc.tol_boundary}}},
                {"pass", pass}};
    Sink sink(rc.out);
    sink.stream() << out.dump(2) << '\n';
    return pass ? ok : check_failed;
}

int cmd_grid(const RunConfig& rc) {
    const SphereGrid g = make_grid(parse_grid_kind(rc.grid_kind), rc.order);
    Sink sink(rc.out);
    write_grid_csv(g, sink.stream());
    return ok;
}

int classify(const Error& e) {
    if (dynamic_cast<const SingularMatrix*>(&e) || dynamic_cast<const TailNotContractive*>(&e) ||
        dynamic_cast<const NonPositiveGram*>(&e) || dynamic_cast<const FitUnstable*>(&e) ||
        dynamic_cast<const ZeroDistance*>(&e))
        return numerical;
    return usage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krein-formula resolvent and scattering matrix for point interactions"};
    app.require_subcommand(1);
    RunConfig rc;

    auto common = [&](CLI::App* sub, bool needs_config = true) {
        auto* opt = sub->add_option("--config", rc.config, "scatterer JSON: inline object or file path");
        if (needs_config) opt->required();
        sub->add_option("--out", rc.out, "output file (default stdout)");
        sub->add_option("--n", rc.n, "number of scatterers kept (regenerates families)");
    };

    auto* validate = app.add_subcommand("validate", "admissibility report as JSON; exit 2 if it fails");
    common(validate);
    validate->add_option("--b", rc.b, "upper end of the spectral window")->check(CLI::PositiveNumber);
    validate->add_option("--n0", rc.n0, "split index for the tail bound");
    validate->add_option("--interval", rc.interval, "window [a, b]; samples M_N * tau_N for families")
        ->expected(2);

    auto* smat = app.add_subcommand(
        "smatrix",
        "kernel samples of S - I on a product grid of --sample-order.\n"
        "Columns: theta,phi,theta_prime,phi_prime,re_s,im_s,defect_reduced,defect_quadrature");
    common(smat);
    smat->add_option("--lambda", rc.lambda, "spectral parameter lambda > 0")->required();
    smat->add_option("--n0", rc.n0, "use the block factorization split after n0 sites");
    smat->add_option("--b", rc.b, "window end for the tail bound with --n0");
    smat->add_option("--grid-order", rc.grid_order, "quadrature order (default from lambda and extent)");
    smat->add_option("--grid-kind", rc.grid_kind, "gauss-legendre-product or icosphere");
    smat->add_option("--seed", rc.seed, "seed for the random test functions");
    smat->add_option("--trials", rc.trials, "random functions in the quadrature defect");
    smat->add_option("--sample-order", rc.sample_order, "product-grid order of the kernel samples");

    auto* sweep = app.add_subcommand(
        "sweep",
        "lambda sweep. Columns: lambda,defect_reduced,defect_quadrature,gamma_norm,mu,increment.\n"
        "With --n-sweep: lambda,n,n_prime,gamma_diff over the common indices");
    common(sweep);
    sweep->add_option("--interval", rc.interval, "lambda interval a b")->expected(2);
    sweep->add_option("--points", rc.points, "number of lambda values");
    sweep->add_option("--lambda", rc.lambda, "lambda for --n-sweep");
    sweep->add_option("--n-sweep", rc.n_sweep, "truncation sizes of a family")->delimiter(',');
    sweep->add_option("--n0", rc.n0, "use the block factorization split after n0 sites");
    sweep->add_option("--b", rc.b, "window end for the tail bound with --n0");
    sweep->add_option("--grid-order", rc.grid_order, "quadrature order");
    sweep->add_option("--grid-kind", rc.grid_kind, "gauss-legendre-product or icosphere");
    sweep->add_option("--seed", rc.seed, "seed for the random test functions");
    sweep->add_option("--trials", rc.trials, "random functions in the quadrature defect");

    auto* res = app.add_subcommand("resolvent", "resolvent identity residuals as JSON; exit 2 if over tolerance");
    common(res);
    res->add_option("--z", rc.z, "spectral point re im")->expected(2);
    res->add_option("--z2", rc.z2, "second point for the Hilbert identity")->expected(2);
    res->add_option("--source", rc.source, "source point for the boundary fit")->expected(3);
    res->add_option("--perturb", rc.perturb, "add this to every entry of C(z) (testing hook)");
    res->add_option("--tol-hilbert", rc.tol_hilbert);
    res->add_option("--tol-symmetry", rc.tol_symmetry);
    res->add_option("--tol-boundary", rc.tol_boundary);

    auto* grid = app.add_subcommand("grid", "sphere quadrature as CSV theta,phi,weight");
    grid->add_option("--kind", rc.grid_kind, "gauss-legendre-product or icosphere");
    grid->add_option("--order", rc.order, "grid order");
    grid->add_option("--out", rc.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*validate) return cmd_validate(rc);
        if (*smat) return cmd_smatrix(rc);
        if (*sweep) return cmd_sweep(rc);
        if (*res) return cmd_resolvent(rc);
        if (*grid) return cmd_grid(rc);
    } catch (const SingularMatrix& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
        return numerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}
