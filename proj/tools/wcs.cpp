#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace wcs;

int main(int argc, char** argv) {
    cli::RunConfig cfg;
    CLI::App app{"Wall-crossing spectra from KS factorization and split attractor flows"};
    app.set_config("--config", "", "key = value file; flags override its entries");
    app.fallthrough();
    app.require_subcommand(1);

    std::string window;
    app.add_option("--model", cfg.model, "su2 | su3-slice")->capture_default_str();
    app.add_option("--lambda", cfg.lambda, "dynamical scale")->capture_default_str();
    app.add_option("--rev", cfg.reV, "Re v of the su3 slice, units of lambda^3")->capture_default_str();
    app.add_option("--trunc", cfg.truncation, "truncation degree N")->capture_default_str();
    app.add_option("--window", window, "reMin,reMax,imMin,imMax[,nx,ny] in units of lambda^2");
    app.add_option("--tol-phase", cfg.tolPhase, "phase lock along flows")->capture_default_str();
    app.add_option("--tol-wall", cfg.tolWall, "wall crossing refinement, units of lambda^2")->capture_default_str();
    app.add_option("--tol-delta", cfg.tolDelta, "discriminant proximity")->capture_default_str();
    app.add_option("--tol-quad", cfg.tolQuad, "quadrature target")->capture_default_str();
    app.add_option("--depth", cfg.depthMax, "split depth bound")->capture_default_str();
    app.add_option("--mmax", cfg.mmax, "split coefficient bound")->capture_default_str();
    app.add_option("--max-flows", cfg.maxFlows, "flow lines per tree search")->capture_default_str();
    app.add_option("--format", cfg.format, "json | csv")->capture_default_str();

    std::string word, order = "auto";
    long pairing = 1;
    auto* fac = app.add_subcommand("factorize", "slope-ordered factorization of a word of KS transforms");
    fac->add_option("word", word, "e.g. \"K[1,0] K[0,1]\" or \"K[1,1]^-2\"");
    fac->add_option("-k,--pairing", pairing, "<gen1,gen2>")->capture_default_str();
    fac->add_option("--order", order, "auto | increasing | decreasing")->capture_default_str();

    std::string point, region, charge, g1, g2;
    int maxDegree = 4;
    auto* per = app.add_subcommand("periods", "periods, tau and central charges at a point");
    per->add_option("model", cfg.model, "su2 | su3-slice");
    per->add_option("--u", point, "re,im")->required();

    auto* wal = app.add_subcommand("wall", "wall of the first kind of two charges");
    wal->add_option("model", cfg.model, "su2 | su3-slice");
    wal->add_option("--g1", g1, "comma-separated charge")->required();
    wal->add_option("--g2", g2, "comma-separated charge")->required();

    auto* tre = app.add_subcommand("tree", "attractor tree and DT invariant of a charge");
    tre->add_option("model", cfg.model, "su2 | su3-slice");
    tre->add_option("--charge", charge, "comma-separated charge")->required();
    auto* treAt = tre->add_option("--at", point, "basepoint re,im");
    tre->add_option("--region", region, "strong | weak (su2), near (su3-slice)")->excludes(treAt);

    auto* spe = app.add_subcommand("spectrum", "DT invariants of all charges up to a coefficient bound");
    spe->add_option("model", cfg.model, "su2 | su3-slice");
    auto* speAt = spe->add_option("--at", point, "basepoint re,im");
    spe->add_option("--region", region, "strong | weak (su2), near (su3-slice)")->excludes(speAt);
    spe->add_option("--max-degree", maxDegree, "largest |coordinate|")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!window.empty()) cfg.window = cli::parseWindow(window);
        cfg.validate();
        auto basepoint = [&] {
            if (!region.empty()) return cli::regionPoint(cfg.swModel(), region);
            if (point.empty()) throw AlgebraError("a basepoint is required (--at or --region)");
            return cli::parsePoint(point);
        };
        std::string name;
        cli::Json doc;
        if (*fac) {
            name = "factorize";
            doc = cli::cmdFactorize(cfg, word, pairing, order);
        } else if (*per) {
            name = "periods";
            doc = cli::cmdPeriods(cfg, cli::parsePoint(point));
        } else if (*wal) {
            name = "wall";
            doc = cli::cmdWall(cfg, cli::parseCharge(g1), cli::parseCharge(g2));
        } else if (*tre) {
            name = "tree";
            doc = cli::cmdTree(cfg, cli::parseCharge(charge), basepoint());
        } else {
            name = "spectrum";
            doc = cli::cmdSpectrum(cfg, basepoint(), maxDegree);
        }
        std::cout << cli::render(cfg, name, doc);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exitCode();
    }
}
