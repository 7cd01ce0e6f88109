// Command-line front end: frame field design on 2D/3D meshes, the rotation
// machinery selftest, and the toy-problem objective landscape.

#include "CLI11.hpp"

#include "framefield/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Boundary-aligned frame fields on triangle and tet meshes"};
    app.require_subcommand(1);

    framefield::RunConfig cfg3;
    auto* d3 = app.add_subcommand("design3d", "Compute a 3D frame field on a tet mesh");
    d3->add_option("mesh", cfg3.input, "input mesh (MEDIT ASCII)")->required();
    d3->add_option("prefix", cfg3.prefix, "output file prefix")->required();
    d3->add_option("--iters", cfg3.iterations, "smoothing iterations")->capture_default_str();
    d3->add_option("--lambda", cfg3.lambda, "constraint penalty weight")->capture_default_str();
    d3->add_option("--crease-deg", cfg3.crease_deg, "crease angle threshold in degrees")
        ->capture_default_str();
    d3->add_option("--tol", cfg3.tol, "linear solver tolerance")->capture_default_str();
    d3->add_option("--max-cg", cfg3.max_cg, "CG iteration cap (-1 = automatic)")
        ->capture_default_str();
    d3->add_flag("--hilbert", cfg3.hilbert, "Hilbert-sort vertices within boundary/interior blocks");
    d3->add_flag("--viz", cfg3.viz, "also write <prefix>.viz.vtk");

    framefield::RunConfig cfg2;
    auto* d2 = app.add_subcommand("design2d", "Compute a 2D cross field on a triangle mesh");
    d2->add_option("mesh", cfg2.input, "input mesh (MEDIT ASCII)")->required();
    d2->add_option("prefix", cfg2.prefix, "output file prefix")->required();
    d2->add_option("--iters", cfg2.iterations, "smoothing iterations")->capture_default_str();
    d2->add_option("--lambda", cfg2.lambda, "constraint penalty weight")->capture_default_str();
    d2->add_option("--tol", cfg2.tol, "linear solver tolerance")->capture_default_str();
    d2->add_option("--max-cg", cfg2.max_cg, "CG iteration cap (-1 = automatic)")
        ->capture_default_str();
    d2->add_flag("--single-boundary-eq", cfg2.single_boundary_eq,
                 "demonstrate the degenerate one-equation boundary lock");
    d2->add_flag("--viz", cfg2.viz, "also write <prefix>.viz.vtk");

    auto* st = app.add_subcommand("selftest", "Verify the rotation machinery");

    framefield::LandscapeConfig lcfg;
    lcfg.theta_right = 0.67495154666968220; // 55*pi/256: both senses resolve cleanly at grid 64
    auto* ls = app.add_subcommand(
        "landscape", "Objective landscape of the 4-vertex chain interpolation toy");
    ls->add_option("output", lcfg.output, "output CSV path")->required();
    ls->add_option("--theta-left", lcfg.theta_left, "left locked angle (radians)")
        ->capture_default_str();
    ls->add_option("--theta-right", lcfg.theta_right, "right locked angle (radians)")
        ->capture_default_str();
    ls->add_option("--grid", lcfg.grid_n, "samples per axis")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (d3->parsed()) return framefield::cmd_design3d(cfg3);
    if (d2->parsed()) return framefield::cmd_design2d(cfg2);
    if (st->parsed()) return framefield::cmd_selftest();
    if (ls->parsed()) return framefield::cmd_landscape(lcfg);
    return 1;
}
