// Timing comparison between the serial reference kernels and the
// OpenMP-parallel ones.  Not a correctness test: run it by hand to see
// what the thread pool buys on a given machine.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "brickelast/assembly.hpp"
#include "brickelast/element.hpp"
#include "brickelast/fields.hpp"
#include "brickelast/interpolation.hpp"
#include "brickelast/material.hpp"
#include "brickelast/mesh.hpp"
#include "brickelast/quadrature.hpp"
#include "brickelast/solver.hpp"

using namespace brickelast;

namespace {

double time_of(const std::function<void()>& body, int reps) {
    body();  // warm-up
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) body();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const std::string& name, double serial, double parallel) {
    std::printf("%-24s %10.4f ms %10.4f ms %8.2fx\n", name.c_str(),
                serial * 1e3, parallel * 1e3,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    int n = 12;
    int reps = 3;
    if (argc > 1) n = std::atoi(argv[1]);
    if (argc > 2) reps = std::atoi(argv[2]);

    const auto element = reference_element(ElementVariant::Full);
    const Box domain{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    const auto mesh = build_box_mesh(domain, {n, n, n});
    const auto map = global_dof_map(mesh, element);
    const GaussRule rule(5);
    const auto material = Material::from_young_poisson(1.0, 0.3);
    const auto mc = manufactured_case(material, Recipe::Trigonometric);

    std::printf("mesh %dx%dx%d, %d cells, %d stress dofs, %d displacement dofs\n",
                n, n, n, mesh.num_cells(), map.n_stress, map.n_disp);
    std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    VectorField3 body = [&](const Vec3& x) { return mc.div_sigma.eval(x); };
    VectorField3 bdry = [&](const Vec3& x) { return mc.u.eval(x); };
    SaddleSystem sys_serial, sys_parallel;
    report("assemble_system",
           time_of([&] {
               sys_serial = assemble_system(mesh, element, map, material, body,
                                            rule, Exec::Serial, &bdry);
           }, reps),
           time_of([&] {
               sys_parallel = assemble_system(mesh, element, map, material, body,
                                              rule, Exec::Parallel, &bdry);
           }, reps));

    Eigen::VectorXd coeffs_serial, coeffs_parallel;
    report("interpolate_stress",
           time_of([&] {
               coeffs_serial = interpolate_stress(mc.sigma, mesh, element, map, rule,
                                                  EdgePolicy::Match, Exec::Serial);
           }, reps),
           time_of([&] {
               coeffs_parallel = interpolate_stress(mc.sigma, mesh, element, map, rule,
                                                    EdgePolicy::Match, Exec::Parallel);
           }, reps));

    report("stress_l2_norm",
           time_of([&] {
               stress_l2_norm(mesh, element, map, coeffs_serial, rule, Exec::Serial);
           }, reps),
           time_of([&] {
               stress_l2_norm(mesh, element, map, coeffs_parallel, rule, Exec::Parallel);
           }, reps));

    report("normal_jump",
           time_of([&] {
               normal_jump(mesh, element, map, coeffs_serial, rule, Exec::Serial);
           }, reps),
           time_of([&] {
               normal_jump(mesh, element, map, coeffs_parallel, rule, Exec::Parallel);
           }, reps));

    report("clement_regularize",
           time_of([&] {
               clement_regularize(mc.sigma, mesh, rule, Exec::Serial);
           }, reps),
           time_of([&] {
               clement_regularize(mc.sigma, mesh, rule, Exec::Parallel);
           }, reps));

    return 0;
}
