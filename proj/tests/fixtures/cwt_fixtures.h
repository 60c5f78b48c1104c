#pragma once

// Generated by tests/oracles/gen_fixtures.cc from the brute-force CWT
// reference. Do not edit.

namespace cwtvc::fixtures {

// Pearson r of recompose(decompose(c)) against c for mixture_contour(seed),
// seed = 1..20.
inline constexpr double kMixtureR0[20] = {
    0.94303428429726488,
    0.79588112037132519,
    0.95883665297425436,
    0.92406846198529413,
    0.87351390499861248,
    0.85490933254746448,
    0.82980337474002785,
    0.80915739404278075,
    0.83463518868556752,
    0.90377335165371198,
    0.72371563131281935,
    0.9236199710319406,
    0.79135431525920685,
    0.90270298328727239,
    0.92388713832383496,
    0.90898759093188441,
    0.89541050776027953,
    0.75936510617593833,
    0.78599764291212604,
    0.81211142905654377,
};

// Max-energy column (1-based) of a pure sinusoid, T = 1000 frames.
inline constexpr int kColumn25ms = 1;
inline constexpr int kColumn5s = 8;

// Pearson r for a 32-frame-period sine, T = 512.
inline constexpr double kSine32R0 = 0.9959675237750053;

}  // namespace cwtvc::fixtures
