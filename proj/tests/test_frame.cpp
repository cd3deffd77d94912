// ttiflex - control-overhead and airlink-utilization analytics for mmWave TDD MAC frame design
// Copyright 2026 the ttiflex authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ttiflex/frame.hpp"

using namespace ttiflex;

namespace {
constexpr double kTsym = 4.16e-6;

FrameParams frame(TtiMode mode)
{
    FrameParams fp;
    fp.t_sym = kTsym;
    fp.t_tti_max = 30 * kTsym; // 124.8 us
    fp.tti_mode = mode;
    return fp;
}
} // namespace

TEST_CASE("symbol rounding quantizes durations up to the symbol grid")
{
    // sub-symbol duration costs one full symbol
    CHECK(symbols_for(0.569e-6, kTsym) == 1);
    CHECK(round_to_symbols(0.569e-6, kTsym) == Catch::Approx(4.16e-6).epsilon(1e-12));
    // exact multiples are fixed points
    CHECK(symbols_for(8.32e-6, kTsym) == 2);
    CHECK(round_to_symbols(8.32e-6, kTsym) == Catch::Approx(8.32e-6).epsilon(1e-12));
    // generic value rounds to the next multiple
    CHECK(symbols_for(35.9e-6, kTsym) == 9);
    CHECK(round_to_symbols(35.9e-6, kTsym) == Catch::Approx(37.44e-6).epsilon(1e-12));
    // zero stays zero
    CHECK(symbols_for(0.0, kTsym) == 0);
    CHECK(round_to_symbols(0.0, kTsym) == 0.0);
    // a positive duration below the rounding tolerance still needs a symbol
    CHECK(symbols_for(1e-17, kTsym) == 1);
}

TEST_CASE("symbol rounding rejects invalid inputs")
{
    CHECK_THROWS_AS(symbols_for(1e-6, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(symbols_for(1e-6, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(symbols_for(-1e-9, kTsym), std::invalid_argument);
}

TEST_CASE("frame parameters enforce the TTI/symbol alignment")
{
    FrameParams ok = frame(TtiMode::Fixed);
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.n_sym_tti_max() == 30);

    FrameParams bad = ok;
    bad.t_tti_max = 126e-6; // 126/4.16 is not an integer
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    FrameParams neg = ok;
    neg.t_sym = 0.0;
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("fixed-mode allocation always charges whole maximum TTIs")
{
    const FrameParams fp = frame(TtiMode::Fixed);
    // sub-TTI payload costs one full TTI
    CHECK(allocation_time(10e-6, fp) == Catch::Approx(124.8e-6).epsilon(1e-12));
    // multi-TTI payload charges the TTI-count ceiling
    CHECK(allocation_time(300e-6, fp) == Catch::Approx(374.4e-6).epsilon(1e-12));
    // nothing to send costs nothing
    CHECK(allocation_time(0.0, fp) == 0.0);
}

TEST_CASE("flexible-mode allocation rounds to the symbol grid")
{
    const FrameParams fp = frame(TtiMode::Flexible);
    CHECK(allocation_time(0.569e-6, fp) == Catch::Approx(4.16e-6).epsilon(1e-12));
    CHECK(allocation_time(35.9e-6, fp) == Catch::Approx(37.44e-6).epsilon(1e-12));
    CHECK(allocation_time(300e-6, fp) == Catch::Approx(303.68e-6).epsilon(1e-12));
    CHECK(allocation_time(0.0, fp) == 0.0);
}

TEST_CASE("symbol rounding properties hold over random durations")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> dur(0.0, 2e-3);
    double prev_t = 0.0, prev_q = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double t = dur(rng);
        const double q = round_to_symbols(t, kTsym);
        // dominates the input, by less than one symbol
        CHECK(q >= t - 1e-18);
        CHECK(q < t + kTsym);
        // idempotent
        CHECK(round_to_symbols(q, kTsym) == Catch::Approx(q).epsilon(1e-12));
        // exact multiple of the symbol duration
        const double k = q / kTsym;
        CHECK(std::abs(k - std::round(k)) < 1e-6);
        // monotone: larger inputs never round lower
        if (t >= prev_t)
            CHECK(q >= prev_q - 1e-18);
        prev_t = t;
        prev_q = q;
    }
}

TEST_CASE("flexible allocation never exceeds the fixed allocation")
{
    const FrameParams fx = frame(TtiMode::Fixed);
    const FrameParams fl = frame(TtiMode::Flexible);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dur(1e-9, 3e-3);
    for (int i = 0; i < 20000; ++i) {
        const double t = dur(rng);
        CHECK(allocation_time(t, fl) <= allocation_time(t, fx) + 1e-15);
    }
}
