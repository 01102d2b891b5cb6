// SPDX-License-Identifier: Apache-2.0
//
// rtri-mimo: training-based MIMO links with residual transmit RF impairments
// Copyright (C) 2026 The rtri-mimo authors
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

#include "rtri/random.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace rtri;

TEST_CASE("Philox-4x32-10 known-answer vectors", "[random]")
{
    using Block = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("identical seed and stream reproduce identical draws", "[random][property]")
{
    RandomStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) {
        const cdouble za = a.complex_normal();
        const cdouble zb = b.complex_normal();
        REQUIRE(za == zb);
    }
    RandomStream c(42, 7);
    ComplexMatrix m1(5, 3), m2(5, 3);
    c.fill_complex_normal(m1, 2.0);
    RandomStream d(42, 7);
    d.fill_complex_normal(m2, 2.0);
    CHECK(m1 == m2);
}

TEST_CASE("distinct streams and substreams are uncorrelated", "[random][property]")
{
    const int n = 200000;
    auto corr = [n](RandomStream x, RandomStream y) {
        cdouble acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += x.complex_normal() * std::conj(y.complex_normal());
        return std::abs(acc) / n;
    };
    const double bound = 5.0 / std::sqrt(static_cast<double>(n));
    CHECK(corr(RandomStream(1, 0), RandomStream(1, 1)) < bound);
    CHECK(corr(RandomStream(1, 0), RandomStream(2, 0)) < bound);
    const RandomStream parent(9, 3);
    CHECK(corr(parent.substream(0), parent.substream(1)) < bound);
    CHECK(corr(parent, parent.substream(0)) < bound);

    RandomStream p(5, 5), q(5, 6);
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        equal += p.uniform() == q.uniform();
    CHECK(equal == 0);
}

TEST_CASE("uniform and complex normal moments", "[random]")
{
    RandomStream rs(2024, 0);
    const int n = 400000;
    double su = 0.0, su2 = 0.0, umin = 1.0, umax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rs.uniform();
        su += u;
        su2 += u * u;
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    CHECK(umin > 0.0);
    CHECK(umax < 1.0);
    CHECK(std::abs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(su2 / n - 1.0 / 3) < 5e-3);

    cdouble mean = 0.0, pseudo = 0.0;
    double power = 0.0, fourth = 0.0;
    for (int i = 0; i < n; ++i) {
        const cdouble z = rs.complex_normal();
        mean += z;
        pseudo += z * z;
        power += std::norm(z);
        fourth += std::norm(z) * std::norm(z);
    }
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mean) / n < tol);
    CHECK(std::abs(pseudo) / n < tol);       // circular symmetry
    CHECK(std::abs(power / n - 1.0) < 2 * tol);
    CHECK(std::abs(fourth / n - 2.0) < 6 * tol); // E|z|^4 = 2 for CN(0, 1)

    ComplexMatrix m(300, 300);
    rs.fill_complex_normal(m, 0.25);
    CHECK(std::abs(m.squaredNorm() / m.size() - 0.25) < 0.25 * 5.0 / 300);
}
