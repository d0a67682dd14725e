// SPDX-License-Identifier: Apache-2.0
//
// starwpcn: max-min throughput optimization for STAR-RIS assisted WPCNs
// Copyright (C) 2026 starwpcn developers
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


#include "starwpcn/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace starwpcn
{
    namespace
    {
        Point3 sub(const Point3 &a, const Point3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
        double dot(const Point3 &a, const Point3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
        double norm(const Point3 &a) { return std::sqrt(dot(a, a)); }
        bool finite(const Point3 &a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

        Point3 unit(const Point3 &a)
        {
            const double n = norm(a);
            return {a.x / n, a.y / n, a.z / n};
        }

        // Half-wavelength ULA response towards unit direction `dir`.
        cvec steering(int n, const Point3 &axis, const Point3 &dir)
        {
            cvec a(n);
            const double c = dot(unit(axis), dir);
            for (int i = 0; i < n; ++i)
                a(i) = std::polar(1.0, -pi * i * c);
            return a;
        }

        struct LinkMix
        {
            double los = 0.0;
            double nlos = 1.0;
        };

        LinkMix mix(double k)
        {
            if (std::isinf(k))
                return {1.0, 0.0};
            return {std::sqrt(k / (k + 1.0)), std::sqrt(1.0 / (k + 1.0))};
        }

        cmat draw(const cmat &los, double gain, const LinkMix &m, Rng &rng)
        {
            cmat out(los.rows(), los.cols());
            for (Eigen::Index j = 0; j < los.cols(); ++j)
                for (Eigen::Index i = 0; i < los.rows(); ++i)
                {
                    cdouble v = m.los * los(i, j);
                    if (m.nlos > 0.0)
                        v += m.nlos * rng.complex_normal();
                    out(i, j) = std::sqrt(gain) * v;
                }
            return out;
        }

        // Stream identifiers keep each link's randomness independent of how
        // many users are present.
        std::uint64_t stream(std::uint64_t seed, std::uint64_t link) { return mix_seed(seed, link); }
    }

    const char *to_string(Region r) { return r == Region::transmission ? "T" : "R"; }

    void FadingParams::validate() const
    {
        if (!(pathloss_exponent_hap_ris >= 2.0) || !(pathloss_exponent_ris_user >= 2.0) ||
            !(pathloss_exponent_direct >= 2.0))
            throw DomainError("path-loss exponents must be >= 2");
        if (!(bandwidth > 0.0))
            throw DomainError("bandwidth must be positive");
        if (!(rician_k_factor >= 0.0))
            throw DomainError("Rician K-factor must be >= 0");
        if (!std::isfinite(reference_gain_db))
            throw DomainError("reference gain must be finite");
        if (!(carrier_frequency > 0.0))
            throw DomainError("carrier frequency must be positive");
    }

    void ScenarioGeometry::validate() const
    {
        if (n_antennas < 1)
            throw DomainError("at least one HAP antenna is required");
        if (n_elements < 0)
            throw DomainError("number of surface elements must be >= 0");
        if (!finite(hap) || !finite(ris) || !finite(ris_normal) || !finite(ris_axis) || !finite(hap_axis))
            throw DomainError("non-finite coordinates");
        if (norm(ris_normal) == 0.0 || norm(ris_axis) == 0.0 || norm(hap_axis) == 0.0)
            throw DomainError("normal and array axes must be nonzero");
        if (users.empty())
            throw DomainError("at least one user is required");
        const Point3 n = unit(ris_normal);
        bool seen_t = false, seen_r = false;
        for (std::size_t k = 0; k < users.size(); ++k)
        {
            const auto &u = users[k];
            if (!finite(u.position))
                throw DomainError("non-finite user coordinates");
            if (distance(u.position, hap) <= 0.0 || (n_elements > 0 && distance(u.position, ris) <= 0.0))
                throw DomainError("user " + std::to_string(k) + " coincides with a node");
            const double side = dot(sub(u.position, ris), n);
            if (n_elements > 0)
            {
                if (transmissive)
                {
                    const bool on_r = side > 0.0;
                    if (on_r != (u.region == Region::reflection))
                        throw DomainError("user " + std::to_string(k) + " is tagged " + to_string(u.region) +
                                          " but lies on the other side of the surface");
                }
                else if (side <= 0.0)
                    throw DomainError("user " + std::to_string(k) + " is behind a reflect-only surface");
            }
            (u.region == Region::transmission ? seen_t : seen_r) = true;
        }
        if (n_elements > 0 && transmissive && users.size() >= 2 && !(seen_t && seen_r))
            throw DomainError("each modeled region needs at least one user");
    }

    double distance(const Point3 &a, const Point3 &b) { return norm(sub(a, b)); }

    double path_gain(double d, double exponent, const FadingParams &params)
    {
        if (!(d > 0.0))
            throw DomainError("path_gain: distance must be positive");
        return std::pow(10.0, params.reference_gain_db / 10.0) * std::pow(d, -exponent);
    }

    ChannelSet generate_channels(const ScenarioGeometry &geometry, const FadingParams &params, std::uint64_t seed)
    {
        geometry.validate();
        params.validate();
        const int N = geometry.n_antennas;
        const int M = geometry.n_elements;
        const int K = static_cast<int>(geometry.users.size());
        const LinkMix m = mix(params.rician_k_factor);

        ChannelSet ch;
        const cvec one = cvec::Ones(1);

        // HAP -> surface.
        cmat G_los(M, N);
        double g_hr = 0.0;
        if (M > 0)
        {
            const Point3 d_hs = unit(sub(geometry.ris, geometry.hap));
            const Point3 d_sh = unit(sub(geometry.hap, geometry.ris));
            G_los = steering(M, geometry.ris_axis, d_sh) * steering(N, geometry.hap_axis, d_hs).adjoint();
            g_hr = path_gain(distance(geometry.hap, geometry.ris), params.pathloss_exponent_hap_ris, params);
        }
        {
            Rng rng(stream(seed, 0));
            ch.G = draw(G_los, g_hr, m, rng);
        }

        std::vector<cvec> a_los(K), s_los(K);
        std::vector<double> a_gain(K), s_gain(K);
        for (int k = 0; k < K; ++k)
        {
            const Point3 &p = geometry.users[k].position;
            a_los[k] = steering(N, geometry.hap_axis, unit(sub(p, geometry.hap)));
            a_gain[k] = path_gain(distance(p, geometry.hap), params.pathloss_exponent_direct, params);
            if (M > 0)
            {
                s_los[k] = steering(M, geometry.ris_axis, unit(sub(p, geometry.ris)));
                s_gain[k] = path_gain(distance(p, geometry.ris), params.pathloss_exponent_ris_user, params);
            }
            else
            {
                s_los[k] = cvec(0);
                s_gain[k] = 0.0;
            }
            Rng ra(stream(seed, 1 + 4 * static_cast<std::uint64_t>(k)));
            ch.g_a.push_back(draw(a_los[k], a_gain[k], m, ra));
            Rng rs(stream(seed, 2 + 4 * static_cast<std::uint64_t>(k)));
            ch.g_s.push_back(draw(s_los[k], s_gain[k], m, rs));
        }

        if (params.reciprocal)
        {
            ch.H = ch.G.adjoint();
            for (int k = 0; k < K; ++k)
            {
                ch.h_a.push_back(ch.g_a[k].adjoint());
                ch.h_s.push_back(ch.g_s[k].adjoint());
            }
        }
        else
        {
            // Same large-scale geometry, independent small-scale fading.
            Rng rh(stream(seed, 0x8000000000000000ULL));
            ch.H = draw(cmat(G_los.adjoint()), g_hr, m, rh);
            for (int k = 0; k < K; ++k)
            {
                Rng ra(stream(seed, 3 + 4 * static_cast<std::uint64_t>(k)));
                ch.h_a.push_back(draw(cmat(a_los[k].adjoint()), a_gain[k], m, ra).row(0));
                Rng rs(stream(seed, 4 + 4 * static_cast<std::uint64_t>(k)));
                ch.h_s.push_back(M > 0 ? crow(draw(cmat(s_los[k].adjoint()), s_gain[k], m, rs).row(0)) : crow(0));
            }
        }
        return ch;
    }

    CombinedChannels combine(const ChannelSet &ch)
    {
        const int M = ch.n_elements();
        const int N = ch.n_antennas();
        const int K = ch.n_users();
        if (ch.H.rows() != N || ch.H.cols() != M)
            throw StructureError("combine: uplink surface channel must be N x M");
        if (static_cast<int>(ch.g_s.size()) != K || static_cast<int>(ch.h_a.size()) != K ||
            static_cast<int>(ch.h_s.size()) != K)
            throw StructureError("combine: per-user channel lists differ in length");
        CombinedChannels out;
        for (int k = 0; k < K; ++k)
        {
            if (ch.g_a[k].size() != N || ch.h_a[k].size() != N || ch.g_s[k].size() != M || ch.h_s[k].size() != M)
                throw StructureError("combine: dimension mismatch for user " + std::to_string(k));
            cmat gk(M + 1, N);
            // Channel operand first in both products, so a reciprocal set
            // gives Hk = Gk^H bit for bit even under FMA contraction.
            gk.topRows(M) = (ch.G.array().colwise() * ch.g_s[k].conjugate().array()).matrix();
            gk.row(M) = ch.g_a[k].adjoint();
            cmat hk(N, M + 1);
            hk.leftCols(M) = ch.H * ch.h_s[k].adjoint().asDiagonal();
            hk.col(M) = ch.h_a[k].adjoint();
            out.Gk.push_back(std::move(gk));
            out.Hk.push_back(std::move(hk));
        }
        return out;
    }

    CombinedChannels direct_only(const CombinedChannels &combined)
    {
        CombinedChannels out;
        for (std::size_t k = 0; k < combined.Gk.size(); ++k)
        {
            out.Gk.push_back(combined.Gk[k].bottomRows(1));
            out.Hk.push_back(combined.Hk[k].rightCols(1));
        }
        return out;
    }

    Point3 sample_user_position(const ScenarioGeometry &geometry, Region region, double radius, Rng &rng)
    {
        if (!(radius > 0.0))
            throw DomainError("placement radius must be positive");
        const Point3 n = unit(geometry.ris_normal);
        const Point3 a = unit(geometry.ris_axis);
        const double sgn = region == Region::reflection ? 1.0 : -1.0;
        // Radius bounded away from the surface so every link distance stays
        // well above zero.
        const double r = rng.uniform(0.1 * radius, radius);
        double phi = rng.uniform(-0.5 * pi, 0.5 * pi);
        while (std::cos(phi) < 1e-9)
            phi = rng.uniform(-0.5 * pi, 0.5 * pi);
        const double c = std::cos(phi), s = std::sin(phi);
        return {geometry.ris.x + r * (sgn * c * n.x + s * a.x), geometry.ris.y + r * (sgn * c * n.y + s * a.y),
                geometry.ris.z + r * (sgn * c * n.z + s * a.z)};
    }

    ScenarioGeometry default_geometry(int n_antennas, int n_elements, std::uint64_t seed)
    {
        ScenarioGeometry g;
        g.n_antennas = n_antennas;
        g.n_elements = n_elements;
        Rng rng(mix_seed(seed, 0x5EED));
        g.users.push_back({sample_user_position(g, Region::transmission, 1.0, rng), Region::transmission});
        g.users.push_back({sample_user_position(g, Region::reflection, 1.0, rng), Region::reflection});
        g.validate();
        return g;
    }

    ScenarioGeometry with_reflect_only_surface(const ScenarioGeometry &geometry, Point3 position)
    {
        ScenarioGeometry g = geometry;
        g.ris = position;
        g.ris_normal = {0.0, -1.0, 0.0};
        g.ris_axis = {1.0, 0.0, 0.0};
        g.transmissive = false;
        g.validate();
        return g;
    }
}
